"""A five-point relation and its four-point canonical form.

Run with ``python3 demos/worked_example.py``.
"""

from pathlib import Path

from szymrel import SzymMorphism, canonize, decompose, eventual_period, parse_matrix, verify_szym_inverse
from szymrel.canon import format_canonical, sim_partition
from szymrel.graphdyn import format_decomposition
from szymrel.relcore import compose, power

DATA = Path(__file__).parent / "data"

r1 = parse_matrix((DATA / "r1.mat").read_text())
r3 = parse_matrix((DATA / "r3.mat").read_text())

# %% Structure of r1: two components, both of period 2
ep = eventual_period(r1)
print(format_decomposition(decompose(r1), ep))

# The power sequence only settles at r1^3, so 2 is not an eventual period
# even though both components have period 2.
print("r1^2 == r1^4:", power(r1, 2) == power(r1, 4))
print("r1^4 == r1^8:", power(r1, 4) == power(r1, 8))

# %% Classes of the ~ partition
part = sim_partition(r1, ep.p_min)
print("classes:", [sorted(c) for c in part.classes])

# %% Canonical form and witnesses
obj, wit = canonize(r1)
print(format_canonical(obj, wit))
print("equals r3:", obj.rel == r3)

# compose(f, g) applies f first, so compose(S, T) is "S then T"
checks = {
    "T then r1 == r3 then T": compose(wit.T, r1) == compose(r3, wit.T),
    "S then r3 == r1 then S": compose(wit.S, r3) == compose(r1, wit.S),
    "T then S == r3^p": compose(wit.T, wit.S) == power(r3, wit.p),
    "S then T == r1^p": compose(wit.S, wit.T) == power(r1, wit.p),
}
for name, ok in checks.items():
    print(f"{name}: {ok}")

s = SzymMorphism(wit.S, wit.p, r1, r3)
t = SzymMorphism(wit.T, wit.p, r3, r1)
print("mutually inverse:", verify_szym_inverse(s, t))
