"""Classifying graphs: a necessary invariant that does not decide isomorphism.

Run with ``python3 demos/classifying_graphs.py``.
"""

from pathlib import Path

from szymrel import Rel, classifying_graph, classifying_graphs_isomorphic, parse_matrix, szym_isomorphic
from szymrel.szymiso import classifying_graph_to_dot

DATA = Path(__file__).parent / "data"

ra = parse_matrix((DATA / "ra.mat").read_text())
rb = parse_matrix((DATA / "rb.mat").read_text())

# %% Two 2-cycles joined by edges: the edge label counts residue classes hit
ga, gb = classifying_graph(ra), classifying_graph(rb)
print(ga.to_text())
print(gb.to_text())
print("graphs isomorphic:", classifying_graphs_isomorphic(ga, gb))
print("relations isomorphic:", szym_isomorphic(ra, rb))
print(classifying_graph_to_dot(ga, "ra"))


# %% The invariant is not complete.  Two 4-cycles joined with residue sets
# {0, 1} and {0, 2}: both edges carry l = 2, but no rotation maps one residue
# set onto the other.
def joined_cycles(residues):
    rows = [0] * 8
    for i in range(4):
        rows[i] |= 1 << ((i + 1) % 4)
        rows[4 + i] |= 1 << (4 + (i + 1) % 4)
        for s in residues:
            rows[i] |= 1 << (4 + (i + s) % 4)
    return Rel(8, rows)


a, b = joined_cycles({0, 1}), joined_cycles({0, 2})
print(classifying_graph(a).to_line())
print(classifying_graph(b).to_line())
print("graphs isomorphic:", classifying_graphs_isomorphic(classifying_graph(a), classifying_graph(b)))
print("relations isomorphic:", szym_isomorphic(a, b))
