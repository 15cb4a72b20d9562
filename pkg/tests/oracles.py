"""Independent reference computations on dense numpy boolean matrices.

Nothing here calls into the library beyond reading ``rows``; tests compare
library results against these.
"""

from itertools import permutations, product
from math import gcd

import numpy as np


def to_np(h):
    n_src, n_dst = h.n_src, h.n_dst
    m = np.zeros((n_src, n_dst), dtype=bool)
    for i, row in enumerate(h.rows):
        for j in range(n_dst):
            m[i, j] = (row >> j) & 1
    return m


def rows_of(m):
    m = np.asarray(m, dtype=bool)
    return [int(sum(1 << j for j in np.flatnonzero(r))) for r in m]


def mul(a, b):
    """Pipeline composition: first ``a``, then ``b``."""
    return (a.astype(np.int64) @ b.astype(np.int64)) > 0


def mpow(a, k):
    out = np.eye(a.shape[0], dtype=bool)
    for _ in range(k):
        out = mul(out, a)
    return out


def power_sequence(a):
    """(index, cycle) of the sequence a^1, a^2, ... by brute comparison."""
    seq = [mpow(a, 1)]
    while True:
        nxt = mul(seq[-1], a)
        for i, prev in enumerate(seq):
            if np.array_equal(prev, nxt):
                return i + 1, len(seq) - i
        seq.append(nxt)


def min_eventual_period(a):
    """Smallest p >= 1 with a^(i+p) == a^i for all i >= p, by direct search."""
    index, cycle = power_sequence(a)
    bound = index + cycle + 1
    for p in range(1, bound + 1):
        if all(np.array_equal(mpow(a, i + p), mpow(a, i)) for i in range(p, p + index + cycle + 1)):
            return p
    raise AssertionError("no eventual period found")


def sccs(a):
    """Strongly connected classes of positive-length cycles via transitive closure."""
    n = a.shape[0]
    reach = a.copy()
    for _ in range(n):
        reach = reach | mul(reach, a)
    comps = []
    seen = set()
    for x in range(n):
        if x in seen or not reach[x, x]:
            continue
        comp = frozenset(y for y in range(n) if reach[x, y] and reach[y, x])
        seen |= comp
        comps.append(comp)
    return sorted(comps, key=min), reach


def cycle_gcd(a, comp):
    """gcd of closed-walk lengths inside ``comp`` up to a generous bound."""
    verts = sorted(comp)
    sub = a[np.ix_(verts, verts)]
    g = 0
    cur = np.eye(len(verts), dtype=bool)
    for k in range(1, 2 * len(verts) * len(verts) + 2):
        cur = mul(cur, sub)
        if cur.diagonal().any():
            g = gcd(g, k)
    return g


def all_rels(n):
    for bits in product((0, 1), repeat=n * n):
        yield np.array(bits, dtype=bool).reshape(n, n)


def conjugate_brute(a, b):
    """Whether some permutation carries ``a`` onto ``b``."""
    if a.shape != b.shape:
        return False
    n = a.shape[0]
    for perm in permutations(range(n)):
        p = list(perm)
        if np.array_equal(a, b[np.ix_(p, p)]):
            return True
    return False
