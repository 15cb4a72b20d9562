"""Isomorphism decisions in the Szymczak category of finite relations.

Two relations are Szym-isomorphic iff their canonical forms are conjugate.
This module provides the morphism-level checks (equivalence of ``[phi, m]``
pairs, mutual inverses), conjugacy search, the classifying-graph invariant,
certificates for hashing canonical objects, and a brute-force oracle that
searches Szym-isomorphisms directly for tiny sets.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations, product
from math import gcd
from typing import Optional, Sequence, Union

import numpy as np

from .canon import CanonicalObject, canonize, is_canonical
from .graphdyn import Decomposition, decompose, eventual_period
from .relcore import Hom, Rel, compose, iter_bits, power

__all__ = [
    "SzymMorphism",
    "ClassifyingGraph",
    "Certificate",
    "szym_equivalent",
    "verify_szym_inverse",
    "conjugate",
    "szym_isomorphic",
    "szym_isomorphism_witness",
    "induced_component_map",
    "classifying_graph",
    "classifying_graphs_isomorphic",
    "certificate",
    "brute_force_szym_iso",
    "relation_to_dot",
    "classifying_graph_to_dot",
]


@dataclass(frozen=True)
class SzymMorphism:
    """The class ``[hom, shift]`` of a morphism ``(X, source) -> (Y, target)``."""

    hom: Hom
    shift: int
    source: Rel
    target: Rel

    def __post_init__(self):
        if self.shift < 0:
            raise ValueError("shift must be non-negative")
        if self.hom.shape != (self.source.n, self.target.n):
            raise ValueError(
                f"hom shape {self.hom.shape} does not match objects "
                f"{self.source.n} -> {self.target.n}"
            )
        if compose(self.hom, self.target) != compose(self.source, self.hom):
            raise ValueError("hom does not commute with source and target relations")

    def then(self, other: "SzymMorphism") -> "SzymMorphism":
        """Composite ``other o self`` with shifts added."""
        if self.target != other.source:
            raise ValueError("morphisms are not composable")
        return SzymMorphism(
            compose(self.hom, other.hom), self.shift + other.shift, self.source, other.target
        )

    @classmethod
    def identity(cls, r: Rel) -> "SzymMorphism":
        return cls(Rel.identity(r.n), 0, r, r)


def szym_equivalent(a: SzymMorphism, b: SzymMorphism) -> bool:
    """Whether ``a.hom o R^(b.shift+k) == b.hom o R^(a.shift+k)`` for some ``k``.

    If the identity holds for some ``k`` it holds for every larger ``k``, and
    the powers of the source relation are periodic beyond its index, so it
    suffices to test ``k = index + cycle_len``.
    """
    if a.source != b.source or a.target != b.target:
        raise ValueError("morphisms have different endpoints")
    src = a.source
    ep = eventual_period(src)
    k = ep.index + ep.cycle_len
    lhs = compose(power(src, b.shift + k), a.hom)
    rhs = compose(power(src, a.shift + k), b.hom)
    return lhs == rhs


def verify_szym_inverse(s: SzymMorphism, t: SzymMorphism) -> bool:
    if s.target != t.source or t.target != s.source:
        raise ValueError("morphisms are not mutually composable")
    round_x = s.then(t)
    round_y = t.then(s)
    return szym_equivalent(round_x, SzymMorphism.identity(s.source)) and szym_equivalent(
        round_y, SzymMorphism.identity(s.target)
    )


# -- conjugacy ------------------------------------------------------------


def _vertex_invariants(r: Rel, dec: Optional[Decomposition] = None) -> list[tuple]:
    if dec is None:
        dec = decompose(r)
    n = r.n
    comp_idx = dec.component_index()
    indeg = [0] * n
    for row in r.rows:
        for j in iter_bits(row):
            indeg[j] += 1
    out = []
    for v in range(n):
        k = comp_idx.get(v)
        period = dec.periods[k] if k is not None else 0
        size = len(dec.components[k]) if k is not None else 0
        out.append(
            (period, size, indeg[v], bin(r.rows[v]).count("1"), (r.rows[v] >> v) & 1)
        )
    return out


def _refine(r: Rel, colors: list) -> list[int]:
    """Colour refinement seeded by ``colors``; returns labelling-independent integer colours."""
    n = r.n
    preds = [[] for _ in range(n)]
    for i, row in enumerate(r.rows):
        for j in iter_bits(row):
            preds[j].append(i)
    palette = {c: i for i, c in enumerate(sorted(set(colors)))}
    cur = [palette[c] for c in colors]
    while True:
        sig = [
            (
                cur[v],
                tuple(sorted(cur[w] for w in iter_bits(r.rows[v]))),
                tuple(sorted(cur[w] for w in preds[v])),
            )
            for v in range(n)
        ]
        palette = {s: i for i, s in enumerate(sorted(set(sig)))}
        nxt = [palette[s] for s in sig]
        if len(palette) == len(set(cur)):
            return nxt
        cur = nxt


def conjugate(a: Rel, b: Rel) -> Optional[tuple[int, ...]]:
    """A bijection ``f`` with ``i a j <=> f(i) b f(j)``, or ``None``."""
    if a.n != b.n:
        return None
    n = a.n
    if len(a) != len(b):
        return None
    inv_a = _vertex_invariants(a)
    inv_b = _vertex_invariants(b)
    if sorted(inv_a) != sorted(inv_b):
        return None
    # refine both jointly so colour names are comparable
    joint = Rel(
        2 * n,
        list(a.rows) + [row << n for row in b.rows],
    )
    colors = _refine(joint, inv_a + inv_b)
    ca, cb = colors[:n], colors[n:]
    if sorted(ca) != sorted(cb):
        return None
    candidates = [[w for w in range(n) if cb[w] == ca[v]] for v in range(n)]
    order = sorted(range(n), key=lambda v: (len(candidates[v]), v))
    f = [-1] * n
    used = [False] * n

    def consistent(v: int, w: int) -> bool:
        if ((a.rows[v] >> v) & 1) != ((b.rows[w] >> w) & 1):
            return False
        for u in range(n):
            fu = f[u]
            if fu < 0:
                continue
            if ((a.rows[v] >> u) & 1) != ((b.rows[w] >> fu) & 1):
                return False
            if ((a.rows[u] >> v) & 1) != ((b.rows[fu] >> w) & 1):
                return False
        return True

    def search(depth: int) -> bool:
        if depth == n:
            return True
        v = order[depth]
        for w in candidates[v]:
            if used[w] or not consistent(v, w):
                continue
            f[v] = w
            used[w] = True
            if search(depth + 1):
                return True
            f[v] = -1
            used[w] = False
        return False

    if search(0):
        return tuple(f)
    return None


def _bijection_hom(f: Sequence[int]) -> Hom:
    return Hom(len(f), len(f), [1 << w for w in f])


def szym_isomorphism_witness(a: Rel, b: Rel) -> Optional[tuple[SzymMorphism, SzymMorphism]]:
    """Mutually inverse Szym morphisms ``a -> b`` and ``b -> a``, or ``None``.

    Built by chaining the canonical-form witnesses of both sides through a
    conjugacy of the canonical objects.
    """
    ca, wa = canonize(a)
    cb, wb = canonize(b)
    f = conjugate(ca.rel, cb.rel)
    if f is None:
        return None
    finv = [0] * len(f)
    for i, w in enumerate(f):
        finv[w] = i
    fh = Rel(len(f), _bijection_hom(f).rows)
    fih = Rel(len(f), _bijection_hom(finv).rows)
    forward = SzymMorphism(compose(compose(wa.S, fh), wb.T), wa.p + wb.p, a, b)
    backward = SzymMorphism(compose(compose(wb.S, fih), wa.T), wa.p + wb.p, b, a)
    return forward, backward


def szym_isomorphic(a: Rel, b: Rel) -> bool:
    ca, _ = canonize(a)
    cb, _ = canonize(b)
    return conjugate(ca.rel, cb.rel) is not None


def induced_component_map(s: Hom, source: Rel, target: Rel) -> dict[int, int]:
    """Component map induced by a Szym-isomorphism between canonical objects.

    Component ``U`` of ``source`` maps to the component ``V`` of ``target``
    meeting ``S(U)`` that no other component meeting ``S(U)`` leads into.
    """
    ds, dt = decompose(source), decompose(target)
    t_index = dt.component_index()
    out = {}
    for k, comp in enumerate(ds.components):
        img = 0
        for x in comp:
            img |= s.rows[x]
        met = sorted({t_index[y] for y in iter_bits(img) if y in t_index})
        tops = [v for v in met if not any(w != v and dt.order[v][w] for w in met)]
        if len(tops) != 1:
            raise ValueError(f"component {k} has no unique image component")
        out[k] = tops[0]
    return out


# -- classifying graph ----------------------------------------------------


@dataclass(frozen=True)
class ClassifyingGraph:
    """Components as vertices labelled by period; edges labelled by connection count."""

    periods: tuple[int, ...]
    edges: tuple[tuple[int, int, int], ...]  # (u, v, l), sorted
    components: tuple[frozenset[int], ...] = field(default=(), compare=False)

    def edge_map(self) -> dict[tuple[int, int], int]:
        return {(u, v): l for u, v, l in self.edges}

    def to_text(self) -> str:
        lines = [f"v {i} period={q}" for i, q in enumerate(self.periods)]
        lines += [f"e {u} {v} l={l}" for u, v, l in self.edges]
        return "\n".join(lines) + "\n"

    def to_line(self) -> str:
        return ";".join(self.to_text().strip().splitlines())


def _as_canonical_rel(c: Union[CanonicalObject, Rel]) -> Rel:
    r = c.rel if isinstance(c, CanonicalObject) else c
    check = is_canonical(r)
    if not check:
        raise ValueError(f"relation is not canonical: condition ({check.failed}) {check.detail}")
    return r


def _cycle_positions(r: Rel, comp: frozenset[int]) -> dict[int, int]:
    """Walk length from the smallest vertex to each vertex of a cyclic component."""
    base = min(comp)
    pos = {base: 0}
    v = base
    step = 0
    while True:
        inside = [w for w in iter_bits(r.rows[v]) if w in comp]
        v = inside[0]
        step += 1
        if v == base:
            break
        pos[v] = step
    return pos


def classifying_graph(c: Union[CanonicalObject, Rel]) -> ClassifyingGraph:
    r = _as_canonical_rel(c)
    dec = decompose(r)
    comps = dec.components
    pos = [_cycle_positions(r, comp) for comp in comps]
    edges = []
    for u, cu in enumerate(comps):
        for v, cv in enumerate(comps):
            if u == v:
                continue
            g = gcd(dec.periods[u], dec.periods[v])
            residues = set()
            for a in cu:
                for b in iter_bits(r.rows[a]):
                    if b in cv:
                        residues.add((pos[v][b] - pos[u][a]) % g)
            if residues:
                edges.append((u, v, len(residues)))
    return ClassifyingGraph(dec.periods, tuple(sorted(edges)), comps)


def classifying_graphs_isomorphic(g1: ClassifyingGraph, g2: ClassifyingGraph) -> bool:
    n = len(g1.periods)
    if n != len(g2.periods) or len(g1.edges) != len(g2.edges):
        return False
    if sorted(g1.periods) != sorted(g2.periods):
        return False
    e1, e2 = g1.edge_map(), g2.edge_map()

    def profile(g, em, v):
        outs = sorted(l for (a, b), l in em.items() if a == v)
        ins = sorted(l for (a, b), l in em.items() if b == v)
        return (g.periods[v], tuple(outs), tuple(ins))

    p1 = [profile(g1, e1, v) for v in range(n)]
    p2 = [profile(g2, e2, v) for v in range(n)]
    if sorted(p1) != sorted(p2):
        return False
    f = [-1] * n
    used = [False] * n

    def ok(v, w):
        for u in range(n):
            fu = f[u]
            if fu < 0:
                continue
            if e1.get((v, u)) != e2.get((w, fu)) or e1.get((u, v)) != e2.get((fu, w)):
                return False
        return True

    def search(v):
        if v == n:
            return True
        for w in range(n):
            if not used[w] and p1[v] == p2[w] and ok(v, w):
                f[v] = w
                used[w] = True
                if search(v + 1):
                    return True
                f[v] = -1
                used[w] = False
        return False

    return search(0)


# -- certificates ---------------------------------------------------------


@dataclass(frozen=True, order=True)
class Certificate:
    """Minimal row-major adjacency bitstring over invariant-respecting labellings."""

    n: int
    data: bytes

    def hex(self) -> str:
        return f"{self.n:02x}" + self.data.hex()

    @classmethod
    def from_hex(cls, text: str) -> "Certificate":
        raw = bytes.fromhex(text)
        if not raw:
            raise ValueError("empty certificate")
        n = raw[0]
        data = raw[1:]
        if len(data) != (n * n + 7) // 8:
            raise ValueError("certificate length does not match n")
        return cls(n, data)

    def bits(self) -> int:
        nbytes = len(self.data)
        pad = nbytes * 8 - self.n * self.n
        return int.from_bytes(self.data, "big") >> pad

    def to_rel(self) -> Rel:
        n = self.n
        value = self.bits()
        rows = []
        for i in range(n):
            row = 0
            for j in range(n):
                if (value >> (n * n - 1 - (i * n + j))) & 1:
                    row |= 1 << j
            rows.append(row)
        return Rel(n, rows)


def _bitstring(r: Rel, order: Sequence[int]) -> int:
    """Row-major bits (MSB first) of ``r`` with vertex ``order[i]`` placed at position ``i``."""
    value = 0
    for v in order:
        row = r.rows[v]
        for w in order:
            value = (value << 1) | ((row >> w) & 1)
    return value


def certificate(c: Union[CanonicalObject, Rel]) -> Certificate:
    r = _as_canonical_rel(c)
    n = r.n
    nbytes = (n * n + 7) // 8
    if n == 0:
        return Certificate(0, b"")
    inv = _vertex_invariants(r)
    colors = _refine(r, inv)
    cells: dict[int, list[int]] = {}
    for v, col in enumerate(colors):
        cells.setdefault(col, []).append(v)
    groups = [cells[k] for k in sorted(cells)]
    best = None
    for choice in product(*(permutations(g) for g in groups)):
        order = [v for part in choice for v in part]
        value = _bitstring(r, order)
        if best is None or value < best:
            best = value
    pad = nbytes * 8 - n * n
    return Certificate(n, (best << pad).to_bytes(nbytes, "big"))


# -- brute-force oracle ---------------------------------------------------


def _codes(nx: int, ny: int) -> np.ndarray:
    return np.arange(1 << (nx * ny), dtype=np.int64)


def _compose_codes(a, nx: int, ny: int, b, nz: int):
    """Vectorised pipeline composition of packed homs (bit ``i*ncols + j``)."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    out = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
    for i in range(nx):
        for k in range(nz):
            acc = np.zeros_like(out)
            for j in range(ny):
                acc |= ((a >> (i * ny + j)) & 1) & ((b >> (j * nz + k)) & 1)
            out |= acc << (i * nz + k)
    return out


def _pack(h: Hom) -> int:
    code = 0
    for i, row in enumerate(h.rows):
        for j in iter_bits(row):
            code |= 1 << (i * h.n_dst + j)
    return code


def _oracle_powers(code: int, n: int):
    """Powers ``R^0..R^K`` of a packed relation together with index and cycle length."""
    ident = sum(1 << (i * n + i) for i in range(n))
    seq = [ident]
    seen = {}
    k = 0
    while True:
        k += 1
        nxt = int(_compose_codes(seq[-1], n, n, code, n))
        seq.append(nxt)
        if nxt in seen:
            index = seen[nxt]
            return seq, index, k - index
        seen[nxt] = k


def brute_force_szym_iso(a: Rel, b: Rel) -> bool:
    """Search all endomorphism-commuting pairs ``S, T`` and shifts for Szym inverses.

    Only for ``n <= 3``; uses nothing but packed-code composition.
    """
    na, nb = a.n, b.n
    if na > 3 or nb > 3:
        raise ValueError("brute force is limited to sets of at most 3 elements")
    ra, rb = _pack(a), _pack(b)
    pa, ia, ca = _oracle_powers(ra, na)
    pb, ib, cb = _oracle_powers(rb, nb)
    pmin_a = ca * -(-ia // ca)
    pmin_b = cb * -(-ib // cb)
    bound = 2 * max(pmin_a, pmin_b)

    s_all = _codes(na, nb)
    s_ok = s_all[_compose_codes(s_all, na, nb, rb, nb) == _compose_codes(ra, na, na, s_all, nb)]
    t_all = _codes(nb, na)
    t_ok = t_all[_compose_codes(t_all, nb, na, ra, na) == _compose_codes(rb, nb, nb, t_all, na)]
    if len(s_ok) == 0 or len(t_ok) == 0:
        return False
    ts = _compose_codes(s_ok[:, None], na, nb, t_ok[None, :], na)  # X -> X
    st = _compose_codes(t_ok[None, :], nb, na, s_ok[:, None], nb)  # Y -> Y

    def extend(seq, code, n, upto):
        while len(seq) <= upto:
            seq.append(int(_compose_codes(seq[-1], n, n, code, n)))

    ka, kb = ia + ca, ib + cb
    extend(pa, ra, na, ka + 2 * bound)
    extend(pb, rb, nb, kb + 2 * bound)
    m_a, m_b = _codes(na, na), _codes(nb, nb)
    lhs_a = _compose_codes(pa[ka], na, na, m_a, na)
    lhs_b = _compose_codes(pb[kb], nb, nb, m_b, nb)
    for shift in range(0, 2 * bound + 1):
        good_a = lhs_a == pa[shift + ka]
        good_b = lhs_b == pb[shift + kb]
        if np.any(good_a[ts] & good_b[st]):
            return True
    return False


# -- export ---------------------------------------------------------------


def relation_to_dot(r: Hom, name: str = "R") -> str:
    lines = [f"digraph {name} {{"]
    for v in range(r.n_src):
        lines.append(f"  {v};")
    for i, j in r.pairs():
        lines.append(f"  {i} -> {j};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def classifying_graph_to_dot(g: ClassifyingGraph, name: str = "k") -> str:
    lines = [f"digraph {name} {{"]
    for i, q in enumerate(g.periods):
        lines.append(f'  c{i} [label="{q}"];')
    for u, v, l in g.edges:
        lines.append(f'  c{u} -> c{v} [label="{l}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
