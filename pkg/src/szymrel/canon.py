"""Canonical forms of relations up to isomorphism in the Szymczak category.

Every relation ``R`` on ``X`` is Szym-isomorphic to its quotient on the
classes of recurrent vertices under ``x ~ y`` (same component, every walk
between them of length divisible by the component period).  The quotient
has an edge between two classes iff their representatives are related by
``R^(p+1)`` for an eventual period ``p``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional

from .graphdyn import Decomposition, decompose, eventual_period
from .relcore import (
    Hom,
    Rel,
    classify_relation,
    gparts,
    iter_bits,
    mask_of,
    power,
    restrict,
    restrict_hom,
)

__all__ = [
    "SimPartition",
    "CanonicalObject",
    "CanonWitness",
    "CanonicalCheck",
    "InvWitness",
    "FunctionalPer",
    "sim_partition",
    "canonize",
    "is_canonical",
    "inv_restriction_witnesses",
    "per_functional",
    "format_canonical",
]


@dataclass(frozen=True)
class SimPartition:
    classes: tuple[frozenset[int], ...]
    class_of: dict[int, int]
    component_of_class: tuple[int, ...]


@dataclass(frozen=True)
class CanonicalObject:
    rel: Rel
    decomposition: Decomposition
    p_min: int
    # vertex_origin[i] = source vertices forming canonical vertex i
    vertex_origin: Optional[tuple[frozenset[int], ...]] = None

    @property
    def n(self) -> int:
        return self.rel.n


@dataclass(frozen=True)
class CanonWitness:
    """Morphisms ``S: X -> Xbar`` and ``T: Xbar -> X`` with common shift ``p``."""

    S: Hom
    T: Hom
    p: int


class CanonicalCheck(NamedTuple):
    ok: bool
    failed: Optional[str]  # "i", "ii" or "iii"
    detail: str = ""

    def __bool__(self) -> bool:
        return self.ok


def _resolve_p(r: Rel, p: Optional[int]) -> int:
    ep = eventual_period(r)
    if p is None:
        return ep.p_min
    if not ep.admits(p):
        raise ValueError(
            f"{p} is not an eventual period (index={ep.index}, cycle={ep.cycle_len})"
        )
    return p


def sim_partition(r: Rel, p: Optional[int] = None, dec: Optional[Decomposition] = None) -> SimPartition:
    """Classes ``R^p(x) & [x]_R`` of recurrent vertices."""
    p = _resolve_p(r, p)
    if dec is None:
        dec = decompose(r)
    rp = power(r, p)
    classes: list[frozenset[int]] = []
    comp_of: list[int] = []
    class_of: dict[int, int] = {}
    for k, comp in enumerate(dec.components):
        cmask = mask_of(comp)
        for x in sorted(comp):
            if x in class_of:
                continue
            cls = rp.rows[x] & cmask
            members = frozenset(iter_bits(cls))
            if x not in members:
                raise AssertionError(f"vertex {x} missing from its own class")
            for y in members:
                if y in class_of:
                    raise AssertionError("classes overlap")
                class_of[y] = len(classes)
            classes.append(members)
            comp_of.append(k)
    return SimPartition(tuple(classes), class_of, tuple(comp_of))


def _topological_rank(dec: Decomposition) -> list[int]:
    """Longest chain of strictly larger (upstream) components above each component."""
    k = len(dec.components)
    rank = [0] * k
    # process components so that upstream ones come first
    remaining = set(range(k))
    while remaining:
        ready = [
            u for u in remaining
            if not any(dec.order[u][v] and v != u and v in remaining for v in range(k))
        ]
        for u in ready:
            above = [rank[v] + 1 for v in range(k) if v != u and dec.order[u][v]]
            rank[u] = max(above, default=0)
        remaining.difference_update(ready)
    return rank


def canonize(r: Rel, p: Optional[int] = None) -> tuple[CanonicalObject, CanonWitness]:
    """Canonical form of ``r`` and the Szym-isomorphism witnesses ``(S, T, p)``."""
    p = _resolve_p(r, p)
    dec = decompose(r)
    part = sim_partition(r, p, dec)
    rank = _topological_rank(dec)
    comp_min = [min(c) for c in dec.components]
    order = sorted(
        range(len(part.classes)),
        key=lambda c: (
            rank[part.component_of_class[c]],
            comp_min[part.component_of_class[c]],
            min(part.classes[c]),
        ),
    )
    classes = [part.classes[c] for c in order]
    reps = [min(c) for c in classes]
    new_index = {}
    for i, cls in enumerate(classes):
        for x in cls:
            new_index[x] = i
    m = len(classes)

    rp = power(r, p)
    rp1 = power(r, p + 1)
    rows = []
    for a in reps:
        row = rp1.rows[a]
        rows.append(mask_of({new_index[y] for y in iter_bits(row) if y in new_index}))
    rbar = Rel(m, rows)

    s_rows = []
    for x in range(r.n):
        s_rows.append(mask_of({new_index[y] for y in iter_bits(rp.rows[x]) if y in new_index}))
    S = Hom(r.n, m, s_rows)
    T = Hom(m, r.n, [rp.rows[a] for a in reps])

    obj = CanonicalObject(
        rel=rbar,
        decomposition=decompose(rbar),
        p_min=eventual_period(rbar).p_min,
        vertex_origin=tuple(classes),
    )
    return obj, CanonWitness(S=S, T=T, p=p)


def is_canonical(r: Rel) -> CanonicalCheck:
    dec = decompose(r)
    if dec.non_recurrent:
        return CanonicalCheck(False, "i", f"non-recurrent vertices {sorted(dec.non_recurrent)}")
    for comp in dec.components:
        sub, _ = restrict(r, comp)
        if not classify_relation(sub).is_bijection:
            return CanonicalCheck(False, "ii", f"restriction to {sorted(comp)} is not a bijection")
    p = eventual_period(r).p_min
    if power(r, p + 1) != r:
        return CanonicalCheck(False, "iii", f"R^(1+{p}) != R")
    return CanonicalCheck(True, None)


@dataclass(frozen=True)
class InvWitness:
    """Szym-isomorphism between ``R`` and its restriction to the invariant part ``A``."""

    A: tuple[int, ...]
    restricted: Rel
    S: Hom  # X -> A
    T: Hom  # A -> X
    n: int


def inv_restriction_witnesses(r: Rel) -> InvWitness:
    parts = gparts(r)
    a = tuple(sorted(parts.inv))
    k = parts.exponent
    rk = power(r, k)
    everything = tuple(range(r.n))
    S = restrict_hom(rk, everything, a)
    T = restrict_hom(rk, a, everything)
    sub, _ = restrict(r, a)
    return InvWitness(A=a, restricted=sub, S=S, T=T, n=k)


class FunctionalPer(NamedTuple):
    points: frozenset[int]
    rel: Rel
    index_map: tuple[int, ...]


def per_functional(r: Rel) -> FunctionalPer:
    """Periodic points of a map and the bijection it induces on them."""
    if not classify_relation(r).is_map:
        raise ValueError("relation is not a map")
    # iterate the image until it stops shrinking
    img = (1 << r.n) - 1
    while True:
        nxt = r.image(img)
        if nxt == img:
            break
        img = nxt
    points = frozenset(iter_bits(img))
    sub, index_map = restrict(r, points)
    return FunctionalPer(points, sub, index_map)


def format_canonical(obj: CanonicalObject, witness: Optional[CanonWitness] = None) -> str:
    from .relcore import format_matrix

    lines = [format_matrix(obj.rel).rstrip("\n")]
    lines.append(f"# p_min={obj.p_min}")
    if witness is not None:
        lines.append(f"# shift={witness.p}")
    dec = obj.decomposition
    for k, (comp, q) in enumerate(zip(dec.components, dec.periods)):
        verts = ",".join(str(v) for v in sorted(comp))
        lines.append(f"# component {k} vertices={verts} period={q}")
    if obj.vertex_origin is not None:
        for i, src in enumerate(obj.vertex_origin):
            lines.append(f"# class {i} <- {','.join(str(v) for v in sorted(src))}")
    return "\n".join(lines) + "\n"
