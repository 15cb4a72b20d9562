"""Boolean relation algebra on finite sets.

Relations are stored row-wise as Python integers: bit ``j`` of ``rows[i]``
is set iff ``i R j``.  A :class:`Hom` is a relation between two (possibly
different) finite sets ``{0..n_src-1}`` and ``{0..n_dst-1}``; a :class:`Rel`
is an endorelation and doubles as a digraph.

Composition is written in pipeline order: ``compose(first, second)`` applies
``first`` and then ``second``.  In the usual right-to-left notation this is
``second o first``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple, Optional, Sequence

import numpy as np

__all__ = [
    "Hom",
    "Rel",
    "BlockStructure",
    "RelationFlags",
    "GParts",
    "ParseError",
    "compose",
    "inverse",
    "power",
    "dom",
    "im",
    "gparts",
    "classify_relation",
    "restrict",
    "restrict_hom",
    "block_bijection",
    "parse_matrix",
    "format_matrix",
    "iter_bits",
    "mask_of",
]


def iter_bits(mask: int):
    """Yield the indices of set bits of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


class Hom:
    """A relation ``X -> Y`` with ``|X| = n_src`` and ``|Y| = n_dst``."""

    __slots__ = ("n_src", "n_dst", "rows", "_hash")

    def __init__(self, n_src: int, n_dst: int, rows: Iterable[int]):
        rows = tuple(int(r) for r in rows)
        if n_src < 0 or n_dst < 0:
            raise ValueError("cardinalities must be non-negative")
        if len(rows) != n_src:
            raise ValueError(f"expected {n_src} rows, got {len(rows)}")
        limit = 1 << n_dst
        for i, r in enumerate(rows):
            if r < 0 or r >= limit:
                raise ValueError(f"row {i} has bits outside 0..{n_dst - 1}")
        object.__setattr__(self, "n_src", n_src)
        object.__setattr__(self, "n_dst", n_dst)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError(f"{type(self).__name__} is immutable")

    # -- construction -----------------------------------------------------
    @classmethod
    def from_pairs(cls, n_src: int, n_dst: int, pairs: Iterable[tuple[int, int]]) -> "Hom":
        rows = [0] * n_src
        for x, y in pairs:
            if not (0 <= x < n_src and 0 <= y < n_dst):
                raise ValueError(f"pair {(x, y)} out of range")
            rows[x] |= 1 << y
        return Hom(n_src, n_dst, rows)

    @classmethod
    def from_matrix(cls, matrix) -> "Hom":
        a = np.asarray(matrix, dtype=bool)
        if a.ndim != 2:
            raise ValueError("matrix must be two-dimensional")
        n_src, n_dst = a.shape
        return Hom(n_src, n_dst, (mask_of(np.flatnonzero(row)) for row in a))

    @classmethod
    def empty(cls, n_src: int, n_dst: int) -> "Hom":
        return Hom(n_src, n_dst, [0] * n_src)

    # -- views ------------------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return (self.n_src, self.n_dst)

    def pairs(self) -> list[tuple[int, int]]:
        return [(i, j) for i, r in enumerate(self.rows) for j in iter_bits(r)]

    def to_matrix(self) -> np.ndarray:
        a = np.zeros((self.n_src, self.n_dst), dtype=bool)
        for i, j in self.pairs():
            a[i, j] = True
        return a

    def image(self, vertices: int) -> int:
        """Image of a vertex bitmask, as a bitmask."""
        out = 0
        for v in iter_bits(vertices):
            out |= self.rows[v]
        return out

    def __contains__(self, pair) -> bool:
        x, y = pair
        return bool((self.rows[x] >> y) & 1)

    def __len__(self) -> int:
        return sum(bin(r).count("1") for r in self.rows)

    def __le__(self, other: "Hom") -> bool:
        if self.shape != other.shape:
            raise ValueError("cannot compare relations of different shapes")
        return all(a & ~b == 0 for a, b in zip(self.rows, other.rows))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Hom):
            return NotImplemented
        return (self.n_src, self.n_dst, self.rows) == (other.n_src, other.n_dst, other.rows)

    def __hash__(self) -> int:
        h = self._hash
        if h is None:
            h = hash((self.n_src, self.n_dst, self.rows))
            object.__setattr__(self, "_hash", h)
        return h

    def __repr__(self) -> str:
        body = ",".join(
            "".join("1" if (r >> j) & 1 else "0" for j in range(self.n_dst)) for r in self.rows
        )
        return f"{type(self).__name__}({self.n_src}x{self.n_dst}: {body})"


class Rel(Hom):
    """An endorelation on ``{0..n-1}``."""

    __slots__ = ("_powers",)

    def __init__(self, n: int, rows: Iterable[int]):
        super().__init__(n, n, rows)
        object.__setattr__(self, "_powers", None)

    @property
    def n(self) -> int:
        return self.n_src

    @classmethod
    def from_pairs(cls, n: int, pairs: Iterable[tuple[int, int]]) -> "Rel":
        return Rel(n, Hom.from_pairs(n, n, pairs).rows)

    @classmethod
    def from_matrix(cls, matrix) -> "Rel":
        h = Hom.from_matrix(matrix)
        if h.n_src != h.n_dst:
            raise ValueError(f"endorelation must be square, got {h.shape}")
        return Rel(h.n_src, h.rows)

    @classmethod
    def identity(cls, n: int) -> "Rel":
        return Rel(n, [1 << i for i in range(n)])

    @classmethod
    def full(cls, n: int) -> "Rel":
        return Rel(n, [(1 << n) - 1] * n)

    @classmethod
    def empty(cls, n: int) -> "Rel":
        return Rel(n, [0] * n)

    @classmethod
    def from_hom(cls, h: Hom) -> "Rel":
        if isinstance(h, Rel):
            return h
        if h.n_src != h.n_dst:
            raise ValueError(f"endorelation must be square, got {h.shape}")
        return Rel(h.n_src, h.rows)

    def relabel(self, perm: Sequence[int]) -> "Rel":
        """Conjugate by the bijection ``i -> perm[i]``."""
        rows = [0] * self.n
        for i, r in enumerate(self.rows):
            rows[perm[i]] = mask_of(perm[j] for j in iter_bits(r))
        return Rel(self.n, rows)


def _as_result(n_src: int, n_dst: int, rows) -> Hom:
    if n_src == n_dst:
        return Rel(n_src, rows)
    return Hom(n_src, n_dst, rows)


def compose(f: Hom, g: Hom) -> Hom:
    """Apply ``f`` then ``g``: ``(x, z)`` is related iff ``x f y g z`` for some ``y``."""
    if f.n_dst != g.n_src:
        raise ValueError(f"dimension mismatch: {f.shape} then {g.shape}")
    grows = g.rows
    out = []
    for r in f.rows:
        acc = 0
        while r:
            low = r & -r
            acc |= grows[low.bit_length() - 1]
            r ^= low
        out.append(acc)
    return _as_result(f.n_src, g.n_dst, out)


def inverse(f: Hom) -> Hom:
    cols = [0] * f.n_dst
    for i, r in enumerate(f.rows):
        bit = 1 << i
        for j in iter_bits(r):
            cols[j] |= bit
    return _as_result(f.n_dst, f.n_src, cols)


def power(r: Rel, k: int) -> Rel:
    """``r`` composed with itself ``k`` times; the power sequence is memoised on ``r``."""
    if k < 0:
        raise ValueError("negative powers are not supported")
    if not isinstance(r, Rel):
        r = Rel.from_hom(r)
    seq = r._powers
    if seq is None:
        seq = [Rel.identity(r.n)]
        object.__setattr__(r, "_powers", seq)
    while len(seq) <= k:
        seq.append(compose(seq[-1], r))
    return seq[k]


def _dom_mask(f: Hom) -> int:
    return mask_of(i for i, row in enumerate(f.rows) if row)


def _im_mask(f: Hom) -> int:
    out = 0
    for row in f.rows:
        out |= row
    return out


def dom(f: Hom) -> frozenset[int]:
    return frozenset(iter_bits(_dom_mask(f)))


def im(f: Hom) -> frozenset[int]:
    return frozenset(iter_bits(_im_mask(f)))


class GParts(NamedTuple):
    gdom: frozenset[int]
    gim: frozenset[int]
    inv: frozenset[int]
    exponent: int  # smallest k >= 1 with dom R^k = gdom and im R^k = gim


def gparts(r: Rel) -> GParts:
    """Generalised domain, image and invariant part of ``r``.

    ``dom R^k`` and ``im R^k`` shrink monotonically, and each is a function
    of the previous one, so both are fixed as soon as they stop changing.
    """
    k = 1
    d, i = _dom_mask(power(r, 1)), _im_mask(power(r, 1))
    while True:
        nd, ni = _dom_mask(power(r, k + 1)), _im_mask(power(r, k + 1))
        if nd == d and ni == i:
            break
        d, i = nd, ni
        k += 1
    return GParts(frozenset(iter_bits(d)), frozenset(iter_bits(i)), frozenset(iter_bits(d & i)), k)


@dataclass(frozen=True)
class RelationFlags:
    is_partial_map: bool
    is_map: bool
    is_injective: bool
    is_surjective: bool
    is_bijection: bool
    is_wide: Optional[bool]  # None for non-square relations


def classify_relation(f: Hom) -> RelationFlags:
    partial = all(r & (r - 1) == 0 for r in f.rows)
    total = all(f.rows)
    seen = 0
    injective = True
    for r in f.rows:
        if seen & r:
            injective = False
            break
        seen |= r
    surjective = _im_mask(f) == (1 << f.n_dst) - 1
    wide = None
    if f.n_src == f.n_dst:
        wide = len(gparts(Rel.from_hom(f)).inv) == f.n_src
    return RelationFlags(
        is_partial_map=partial,
        is_map=partial and total,
        is_injective=injective,
        is_surjective=surjective,
        is_bijection=partial and total and injective and surjective,
        is_wide=wide,
    )


def restrict(r: Rel, vertices: Iterable[int]) -> tuple[Rel, tuple[int, ...]]:
    """``r`` restricted to ``A x A``, relabelled onto ``0..|A|-1``.

    Returns the restricted relation and ``index_map`` with
    ``index_map[new] == old``.
    """
    index_map = tuple(sorted(set(vertices)))
    for v in index_map:
        if not 0 <= v < r.n:
            raise ValueError(f"vertex {v} out of range")
    sub = restrict_hom(r, index_map, index_map)
    return Rel(len(index_map), sub.rows), index_map


def restrict_hom(f: Hom, src: Sequence[int], dst: Sequence[int]) -> Hom:
    """``f`` restricted to ``src x dst`` with both sides relabelled in the given order."""
    pos = {old: new for new, old in enumerate(dst)}
    rows = []
    for x in src:
        row = f.rows[x]
        rows.append(mask_of(pos[y] for y in iter_bits(row) if y in pos))
    return _as_result(len(src), len(dst), rows)


@dataclass(frozen=True)
class BlockStructure:
    """A partition into blocks and a permutation ``alpha`` of block indices."""

    blocks: tuple[frozenset[int], ...]
    alpha: tuple[int, ...]

    @property
    def size(self) -> int:
        return max((len(b) for b in self.blocks), default=0)

    def to_rel(self, n: int) -> Rel:
        rows = [0] * n
        for a, target in zip(self.blocks, self.alpha):
            m = mask_of(self.blocks[target])
            for x in a:
                rows[x] = m
        return Rel(n, rows)


def block_bijection(r: Rel) -> Optional[BlockStructure]:
    """The unique block structure of ``r``, or ``None`` if ``r`` is not a block bijection."""
    n = r.n
    images = set(r.rows)
    if 0 in images:
        return None
    # rows must be pairwise equal or disjoint
    union = 0
    for m in images:
        if union & m:
            return None
        union |= m
    if union != (1 << n) - 1:
        return None
    # blocks = classes of vertices with the same row
    blocks: list[int] = []
    by_row: dict[int, int] = {}
    for x, row in enumerate(r.rows):
        if row not in by_row:
            by_row[row] = len(blocks)
            blocks.append(0)
        blocks[by_row[row]] |= 1 << x
    index = {m: k for k, m in enumerate(blocks)}
    alpha = []
    for k, b in enumerate(blocks):
        row = r.rows[(b & -b).bit_length() - 1]
        if row not in index:
            return None
        alpha.append(index[row])
    if sorted(alpha) != list(range(len(blocks))):
        return None
    # order blocks by smallest element for a stable result
    order = sorted(range(len(blocks)), key=lambda k: (blocks[k] & -blocks[k]))
    renum = {old: new for new, old in enumerate(order)}
    return BlockStructure(
        blocks=tuple(frozenset(iter_bits(blocks[k])) for k in order),
        alpha=tuple(renum[alpha[k]] for k in order),
    )


# -- text format ----------------------------------------------------------


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.message = message
        self.line = line
        self.column = column


def parse_matrix(text: str) -> Hom:
    """Parse the 0/1 matrix text format.

    The first non-blank line holds ``n`` (endorelation) or ``n_src n_dst``;
    each following line is one row of ``0``/``1`` characters, optionally
    separated by whitespace.  Blank lines and lines starting with ``#`` are
    ignored.
    """
    lines = [
        (lineno, raw)
        for lineno, raw in enumerate(text.splitlines(), start=1)
        if raw.strip() and not raw.lstrip().startswith("#")
    ]
    if not lines:
        raise ParseError("missing header line", 1)
    lineno, header = lines[0]
    fields = header.split()
    if len(fields) not in (1, 2):
        raise ParseError("header must be 'n' or 'n_src n_dst'", lineno)
    dims = []
    for tok in fields:
        if not tok.isdigit():
            raise ParseError(f"invalid cardinality {tok!r}", lineno, header.index(tok) + 1)
        dims.append(int(tok))
    square = len(dims) == 1
    n_src, n_dst = (dims[0], dims[0]) if square else dims
    body = lines[1:]
    if len(body) != n_src:
        where = body[n_src][0] if len(body) > n_src else (lines[-1][0] + 1)
        raise ParseError(f"expected {n_src} rows, found {len(body)}", where)
    rows = []
    for lineno, raw in body:
        row = 0
        count = 0
        for col, ch in enumerate(raw, start=1):
            if ch.isspace():
                continue
            if ch not in "01":
                raise ParseError(f"unexpected character {ch!r}", lineno, col)
            if count >= n_dst:
                raise ParseError(f"row longer than {n_dst}", lineno, col)
            if ch == "1":
                row |= 1 << count
            count += 1
        if count != n_dst:
            raise ParseError(f"row has {count} entries, expected {n_dst}", lineno, len(raw) + 1)
        rows.append(row)
    if square:
        return Rel(n_src, rows)
    return Hom(n_src, n_dst, rows)


def format_matrix(f: Hom) -> str:
    header = f"{f.n_src}" if isinstance(f, Rel) else f"{f.n_src} {f.n_dst}"
    lines = [header]
    for r in f.rows:
        lines.append("".join("1" if (r >> j) & 1 else "0" for j in range(f.n_dst)))
    return "\n".join(lines) + "\n"
