"""Digraph dynamics of a relation.

Recurrent set, strongly connected components with their periods, the
induced partial order on components, and the eventual period of the power
sequence.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from math import gcd

from .relcore import Rel, iter_bits, mask_of, power

__all__ = [
    "Decomposition",
    "EventualPeriod",
    "decompose",
    "component_period",
    "eventual_period",
    "is_eventual_period",
    "positive_diophantine",
    "reachability",
    "format_decomposition",
]


@dataclass(frozen=True)
class Decomposition:
    """Components of recurrent vertices, their periods and the order between them.

    ``order[u][v]`` is true iff ``components[u] <= components[v]``, i.e. a
    walk leads from ``components[v]`` into ``components[u]`` (or ``u == v``).
    """

    components: tuple[frozenset[int], ...]
    periods: tuple[int, ...]
    non_recurrent: frozenset[int]
    order: tuple[tuple[bool, ...], ...]

    @property
    def recurrent(self) -> frozenset[int]:
        return frozenset().union(*self.components)

    def component_index(self) -> dict[int, int]:
        return {v: k for k, comp in enumerate(self.components) for v in comp}


@dataclass(frozen=True)
class EventualPeriod:
    p_min: int
    index: int  # smallest i >= 1 whose power recurs
    cycle_len: int

    def admits(self, p: int) -> bool:
        return p >= 1 and p % self.cycle_len == 0 and p >= self.index


def reachability(r: Rel) -> list[int]:
    """``reach[x]`` = bitmask of vertices reachable from ``x`` by a walk of positive length."""
    reach = list(r.rows)
    n = r.n
    for k in range(n):
        bit = 1 << k
        rk = reach[k]
        for i in range(n):
            if reach[i] & bit:
                reach[i] |= rk
    return reach


def _tarjan(r: Rel) -> list[int]:
    """Strongly connected components (as bitmasks) by iterative Tarjan."""
    n = r.n
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    comps: list[int] = []
    counter = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, iter(iter_bits(r.rows[root])))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if index[w] == -1:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, iter(iter_bits(r.rows[w]))))
                    advanced = True
                    break
                if on_stack[w]:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                comp = 0
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp |= 1 << w
                    if w == v:
                        break
                comps.append(comp)
    return comps


def decompose(r: Rel) -> Decomposition:
    comps = []
    non_rec = 0
    for c in _tarjan(r):
        if c & (c - 1) == 0:
            v = c.bit_length() - 1
            if not (r.rows[v] >> v) & 1:
                non_rec |= c
                continue
        comps.append(c)
    comps.sort(key=lambda c: c & -c)
    reach = reachability(r)
    k = len(comps)
    # from_comp[v]: vertices reachable from component v
    reach_from = []
    for c in comps:
        acc = 0
        for x in iter_bits(c):
            acc |= reach[x]
        reach_from.append(acc)
    order = tuple(
        tuple(u == v or bool(reach_from[v] & comps[u]) for v in range(k)) for u in range(k)
    )
    components = tuple(frozenset(iter_bits(c)) for c in comps)
    periods = tuple(component_period(r, comp) for comp in components)
    return Decomposition(components, periods, frozenset(iter_bits(non_rec)), order)


def component_period(r: Rel, component) -> int:
    """gcd of the lengths of all cycles inside ``component``.

    With BFS levels from a base vertex, every edge ``(u, v)`` inside the
    component contributes ``level(u) + 1 - level(v)``.
    """
    verts = sorted(component)
    if not verts:
        raise ValueError("empty component")
    cmask = mask_of(verts)
    base = verts[0]
    level = {base: 0}
    queue = deque([base])
    while queue:
        u = queue.popleft()
        for v in iter_bits(r.rows[u] & cmask):
            if v not in level:
                level[v] = level[u] + 1
                queue.append(v)
    if len(level) != len(verts):
        raise ValueError("component is not strongly connected")
    # every vertex must also reach back to the base
    back = {base}
    frontier = [base]
    rows_in = [0] * r.n
    for u in verts:
        for v in iter_bits(r.rows[u] & cmask):
            rows_in[v] |= 1 << u
    while frontier:
        v = frontier.pop()
        for u in iter_bits(rows_in[v]):
            if u not in back:
                back.add(u)
                frontier.append(u)
    if len(back) != len(verts):
        raise ValueError("component is not strongly connected")
    g = 0
    for u in verts:
        for v in iter_bits(r.rows[u] & cmask):
            g = gcd(g, abs(level[u] + 1 - level[v]))
    if g == 0:
        raise ValueError("component has no cycle of positive length")
    return g


def eventual_period(r: Rel) -> EventualPeriod:
    """Minimal eventual period of ``r`` together with the index and cycle of its powers."""
    n = r.n
    seen: dict[tuple[int, ...], int] = {}
    k = 1
    while True:
        rows = power(r, k).rows
        if rows in seen:
            index = seen[rows]
            cycle = k - index
            break
        seen[rows] = k
        k += 1
    if n >= 1 and index > (n - 1) ** 2 + 1:
        raise RuntimeError(f"power index {index} exceeds the bound for n={n}")
    p_min = cycle * -(-max(index, 1) // cycle)
    return EventualPeriod(p_min=p_min, index=index, cycle_len=cycle)


def is_eventual_period(r: Rel, p: int) -> bool:
    return eventual_period(r).admits(p)


def positive_diophantine(a: int, b: int, n: int) -> tuple[int, int]:
    """Positive ``x, y`` with ``a*x + b*y = a*b/g + g + n*g`` where ``g = gcd(a, b)``."""
    if a < 1 or b < 1 or n < 0:
        raise ValueError("need a, b >= 1 and n >= 0")
    g = gcd(a, b)
    a1, b1 = a // g, b // g
    target = a * b // g + g + n * g
    r = (1 + n) % a1
    for y in range(1, a1 + 1):
        if (b1 * y) % a1 == r:
            break
    x, rem = divmod(target - b * y, a)
    assert rem == 0 and x > 0
    return x, y


def format_decomposition(dec: Decomposition, ep: EventualPeriod | None = None) -> str:
    lines = []
    for k, (comp, q) in enumerate(zip(dec.components, dec.periods)):
        verts = ",".join(str(v) for v in sorted(comp))
        lines.append(f"component {k} vertices={verts} period={q}")
    nr = ",".join(str(v) for v in sorted(dec.non_recurrent)) or "-"
    lines.append(f"non_recurrent {nr}")
    for u in range(len(dec.components)):
        for v in range(len(dec.components)):
            if u != v and dec.order[u][v]:
                lines.append(f"order {u} <= {v}")
    if ep is not None:
        lines.append(f"eventual_period p_min={ep.p_min} index={ep.index} cycle={ep.cycle_len}")
    return "\n".join(lines) + "\n"
