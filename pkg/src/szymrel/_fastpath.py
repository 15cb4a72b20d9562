"""Compiled quotient kernel for the census.

A relation on ``n <= 5`` points is packed into an integer ``code`` whose
binary expansion (MSB first, ``n*n`` bits) is the row-concatenated matrix,
so numeric order of codes is lexicographic order of matrix strings.  The
kernel maps each code to a key identifying its labelled quotient
``(n_classes << 32) | packed quotient bits``; keys are deduplicated here and
canonically labelled in Python only once per distinct key.
"""

from __future__ import annotations

from itertools import permutations

import numba
import numpy as np

from .relcore import Rel

MAX_N = 5
_MAX_POW = 64


def decode(code: int, n: int) -> Rel:
    rows = []
    for i in range(n):
        row = 0
        for j in range(n):
            if (code >> (n * n - 1 - (i * n + j))) & 1:
                row |= 1 << j
        rows.append(row)
    return Rel(n, rows)


def encode(r: Rel) -> int:
    n = r.n
    code = 0
    for i in range(n):
        for j in range(n):
            code = (code << 1) | ((r.rows[i] >> j) & 1)
    return code


def key_to_rel(key: int) -> Rel:
    m = key >> 32
    bits = key & 0xFFFFFFFF
    return Rel(m, [(bits >> (i * m)) & ((1 << m) - 1) for i in range(m)])


@numba.njit(cache=True)
def _pack_rows(rows, n):
    v = np.int64(0)
    for i in range(n):
        v |= np.int64(rows[i]) << (i * n)
    return v


@numba.njit(cache=True)
def _quotient_key(code, n, perms, prune):
    rows = np.zeros(MAX_N, np.int64)
    for i in range(n):
        r = 0
        for j in range(n):
            if (code >> (n * n - 1 - (i * n + j))) & 1:
                r |= 1 << j
        rows[i] = r

    if prune:
        # skip codes that are not the least in their relabelling orbit
        for t in range(perms.shape[0]):
            pc = np.int64(0)
            for i in range(n):
                for j in range(n):
                    bit = (rows[perms[t, i]] >> perms[t, j]) & 1
                    pc = (pc << 1) | bit
            if pc < code:
                return np.int64(-1)

    pw = np.zeros((_MAX_POW, MAX_N), np.int64)
    packed = np.zeros(_MAX_POW, np.int64)
    for i in range(n):
        pw[0, i] = 1 << i
    index = -1
    cycle = -1
    k = 0
    while index < 0:
        k += 1
        for i in range(n):
            acc = 0
            prev = pw[k - 1, i]
            for j in range(n):
                if (prev >> j) & 1:
                    acc |= rows[j]
            pw[k, i] = acc
        packed[k] = _pack_rows(pw[k], n)
        for t in range(1, k):
            if packed[t] == packed[k]:
                index = t
                cycle = k - t
                break
    p = cycle * ((index + cycle - 1) // cycle)

    reach = np.zeros(MAX_N, np.int64)
    for t in range(1, n + 1):
        if t <= k:
            src = t
        else:
            src = index + (t - index) % cycle
        for i in range(n):
            reach[i] |= pw[src, i]

    cls_index = np.full(MAX_N, -1, np.int64)
    reps = np.zeros(MAX_N, np.int64)
    m = 0
    for x in range(n):
        if not (reach[x] >> x) & 1:
            continue
        comp = 0
        for y in range(n):
            if (reach[x] >> y) & 1 and (reach[y] >> x) & 1:
                comp |= 1 << y
        cls = pw[p, x] & comp
        rep = 0
        while not (cls >> rep) & 1:
            rep += 1
        if rep == x:
            cls_index[x] = m
            reps[m] = x
            m += 1
    # members of a class share the representative's index
    for x in range(n):
        if cls_index[x] < 0 and (reach[x] >> x) & 1:
            comp = 0
            for y in range(n):
                if (reach[x] >> y) & 1 and (reach[y] >> x) & 1:
                    comp |= 1 << y
            cls = pw[p, x] & comp
            rep = 0
            while not (cls >> rep) & 1:
                rep += 1
            cls_index[x] = cls_index[rep]

    bits = np.int64(0)
    for a in range(m):
        row = pw[p + 1, reps[a]]
        for y in range(n):
            if (row >> y) & 1 and cls_index[y] >= 0:
                bits |= np.int64(1) << (a * m + cls_index[y])
    return (np.int64(m) << 32) | bits


@numba.njit(cache=True)
def quotient_keys(n, start, stop, perms, prune):
    out = np.empty(stop - start, np.int64)
    for c in range(start, stop):
        out[c - start] = _quotient_key(np.int64(c), n, perms, prune)
    return out


def permutation_table(n: int) -> np.ndarray:
    if n == 0:
        return np.zeros((1, 1), np.int64)
    return np.array(list(permutations(range(n))), dtype=np.int64)


CHUNK = 1 << 20


def scan_range(n: int, start: int, stop: int, prune: bool = False) -> dict[int, tuple[int, int]]:
    """Distinct quotient keys over codes in ``[start, stop)`` as ``key -> (count, min code)``."""
    if not 0 <= n <= MAX_N:
        raise ValueError(f"fast path supports n <= {MAX_N}")
    perms = permutation_table(n)
    found: dict[int, tuple[int, int]] = {}
    lo = start
    while lo < stop:
        hi = min(stop, lo + CHUNK)
        keys = quotient_keys(n, lo, hi, perms, prune)
        uniq, first, counts = np.unique(keys, return_index=True, return_counts=True)
        for key, f, cnt in zip(uniq.tolist(), first.tolist(), counts.tolist()):
            if key < 0:
                continue
            code = lo + f
            if key in found:
                c0, m0 = found[key]
                found[key] = (c0 + cnt, min(m0, code))
            else:
                found[key] = (cnt, code)
        lo = hi
    return found
