import random
from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import R1, R3, S_EXAMPLE, T_EXAMPLE, random_rel
from oracles import all_rels, mpow, mul, rows_of, to_np
from szymrel.relcore import (
    Hom,
    ParseError,
    Rel,
    block_bijection,
    classify_relation,
    compose,
    dom,
    format_matrix,
    gparts,
    im,
    inverse,
    parse_matrix,
    power,
    restrict,
)


@st.composite
def rels(draw, max_n=6):
    n = draw(st.integers(0, max_n))
    rows = draw(st.lists(st.integers(0, (1 << n) - 1), min_size=n, max_size=n))
    return Rel(n, rows)


@st.composite
def homs(draw, n_src, n_dst):
    rows = draw(st.lists(st.integers(0, (1 << n_dst) - 1), min_size=n_src, max_size=n_src))
    return Hom(n_src, n_dst, rows)


def test_rejects_out_of_range_bits():
    with pytest.raises(ValueError):
        Rel(2, [0b100, 0])
    with pytest.raises(ValueError):
        Hom(2, 3, [0])


def test_immutable():
    r = Rel.identity(2)
    with pytest.raises(AttributeError):
        r.rows = (0, 0)


def test_compose_two_element():
    f = Rel.from_pairs(2, [(0, 1)])
    g = Rel.from_pairs(2, [(1, 0)])
    assert compose(f, g) == Rel.from_pairs(2, [(0, 0)])


def test_compose_dimension_mismatch():
    with pytest.raises(ValueError):
        compose(Hom.empty(2, 3), Hom.empty(2, 3))


def test_compose_identity_law():
    for r in (R1, R3, Rel.full(3), Rel.empty(0)):
        assert compose(Rel.identity(r.n), r) == r
        assert compose(r, Rel.identity(r.n)) == r


def test_example_commutation_square():
    assert compose(T_EXAMPLE, R1) == compose(R3, T_EXAMPLE)
    assert compose(S_EXAMPLE, R3) == compose(R1, S_EXAMPLE)


@settings(max_examples=200, deadline=None)
@given(st.data())
def test_compose_matches_matrix_product(data):
    a, b, c = (data.draw(st.integers(0, 5)) for _ in range(3))
    f = data.draw(homs(a, b))
    g = data.draw(homs(b, c))
    got = compose(f, g)
    assert got.shape == (a, c)
    assert np.array_equal(to_np(got), mul(to_np(f), to_np(g)))


@settings(max_examples=100, deadline=None)
@given(st.data())
def test_associativity(data):
    dims = [data.draw(st.integers(0, 4)) for _ in range(4)]
    f, g, h = (data.draw(homs(dims[i], dims[i + 1])) for i in range(3))
    assert compose(compose(f, g), h) == compose(f, compose(g, h))


@settings(max_examples=100, deadline=None)
@given(st.data())
def test_monotonicity(data):
    a, b, c = (data.draw(st.integers(1, 4)) for _ in range(3))
    r = data.draw(homs(a, b))
    r2 = data.draw(homs(b, c))
    s = Hom(a, b, [row & data.draw(st.integers(0, (1 << b) - 1)) for row in r.rows])
    s2 = Hom(b, c, [row & data.draw(st.integers(0, (1 << c) - 1)) for row in r2.rows])
    assert compose(s, s2) <= compose(r, r2)


@settings(max_examples=100, deadline=None)
@given(st.data())
def test_dom_im_shrink(data):
    a, b, c = (data.draw(st.integers(0, 4)) for _ in range(3))
    f = data.draw(homs(a, b))
    g = data.draw(homs(b, c))
    fg = compose(f, g)
    assert dom(fg) <= dom(f)
    assert im(fg) <= im(g)


def test_inverse_examples():
    assert inverse(Rel.identity(3)) == Rel.identity(3)
    assert inverse(Rel.from_pairs(3, [(0, 1), (0, 2)])) == Rel.from_pairs(3, [(1, 0), (2, 0)])
    assert inverse(inverse(R1)) == R1
    assert inverse(T_EXAMPLE).shape == (5, 4)


def test_power_examples():
    assert power(R1, 0) == Rel.identity(5)
    cycle5 = Rel(5, [1 << ((i + 1) % 5) for i in range(5)])
    assert power(cycle5, 5) == Rel.identity(5)
    assert power(R1, 4) == power(R1, 8)
    with pytest.raises(ValueError):
        power(R1, -1)


@settings(max_examples=100, deadline=None)
@given(rels(), st.integers(0, 6), st.integers(0, 6))
def test_power_additive(r, a, b):
    assert power(r, a + b) == compose(power(r, a), power(r, b))
    assert np.array_equal(to_np(power(r, a)), mpow(to_np(r), a))


def test_gparts_examples():
    g = gparts(Rel.from_pairs(2, [(0, 1)]))
    assert dom(Rel.from_pairs(2, [(0, 1)])) == {0}
    assert im(Rel.from_pairs(2, [(0, 1)])) == {1}
    assert g.gdom == g.gim == g.inv == frozenset()
    perm = Rel(3, [0b010, 0b100, 0b001])
    assert gparts(perm).inv == {0, 1, 2}
    assert gparts(R1).inv == frozenset(range(5))


@settings(max_examples=150, deadline=None)
@given(rels())
def test_gparts_against_power_oracle(r):
    a = to_np(r)
    n = r.n
    big = mpow(a, 2 ** n + n + 1) if n else a
    g = gparts(r)
    assert g.gdom == frozenset(np.flatnonzero(big.any(axis=1)).tolist())
    assert g.gim == frozenset(np.flatnonzero(big.any(axis=0)).tolist())
    assert g.inv == g.gdom & g.gim


def test_classify_examples():
    flags = classify_relation(Rel.identity(3))
    assert all([flags.is_partial_map, flags.is_map, flags.is_injective,
                flags.is_surjective, flags.is_bijection, flags.is_wide])
    flags = classify_relation(Rel.from_pairs(2, [(0, 0), (0, 1)]))
    assert not flags.is_partial_map
    assert flags.is_injective
    assert flags.is_surjective
    assert not flags.is_wide
    flags = classify_relation(R1)
    assert not flags.is_map
    assert flags.is_wide
    assert classify_relation(Rel.empty(0)).is_wide


def _inverse_exists(r: Rel) -> bool:
    n = r.n
    ident = Rel.identity(n)
    for rows in product(range(1 << n), repeat=n):
        s = Rel(n, rows)
        if compose(r, s) == ident and compose(s, r) == ident:
            return True
    return False


def test_isomorphisms_are_bijections():
    for n in range(3):
        for m in all_rels(n):
            r = Rel(n, rows_of(m))
            assert _inverse_exists(r) == classify_relation(r).is_bijection
    rng = random.Random(3)
    for _ in range(40):
        r = random_rel(rng, 3, 0.35)
        assert _inverse_exists(r) == classify_relation(r).is_bijection


def test_restrict_examples():
    sub, index_map = restrict(R1, {0, 1, 2})
    assert sub == Rel.from_pairs(3, [(0, 1), (1, 0), (1, 2), (2, 1)])
    assert index_map == (0, 1, 2)
    assert restrict(R1, range(5))[0] == R1
    assert restrict(R1, ())[0] == Rel.empty(0)


def test_block_bijection_examples():
    perm = Rel(3, [0b010, 0b100, 0b001])
    bs = block_bijection(perm)
    assert bs.blocks == (frozenset({0}), frozenset({1}), frozenset({2}))
    assert bs.alpha == (1, 2, 0)
    assert bs.size == 1
    bs = block_bijection(Rel.full(2))
    assert bs.blocks == (frozenset({0, 1}),) and bs.alpha == (0,)
    assert block_bijection(Rel.from_pairs(2, [(0, 0), (0, 1), (1, 0)])) is None


def _is_block_bijection_brute(r: Rel) -> bool:
    n = r.n
    # try every set partition encoded by block labels
    for labels in product(range(n), repeat=n):
        k = max(labels, default=-1) + 1
        if sorted(set(labels)) != list(range(k)):
            continue
        blocks = [sum(1 << x for x in range(n) if labels[x] == b) for b in range(k)]
        for x in range(n):
            if r.rows[x] not in blocks:
                break
        else:
            targets = [r.rows[(blocks[b] & -blocks[b]).bit_length() - 1] for b in range(k)]
            rows_ok = all(r.rows[x] == targets[labels[x]] for x in range(n))
            if rows_ok and sorted(targets) == sorted(blocks):
                return True
    return False


def test_block_bijection_exhaustive():
    for n in range(4):
        for m in all_rels(n):
            r = Rel(n, rows_of(m))
            bs = block_bijection(r)
            assert (bs is not None) == _is_block_bijection_brute(r)
            if bs is not None:
                assert bs.to_rel(n) == r


def test_parse_format_round_trip():
    text = format_matrix(R1)
    assert parse_matrix(text) == R1
    assert parse_matrix("# comment\n2\n0 1\n\n1 0\n") == Rel(2, [0b10, 0b01])
    assert parse_matrix("2 3\n100\n011\n") == Hom(2, 3, [0b001, 0b110])
    assert parse_matrix("0\n") == Rel.empty(0)


@pytest.mark.parametrize(
    "text, line, column",
    [
        ("", 1, 1),
        ("2\n01\n1x\n", 3, 2),
        ("2\n01\n", 3, 1),
        ("2\n011\n10\n", 2, 3),
        ("a\n", 1, 1),
    ],
)
def test_parse_errors_locate(text, line, column):
    with pytest.raises(ParseError) as info:
        parse_matrix(text)
    assert (info.value.line, info.value.column) == (line, column)
