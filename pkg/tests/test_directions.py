from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from dirlab.directions import (
    FuncTable,
    PointSet,
    directions_of_function,
    directions_of_points,
    graph,
    image_ratio_set,
    satisfies_quotient_condition,
)
from dirlab.errors import DuplicatePoint, NonzeroAtOrigin, TooFewPoints
from dirlab.field import gf
from dirlab.linearized import LinPoly
from dirlab.sets import MulSet

from oracles import RefField, direction_set


def test_point_examples():
    F5 = gf(5)
    d = directions_of_points(PointSet(F5, ((0, 0), (1, 2), (2, 4))))
    assert (d.finite(), d.has_infinity) == ([2], False)
    d = directions_of_points(PointSet(F5, ((0, 0), (0, 1))))
    assert (d.finite(), d.has_infinity) == ([], True)
    with pytest.raises(TooFewPoints):
        directions_of_points(PointSet(F5, ((0, 0),)))
    with pytest.raises(DuplicatePoint):
        PointSet(F5, ((0, 0), (0, 0)))


def test_graph_of_square_over_gf4():
    F4 = gf(2, 2)
    R = RefField(2, 2, F4.modulus)
    f = FuncTable.from_callable(F4, lambda x: F4.mul(x, x))
    assert sorted(direction_set(R, f.values)) == [1, 2, 3]
    assert directions_of_points(graph(f)).finite() == [1, 2, 3]
    assert directions_of_function(f).finite() == [1, 2, 3]


def test_function_examples():
    for F in (gf(5), gf(2, 3), gf(3, 2)):
        ident = FuncTable(F, tuple(range(F.q)))
        assert directions_of_function(ident).finite() == [1]
    F9 = gf(3, 2)
    cube = FuncTable.from_callable(F9, lambda x: F9.frobenius(x, 1))
    assert directions_of_function(cube).finite() == [1, 2, 3, 6]
    F5 = gf(5)
    sq = FuncTable(F5, (0, 1, 4, 4, 1))
    assert sorted(direction_set(RefField(5, 1, F5.modulus), sq.values)) == [0, 1, 2, 3, 4]
    assert directions_of_function(sq).finite() == [0, 1, 2, 3, 4]


def test_image_ratio_examples():
    F7 = gf(7)
    assert image_ratio_set(FuncTable.from_callable(F7, lambda x: F7.mul(3, x))).finite() == [3]
    F9 = gf(3, 2)
    cube = FuncTable.from_callable(F9, lambda x: F9.frobenius(x, 1))
    assert image_ratio_set(cube).finite() == [1, 2, 3, 6]
    F4 = gf(2, 2)
    f = FuncTable(F4, (0, 1, 1, 1))
    R = RefField(2, 2, F4.modulus)
    assert image_ratio_set(f).finite() == sorted({R.div(1, x) for x in (1, 2, 3)}) == [1, 2, 3]
    # not additive: the graph also has horizontal chords
    assert directions_of_function(f).finite() == [0, 1, 2, 3]
    with pytest.raises(NonzeroAtOrigin):
        image_ratio_set(FuncTable(F4, (1, 0, 2, 3)))


@pytest.mark.parametrize("p,n", [(2, 2), (2, 3), (3, 2)])
def test_directions_equal_ratio_image_for_every_linearized(p, n):
    F = gf(p, n)
    for coeffs in product(range(F.q), repeat=n):
        f = LinPoly(F, coeffs).table()
        assert directions_of_function(f) == image_ratio_set(f)


@pytest.mark.parametrize("p,n", [(2, 4), (2, 5)])
def test_directions_equal_ratio_image_sampled(p, n):
    import random
    rng = random.Random(1234)
    F = gf(p, n)
    for _ in range(60):
        f = LinPoly(F, tuple(rng.randrange(F.q) for _ in range(n))).table()
        assert directions_of_function(f) == image_ratio_set(f)


FIELDS = [gf(5), gf(7), gf(2, 2), gf(2, 3), gf(3, 2)]


@st.composite
def tables(draw):
    F = draw(st.sampled_from(FIELDS))
    vals = draw(st.lists(st.integers(0, F.q - 1), min_size=F.q, max_size=F.q))
    return FuncTable(F, tuple(vals))


@settings(max_examples=150, deadline=None)
@given(tables(), st.integers(0, 100), st.integers(0, 100))
def test_affine_invariance(f, c, s):
    F = f.ctx
    c %= F.q
    s %= F.q
    base = directions_of_function(f)
    assert directions_of_function(f.shifted(c)) == base
    assert directions_of_points(graph(f)) == base
    assert directions_of_points(graph(f).translated(s, c)) == base
    assert len(base) >= 1


@settings(max_examples=150, deadline=None)
@given(tables(), st.sets(st.integers(1, 100), min_size=1))
def test_quotient_condition_bridge(f, codes):
    F = f.ctx
    D = MulSet.of(F, {c % (F.q - 1) + 1 for c in codes})
    assert satisfies_quotient_condition(f, D) == directions_of_function(f).within(D)


@pytest.mark.parametrize("F", [gf(2, 2), gf(5)])
def test_single_direction_iff_affine(F):
    affine = {tuple(F.add(F.mul(a, x), b) for x in range(F.q)) for a in range(F.q) for b in range(F.q)}
    for vals in product(range(F.q), repeat=F.q):
        assert (len(directions_of_function(FuncTable(F, vals))) == 1) == (vals in affine)
