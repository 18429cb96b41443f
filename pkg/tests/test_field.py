import pytest

from dirlab.errors import (
    DegreeMismatch,
    DivisionByZero,
    IndexDoesNotDivide,
    JOutOfRange,
    NonPrimeCharacteristic,
    ReducibleModulus,
)
from dirlab.field import FieldSpec, arith, build_field, default_modulus, gf, is_irreducible
from dirlab.sets import all_subgroups, is_subgroup, subgroup_by_index

from oracles import RefField, first_irreducible_low_degree

SMALL = [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2), (2, 4), (17, 1), (5, 2), (3, 3)]


@pytest.mark.parametrize("p,n", [(3, 2), (2, 3), (2, 2), (5, 2), (7, 2), (2, 2), (3, 3), (5, 3)])
def test_default_modulus_matches_root_scan(p, n):
    assert list(default_modulus(p, n)) == first_irreducible_low_degree(p, n)


def test_default_modulus_examples():
    assert gf(3, 2).modulus == (1, 0, 1)       # x^2 + 1
    assert gf(2, 3).modulus == (1, 1, 0, 1)    # x^3 + x + 1


def test_bad_specs():
    with pytest.raises(NonPrimeCharacteristic):
        build_field(FieldSpec(4, 1))
    with pytest.raises(ReducibleModulus):
        gf(3, 2, (2, 0, 1))                    # x^2 - 1
    with pytest.raises(DegreeMismatch):
        gf(3, 2, (1, 0, 0, 1))
    with pytest.raises(DegreeMismatch):
        gf(2, 0)


def test_modulus_given_without_leading_coefficient():
    assert gf(3, 2, (1, 0)).modulus == (1, 0, 1)


def test_determinism():
    a = build_field(FieldSpec(2, 4))
    b = build_field(FieldSpec(2, 4, (1, 1, 0, 0, 1)))
    assert a.antilog == b.antilog and a.log == b.log and a.generator == b.generator


def test_scalar_examples():
    assert gf(5).mul(2, 4) == 3
    assert gf(3, 2).mul(3, 3) == 2
    assert gf(7).inv(3) == 5
    assert arith(gf(7), "inv", 3) == 5
    assert arith(gf(5), "pow", 2, -1) == 3
    with pytest.raises(DivisionByZero):
        gf(7).div(1, 0)
    with pytest.raises(DivisionByZero):
        gf(7).inv(0)


@pytest.mark.parametrize("p,n", SMALL)
def test_arithmetic_against_polynomial_oracle(p, n):
    F = gf(p, n)
    R = RefField(p, n, F.modulus)
    for a in range(F.q):
        for b in range(F.q):
            assert F.add(a, b) == R.add(a, b)
            assert F.sub(a, b) == R.sub(a, b)
            assert F.mul(a, b) == R.mul(a, b)


@pytest.mark.parametrize("p,n", SMALL)
def test_field_axioms_and_tables(p, n):
    F = gf(p, n)
    m = F.q - 1
    assert F.order(F.generator) == m
    assert sorted(F.antilog) == list(range(1, F.q))
    for k in range(m):
        assert F.log[F.antilog[k]] == k
        assert F.mul(F.antilog[k], F.antilog[(3 * k + 1) % m]) == F.antilog[(4 * k + 1) % m]
    for e in range(F.q):
        assert F.add(e, F.neg(e)) == 0
        if e:
            assert F.mul(e, F.inv(e)) == 1


def test_generator_is_smallest_primitive():
    for p, n in SMALL:
        F = gf(p, n)
        assert all(F.order(c) < F.q - 1 for c in range(1, F.generator))


def test_frobenius_examples():
    F9 = gf(3, 2)
    R = RefField(3, 2, F9.modulus)
    assert F9.frobenius(5, 1) == 8 == R.pow(5, 3)
    assert all(F9.frobenius(e, 0) == e for e in range(9))
    F8 = gf(2, 3)
    assert all(F8.frobenius(F8.frobenius(e, 1), 1) == F8.frobenius(e, 2) for e in range(8))
    with pytest.raises(JOutOfRange):
        F9.frobenius(1, 2)


@pytest.mark.parametrize("p,n", [(2, 2), (2, 3), (3, 2), (2, 4), (2, 5), (2, 6), (3, 3), (7, 2)])
def test_frobenius_additive_and_multiplicative(p, n):
    F = gf(p, n)
    for j in range(n):
        for x in range(F.q):
            for y in range(F.q):
                assert F.frobenius(F.add(x, y), j) == F.add(F.frobenius(x, j), F.frobenius(y, j))
                assert F.frobenius(F.mul(x, y), j) == F.mul(F.frobenius(x, j), F.frobenius(y, j))


def test_subgroup_examples():
    F7 = gf(7)
    assert subgroup_by_index(F7, 2).to_list() == sorted({x * x % 7 for x in range(1, 7)}) == [1, 2, 4]
    F9 = gf(3, 2)
    R = RefField(3, 2, F9.modulus)
    squares = sorted({R.mul(x, x) for x in range(1, 9)})
    assert subgroup_by_index(F9, 2).to_list() == squares == [1, 2, 3, 6]
    assert len(subgroup_by_index(gf(11), 1)) == 10
    with pytest.raises(IndexDoesNotDivide):
        subgroup_by_index(F7, 4)


def test_all_subgroups_examples():
    subs = all_subgroups(gf(5))
    assert [d for d, _ in subs] == [1, 2, 4]
    assert [K.to_list() for _, K in subs] == [[1, 2, 3, 4], [1, 4], [1]]
    assert [(d, len(K)) for d, K in all_subgroups(gf(2, 2))] == [(1, 3), (3, 1)]
    assert len(all_subgroups(gf(13))) == 6


@pytest.mark.parametrize("p,n", SMALL)
def test_subgroup_closure(p, n):
    F = gf(p, n)
    for d, K in all_subgroups(F):
        assert len(K) * d == F.q - 1
        assert is_subgroup(K)
        assert K.to_list() == sorted({F.pow(x, d) for x in range(1, F.q)})


def test_is_irreducible_small_cases():
    assert is_irreducible((1, 1, 1), 2)
    assert not is_irreducible((1, 0, 1), 2)
    assert is_irreducible((1, 1, 0, 0, 1), 2)
    assert not is_irreducible((1, 0, 1, 0, 1), 2)  # (x^2+x+1)^2
