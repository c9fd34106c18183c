from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from bottcher.errors import DivisionByZero, NoCyclotomicRoot
from bottcher.scalars import (
    ONE,
    ZERO,
    CyclotomicScalar,
    RootOfUnity,
    cyclotomic_polynomial,
    cyclotomic_root,
    primitive_root,
    rational_sqrt,
    scalar,
    scalar_is_root_of_unity,
)
from oracles import cyclotomic_mod_mul_q6
from strategies import cyclo, nonzero_q, small_q


@given(cyclo(), cyclo(), cyclo())
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == ZERO


@given(cyclo())
def test_inverse(a):
    if a.is_zero():
        with pytest.raises(DivisionByZero):
            a.inverse()
    else:
        assert a * a.inverse() == ONE


@given(cyclo(), st.sampled_from([2, 3, 5]))
def test_embedding_preserves_value_and_hash(a, k):
    big = a.embed(a.conductor * k)
    assert big == a
    assert hash(big) == hash(a)
    assert big.minimized() == a


@given(cyclo(6), cyclo(6))
def test_q6_product_matches_phi6_reduction(a, b):
    a, b = a.minimized().embed(6), b.minimized().embed(6)
    expect = cyclotomic_mod_mul_q6(tuple(Fraction(x) for x in a.coords), tuple(Fraction(x) for x in b.coords))
    assert tuple(Fraction(x) for x in (a * b).coords) == expect


@given(cyclo(5), cyclo(5), st.sampled_from([1, 2, 3, 4]))
def test_galois_is_a_ring_map(a, b, j):
    assert (a * b).galois(j) == a.galois(j) * b.galois(j)
    assert (a + b).galois(j) == a.galois(j) + b.galois(j)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 12, 15, 30])
def test_primitive_root_order(n):
    z = primitive_root(n)
    assert z ** n == ONE
    for k in range(1, n):
        if n % k == 0:
            assert z ** k != ONE


def test_cyclotomic_polynomials_small():
    assert cyclotomic_polynomial(1) == (-1, 1)
    assert cyclotomic_polynomial(4) == (1, 0, 1)
    assert cyclotomic_polynomial(6) == (1, -1, 1)
    assert cyclotomic_polynomial(12) == (1, 0, -1, 0, 1)


@given(
    st.sampled_from([1, 2, 3, 5, 6, 7, 10, 11, 13, 15]),
    nonzero_q,
    st.sampled_from([1, -1]),
)
def test_rational_sqrt(core, r, sign):
    q = sign * core * r * r
    r = rational_sqrt(q)
    assert r * r == scalar(q)


@pytest.mark.parametrize("k", [2, 3, 4])
@given(q=nonzero_q)
def test_cyclotomic_root_of_perfect_powers(k, q):
    b = scalar(q) ** k
    r = cyclotomic_root(b, k)
    assert r ** k == b


def test_cyclotomic_root_rejects_irrational():
    with pytest.raises(NoCyclotomicRoot):
        cyclotomic_root(scalar(2), 3)


def test_root_of_unity_canonical():
    assert RootOfUnity.of(6, 2) == RootOfUnity(3, 1)
    assert RootOfUnity.of(4, 4) == RootOfUnity(1, 0)
    assert RootOfUnity.of(3, 1) * RootOfUnity.of(3, 2) == RootOfUnity(1, 0)
    with pytest.raises(ValueError):
        RootOfUnity(6, 2)


@given(st.sampled_from([3, 4, 5, 8, 12]), st.integers(0, 23))
def test_root_detection(n, k):
    rho = RootOfUnity.of(n, k)
    assert scalar_is_root_of_unity(rho.value) == rho


def test_non_root_detected():
    assert scalar_is_root_of_unity(scalar(2)) is None
    assert scalar_is_root_of_unity(primitive_root(5) + 1) is None


@given(small_q)
def test_rational_round_trip(q):
    x = CyclotomicScalar.rational(q)
    assert x.is_rational()
    assert Fraction(x.to_rational()) == q


@pytest.mark.parametrize("n,m", [(n, m) for m in range(1, 25) for n in range(1, m + 1) if m % n == 0])
def test_embed_then_recognize(n, m):
    z = primitive_root(n)
    big = z.embed(m)
    assert big.conductor == m
    assert big == z
    assert scalar_is_root_of_unity(big) == RootOfUnity.of(n, 1)
