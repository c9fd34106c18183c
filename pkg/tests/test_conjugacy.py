from fractions import Fraction

import pytest
from hypothesis import assume, given, strategies as st

from bottcher.conjugacy import (
    Kind,
    chebyshev,
    classify,
    common_iterate_search,
    commutes,
    enumerate_psi_choices,
    extract_power_substitution,
    functional_residual,
    leading_coefficient,
    solve_psi,
    twist_choices,
)
from bottcher.errors import InvalidTwist, SupportViolation, WitnessNotRepresentable
from bottcher.scalars import RootOfUnity, scalar
from bottcher.series import LaurentTail, Poly
from oracles import chebyshev_by_expansion, psi_by_matching
from strategies import monic_poly, monic_rational_poly, nonzero_q

T = Poly([0, 1])


def as_dict(s):
    return {k: Fraction(v.to_rational()) for k, v in s.terms().items()}


@given(monic_rational_poly(degrees=(2, 3, 4)))
def test_residual_vanishes(f):
    psi = solve_psi(f, 24)
    assert functional_residual(f, psi.tail).is_zero()
    assert psi.tail.valuation() == 1


@given(monic_rational_poly(degrees=(2, 3)))
def test_psi_matches_order_by_order_oracle(f):
    coeffs = [Fraction(c.to_rational()) for c in f.coeffs]
    psi = solve_psi(f, 12)
    expect = psi_by_matching(coeffs, 12)
    assert as_dict(psi.tail) == expect


@given(nonzero_q, monic_rational_poly(degrees=(2,)))
def test_non_monic_leading_coefficient(lead, g):
    assume(lead > 0)
    f = g * scalar(lead)
    a = leading_coefficient(f)
    assert f.leading * a ** (f.degree - 1) == 1
    assert functional_residual(f, solve_psi(f, 16).tail).is_zero()


def test_power_map_and_chebyshev():
    assert as_dict(solve_psi(Poly.monomial(3), 20).tail) == {1: 1}
    assert as_dict(solve_psi(chebyshev(2), 20).tail) == {1: 1, -1: 1}
    assert as_dict(solve_psi(chebyshev(5), 20).tail) == {1: 1, -1: 1}


def test_t2_plus_1_values():
    psi = solve_psi(Poly([1, 0, 1]), 8).tail
    assert psi.coeff(-1) == scalar(Fraction(-1, 2))
    assert psi.coeff(-3) == scalar(Fraction(-3, 8))


def test_twists_for_cubic():
    f = Poly([1, 1, 0, 1])
    choices = enumerate_psi_choices(f, 16)
    assert len(choices) == 2
    for c in choices:
        assert functional_residual(f, c.tail).is_zero()
    assert choices[0].tail != choices[1].tail
    with pytest.raises(InvalidTwist):
        solve_psi(f, 8, RootOfUnity.of(3, 1))
    assert [z.order for z in twist_choices(4)] == [1, 3, 3]


@pytest.mark.parametrize("d", list(range(1, 33)))
def test_chebyshev_identity(d):
    c = chebyshev(d)
    x = LaurentTail(1, [1, 0, 1], 4 * d + 4)
    lhs = c(x)
    assert as_dict(lhs) == {d: 1, -d: 1}


@pytest.mark.parametrize("d", range(1, 9))
def test_chebyshev_against_expansion_oracle(d):
    assert [Fraction(c.to_rational()) for c in chebyshev(d).coeffs] == chebyshev_by_expansion(d)


def test_chebyshev_composition():
    for d in range(1, 9):
        for e in range(1, 9):
            assert chebyshev(d).compose(chebyshev(e)) == chebyshev(d * e)


@given(
    st.sampled_from([Kind.POWER, Kind.CHEBYSHEV_PLUS, Kind.CHEBYSHEV_MINUS]),
    st.sampled_from([2, 3, 4]),
    st.sampled_from([1, 2, -1, Fraction(1, 2), -3]),
    st.integers(-3, 3),
)
def test_classify_recovers_conjugated_models(kind, d, a, b):
    from bottcher.conjugacy import model_map

    model = model_map(kind, d)
    ell = Poly([b, a])
    ell_inv = Poly([Fraction(-b) / a, Fraction(1) / a])
    f = ell_inv.compose(model.compose(ell))
    got = classify(f)
    # -C_d is conjugate to C_d for even d via t -> -t
    if kind is Kind.CHEBYSHEV_MINUS and d % 2 == 0:
        assert got.kind in (Kind.CHEBYSHEV_PLUS, Kind.CHEBYSHEV_MINUS)
    else:
        assert got.kind is kind
    assert got.witness.compose(f) == got.model.compose(got.witness)


@pytest.mark.parametrize("f", [Poly([1, 0, 1]), Poly([-1, 0, 1]), Poly([1, 1, 0, 1]), Poly([0, 2, 0, 1])])
def test_disintegrated(f):
    assert classify(f).disintegrated


def test_unrepresentable_scale():
    # 3 t^3 needs sqrt(3), which is cyclotomic; 2 t^4 needs a cube root of 2, which is not
    f = Poly([0, 0, 0, 3])
    got = classify(f)
    assert got.kind is Kind.POWER and got.witness.compose(f) == got.model.compose(got.witness)
    g = Poly([0, 0, 0, 0, 2])
    with pytest.raises(WitnessNotRepresentable):
        classify(g)
    got = classify(g, require_witness=False)
    assert got.kind is Kind.POWER and got.witness is None


def test_extract_power_substitution():
    f = Poly([4, -4, 1])  # (t - 2)^2
    L = LaurentTail(1, [1, 0, 1], 40) ** 2
    psi = extract_power_substitution(L, 2, f)
    assert functional_residual(f, psi.tail).is_zero()
    bad = L + LaurentTail.monomial(-3, L.window + 3 - 0, 1).truncate(prec=L.prec)
    with pytest.raises(SupportViolation):
        extract_power_substitution(bad, 2, f)


@given(monic_poly(degrees=(2,), coeff=st.integers(-3, 3)), st.integers(1, 3), st.integers(1, 3))
def test_iterates_share_iterate(f, m, n):
    g = f.iterate(m)
    h = f.iterate(n)
    found = common_iterate_search(g, h, max_degree=64)
    assert found is not None
    i, j = found
    assert g.iterate(i) == h.iterate(j)


def test_commuting_and_not():
    assert commutes(chebyshev(2), chebyshev(3))
    assert not commutes(Poly([1, 0, 1]), Poly([2, 0, 1]))
    assert common_iterate_search(Poly([1, 0, 1]), Poly([2, 0, 1])) is None


@pytest.mark.parametrize("f", [Poly([1, 1, 0, 1]), Poly([0, 0, 0, 0, 1]) + Poly([2, 1]), Poly([3, 0, -1, 0, 1])])
def test_twist_permutes_choices(f):
    from bottcher.series import MdElement, substitute_md

    d = f.degree
    choices = enumerate_psi_choices(f, 12)
    tails = {c.tail for c in choices}
    assert len(choices) == d - 1 and len(tails) == d - 1
    for z in twist_choices(d):
        if z.order == 1 or (d % z.order == 0):
            continue
        moved = {substitute_md(c.tail, MdElement(z, 1, d)) for c in choices}
        assert moved == tails


@pytest.mark.parametrize(
    "f,g",
    [
        (Poly([1, 0, 1]), Poly([1, 0, 1]).iterate(2)),
        (chebyshev(2), chebyshev(3)),
        (Poly([0, 0, 1]), Poly([0, 0, 0, 1])),
        (Poly([-1, 0, 1]), Poly([-1, 0, 1]).iterate(3)),
    ],
)
def test_commuting_maps_share_psi(f, g):
    assert commutes(f, g)
    window = 20
    a = {c.tail for c in enumerate_psi_choices(f, window)}
    b = {c.tail for c in enumerate_psi_choices(g, window)}
    assert a & b
