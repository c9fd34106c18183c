from fractions import Fraction

import pytest
from hypothesis import HealthCheck, assume, given, settings, strategies as st

from bottcher.conjugacy import chebyshev
from bottcher.dependence import (
    SAFETY_MARGIN,
    Certificate,
    Found,
    NotFoundUpTo,
    PsiTerm,
    Relation,
    SemiconjWitness,
    check_invariance,
    find_relation,
    grlex_key,
    is_certified,
    monomials,
    quadratic_semiconj_all,
    quadratic_semiconj_search,
    semiconj_verify,
    verify_relation,
    witness_relation,
)
from bottcher.errors import InvalidWitness, ParseError, WindowInsufficient, ZeroRelation
from bottcher.scalars import RootOfUnity
from bottcher.series import LaurentTail, Poly

T = Poly([0, 1])
X = lambda i, n=3: Relation.variable(i, n)  # noqa: E731

quadratics = st.builds(lambda c, b: Poly([c, b, 1]), st.integers(-3, 3), st.integers(-2, 2))


# -- the relation ring --------------------------------------------------------
def test_monomials_grlex_ascending():
    ms = monomials(2, 2)
    assert ms == sorted(ms, key=grlex_key)
    assert len(ms) == 6
    assert ms[0] == (0, 0) and ms[-1] == (2, 0)


def test_normalization():
    r = Relation(3, {(0, 2, 0): -2, (0, 0, 1): 2, (0, 0, 0): -2})
    n = r.normalized()
    assert n.leading_exponent() == (0, 2, 0)
    assert n.leading_coefficient() == 1
    assert str(n) == "X1^2 - X2 + 1"


def test_divmod_reconstructs():
    p = (X(1) ** 2 - X(2) + 1) * (X(1) + X(2) * 3) + X(0)
    d = X(1) ** 2 - X(2) + 1
    q, r = p.divmod(d)
    assert q * d + r == p
    assert r == X(0)


def test_graph_form():
    rel = X(2) - Relation.from_poly(Poly([1, 0, 1]), 1, 3)
    assert rel.graph_form() == (2, 1, Poly([1, 0, 1]))
    assert (X(1) * X(2) - 1).graph_form() is None


def test_zero_relation_rejected():
    with pytest.raises(ZeroRelation):
        verify_relation(X(1) - X(1), [PsiTerm(Poly([1, 0, 1])), PsiTerm(Poly([1, 0, 1]))], 16)


def test_verify_relation_valuation():
    f = Poly([1, 0, 1])
    series = [PsiTerm(f), PsiTerm(f)]
    assert verify_relation(X(1) - X(2), series, 16) == -15  # certified: truncation exponent
    assert verify_relation(X(1) - X(0), series, 16) == -1  # psi - t = -1/2 t^-1 + ...


# -- relation search ----------------------------------------------------------
def test_t2_plus_1_relation():
    f = Poly([1, 0, 1])
    report = find_relation([PsiTerm(f), PsiTerm(f, m=2)], 2, 48)
    assert isinstance(report, Found)
    expect = X(2) - X(1) ** 2 - 1
    assert report.relation.equivalent(expect)
    assert report.verified_window == 96
    assert check_invariance(report.relation, 2, [f, f])


def test_window_too_small_refused():
    f = Poly([1, 0, 1])
    with pytest.raises(WindowInsufficient):
        find_relation([PsiTerm(f), PsiTerm(f, m=2)], 3, 20)


def test_explicit_tails_need_double_window():
    f = Poly([1, 0, 1])
    tails = [PsiTerm(f).at(48), PsiTerm(f, m=2).at(48)]
    with pytest.raises(WindowInsufficient):
        find_relation(tails, 2, 48)
    tails = [PsiTerm(f).at(96), PsiTerm(f, m=2).at(96)]
    assert isinstance(find_relation(tails, 2, 48), Found)


@pytest.mark.parametrize("m", [2, 4])
def test_degree_ratio(m):
    f = Poly([1, 0, 1])
    report = find_relation([PsiTerm(f), PsiTerm(f, m=m)], m, 64)
    assert isinstance(report, Found)
    i, j, q = report.relation.graph_form()
    assert (i, j) == (2, 1)
    assert q.degree == m
    assert q == f.iterate({2: 1, 4: 2}[m])


@settings(max_examples=12, deadline=None)
@given(quadratics, st.sampled_from([1, 2]), st.sampled_from([1, 2]))
def test_found_relations_are_sound_and_invariant(f, m1, m2):
    series = [PsiTerm(f, m=m1), PsiTerm(f, m=m2)]
    report = find_relation(series, 2, 40)
    if m1 == m2 or {m1, m2} == {1, 2}:
        assert isinstance(report, Found)
    if isinstance(report, Found):
        assert is_certified(report.relation, series, report.verified_window)
        assert check_invariance(report.relation, 2, [f, f])


@settings(max_examples=10, deadline=None)
@given(quadratics, st.integers(-3, 3).filter(bool))
def test_conjugate_pair_relation(g, b):
    # f o l = l o g for l = t + b
    ell = Poly([b, 1])
    f = ell.compose(g).compose(Poly([-b, 1]))
    series = [PsiTerm(f), PsiTerm(g)]
    report = find_relation(series, 1, 24)
    assert isinstance(report, Found)
    assert report.relation.equivalent(X(1) - X(2) - b)
    assert check_invariance(report.relation, 2, [f, g])


@settings(max_examples=8, deadline=None)
@given(st.integers(-3, 3), st.integers(-3, 3))
def test_no_semiconjugacy_means_no_low_degree_relation(c, ct):
    # t^2 and t^2 - 2 are exceptional: psi is algebraic over K(t) there
    assume(c != ct and not {c, ct} & {0, -2})
    if quadratic_semiconj_search(c, ct, 4) is None and quadratic_semiconj_search(ct, c, 4) is None:
        report = find_relation([PsiTerm(Poly([c, 0, 1])), PsiTerm(Poly([ct, 0, 1]))], 2, 40)
        assert isinstance(report, NotFoundUpTo)


def test_single_psi_transcendental_evidence():
    report = find_relation([PsiTerm(Poly([1, 0, 1]))], 4, 48)
    assert isinstance(report, NotFoundUpTo)
    assert (report.degree_bound, report.window) == (4, 48)


def test_safety_margin_constant():
    assert SAFETY_MARGIN == 8


# -- invariance ---------------------------------------------------------------
def test_invariance_false_for_unrelated_polynomial():
    f = Poly([1, 0, 1])
    assert not check_invariance(X(1) - X(2) - 1, 2, [f, f])


# -- semiconjugacies and witnesses -------------------------------------------
def test_semiconj_verify():
    assert semiconj_verify(chebyshev(2), chebyshev(3), chebyshev(2))
    assert semiconj_verify(Poly([4, -4, 1]), Poly([0, 0, 1]), Poly([-2, 0, 1]))
    assert not semiconj_verify(Poly([1, 0, 1]), T, Poly([2, 0, 1]))
    with pytest.raises(ValueError):
        semiconj_verify(T, Poly([3]), T)


def test_invalid_witness():
    with pytest.raises(InvalidWitness):
        SemiconjWitness(Poly([1, 0, 1]), T, Poly([2, 0, 1])).validate()
    with pytest.raises(InvalidWitness):
        witness_relation(SemiconjWitness(Poly([1, 0, 1]), T, Poly([2, 0, 1])))


@st.composite
def witnesses(draw):
    g = draw(st.builds(lambda c, b, d: Poly([c, b] + [0] * (d - 2) + [1]),
                       st.integers(-2, 2), st.integers(-2, 2), st.sampled_from([2, 3])))
    kind = draw(st.sampled_from(["conj", "iterate", "cheb", "power"]))
    if kind == "conj":
        a = draw(st.sampled_from([1, -1, 2]))
        b = draw(st.integers(-2, 2))
        ell = Poly([b, a])
        ell_inv = Poly([Fraction(-b, a), Fraction(1, a)])
        return SemiconjWitness(ell.compose(g).compose(ell_inv), ell, g)
    if kind == "iterate":
        return SemiconjWitness(g, g.iterate(draw(st.integers(0, 2))), g)
    if kind == "cheb":
        d, e = draw(st.sampled_from([2, 3])), draw(st.sampled_from([1, 2, 3]))
        return SemiconjWitness(chebyshev(d), chebyshev(e), chebyshev(d))
    d, e = draw(st.sampled_from([2, 3])), draw(st.sampled_from([1, 2, 3]))
    return SemiconjWitness(Poly.monomial(d), Poly.monomial(e), Poly.monomial(d))


@settings(max_examples=25, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(witnesses())
def test_witness_forward_direction(w):
    w.validate()
    cert = witness_relation(w, 32)
    assert cert.verify()
    assert cert.verify(48)


@pytest.mark.parametrize(
    "f,pi,h",
    [
        (Poly([-2, 0, 1]), chebyshev(3), Poly([-2, 0, 1])),
        (Poly([4, -4, 1]), Poly([0, 0, 1]), Poly([-2, 0, 1])),
    ],
)
def test_certificate_text_round_trip(f, pi, h):
    cert = witness_relation(SemiconjWitness(f, pi, h), 64)
    text = cert.to_text()
    back = Certificate.from_text(text)
    assert back.to_text() == text
    assert back.verify() and back.verify(128)
    assert text.splitlines()[0] == "nvars 3"
    assert text.splitlines()[-1].startswith("residual_valuation ")


def test_certificate_parse_errors():
    good = witness_relation(SemiconjWitness(chebyshev(2), chebyshev(3), chebyshev(2)), 16).to_text()
    with pytest.raises(ParseError):
        Certificate.from_text(good.replace("nvars 3", "nvars 4"))
    with pytest.raises(ParseError):
        Certificate.from_text(good.replace("window", "windwo"))
    with pytest.raises(ParseError):
        Certificate.from_text("\n".join(l for l in good.splitlines() if not l.startswith("window")))
    with pytest.raises(ParseError):
        Certificate.from_text(good.replace("series psi(", "series phi(", 1))
    assert Certificate.from_text("# comment\n" + good).relation == Certificate.from_text(good).relation


def test_tampered_certificate_fails():
    cert = witness_relation(SemiconjWitness(chebyshev(2), chebyshev(3), chebyshev(2)), 32)
    lines = cert.to_text().splitlines()
    lines = [l.replace(": 3", ": 2") for l in lines]
    assert not Certificate.from_text("\n".join(lines)).verify()


# -- quadratic family ---------------------------------------------------------
def test_quadratic_search():
    assert quadratic_semiconj_search(1, 3, 8) is None
    assert quadratic_semiconj_search(-2, -2, 3, nontrivial=True) == chebyshev(3)
    assert quadratic_semiconj_all(-2, -2, 4) == [T, chebyshev(2), chebyshev(3), chebyshev(4)]
    assert quadratic_semiconj_search(0, 0, 3) == T


@given(st.integers(-3, 3), st.integers(1, 4))
def test_semiconj_results_verify(c, k):
    for pi in quadratic_semiconj_all(c, c, k):
        assert semiconj_verify(Poly([c, 0, 1]), pi, Poly([c, 0, 1]))


def test_psi_term_parse_and_print():
    p = PsiTerm.parse("psi(t^3 + t)[@ zeta(2), 2]")
    assert p.zeta == RootOfUnity(2, 1) and p.m == 2
    assert PsiTerm.parse(str(p)) == p
    assert str(PsiTerm.parse(" psi( t^2+1 ) ")) == "psi(t^2 + 1)"
    with pytest.raises(ParseError):
        PsiTerm.parse("psi(t + 1)")
    with pytest.raises(ParseError):
        PsiTerm.parse("psi(t^2)[@ 2, 1]")
