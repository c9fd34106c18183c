"""Local conjugacies psi_f near infinity and the exceptional polynomials.

For f of degree d >= 2 the series psi_f = a t + a_0 + a_1/t + ... satisfies
psi_f(t^d) = f(psi_f(t)); it is unique up to psi_f(zeta t) with zeta^(d-1) = 1.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from math import gcd
from typing import Optional

from gmpy2 import mpq

from .errors import (
    FunctionalEquationViolation,
    InvalidTwist,
    LeadingRootUnavailable,
    NoCyclotomicRoot,
    SupportViolation,
    WindowTooSmall,
    WitnessNotRepresentable,
)
from .scalars import ONE, ZERO, CyclotomicScalar, RootOfUnity, cyclotomic_root, scalar
from .series import LaurentTail, MdElement, Poly, series_compose_poly, substitute_md

TRIVIAL_TWIST = RootOfUnity(1, 0)


@dataclass(frozen=True)
class PsiSeries:
    """A solution of psi(t^d) = f(psi(t)), verified down to ``residual_checked_to``."""

    tail: LaurentTail
    source: Poly
    residual_checked_to: int
    twist: RootOfUnity = TRIVIAL_TWIST

    @property
    def degree(self) -> int:
        return self.source.degree

    def __str__(self):
        return str(self.tail)


def functional_residual(f: Poly, psi: LaurentTail) -> LaurentTail:
    """psi(t^d) - f(psi(t)), with its exact truncation."""
    return psi.subs_power(f.degree) - series_compose_poly(f, psi)


def leading_coefficient(f: Poly) -> CyclotomicScalar:
    """The base choice of a with b_d * a^(d-1) = 1."""
    d = f.degree
    try:
        return cyclotomic_root(f.leading.inverse(), d - 1)
    except NoCyclotomicRoot as exc:
        raise LeadingRootUnavailable(
            f"leading coefficient {f.leading} has no cyclotomic {d - 1}-th root"
        ) from exc


def solve_psi(f: Poly, window: int = 64, twist: RootOfUnity = TRIVIAL_TWIST) -> PsiSeries:
    """Solve psi(t^d) = f(psi) for ``window`` coefficients.

    Coefficients are found in order of decreasing exponent.  Matching t^(d-m)
    on both sides, the m-th unknown coefficient c_m enters f(psi) only through
    b_d * d * a^(d-1) * c_m = d * c_m, while psi(t^d) contributes c_(m/d) when
    d | m.  The power tables psi^j are extended one coefficient per step.
    """
    d = f.degree
    if d < 2:
        raise ValueError("solve_psi needs deg f >= 2")
    if window < 2:
        raise WindowTooSmall("solve_psi needs a window of at least 2")
    if (d - 1) % twist.order:
        raise InvalidTwist(f"twist of order {twist.order} is not a ({d - 1})-th root of unity")
    a = leading_coefficient(f) * twist.value
    b = [f.coeff(j) for j in range(d + 1)]
    a_pow = [ONE]
    for _ in range(d):
        a_pow.append(a_pow[-1] * a)

    psi = [a]
    # powers[j][o] = coefficient of t^(j - o) in psi^j
    powers = [None, psi] + [[a_pow[j]] for j in range(2, d + 1)]
    inv_d = mpq(1, d)
    for m in range(1, window):
        psi.append(ZERO)  # provisional c_m = 0
        for j in range(2, d + 1):
            prev, cur = powers[j - 1], powers[j]
            s = ZERO
            for l in range(m + 1):
                x, y = prev[l], psi[m - l]
                if x and y:
                    s = s + x * y
            cur.append(s)
        lhs = psi[m // d] if m % d == 0 else ZERO
        rhs = ZERO
        for j in range(1, d + 1):
            o = j - d + m
            if o >= 0 and b[j]:
                rhs = rhs + b[j] * powers[j][o]
        if m == d:
            rhs = rhs + b[0]
        c = (lhs - rhs) * inv_d
        psi[m] = c
        if c:
            for j in range(2, d + 1):
                powers[j][m] = powers[j][m] + a_pow[j - 1] * c * j

    tail = LaurentTail(1, psi, window)
    residual = functional_residual(f, tail)
    if not residual.is_zero():
        raise FunctionalEquationViolation(  # pragma: no cover - would be an internal bug
            f"residual nonzero at t^{residual.valuation()}"
        )
    return PsiSeries(tail, f, residual.prec, twist)


def enumerate_psi_choices(f: Poly, window: int = 64) -> list[PsiSeries]:
    """All d - 1 solutions psi(zeta t), zeta running over (d-1)-th roots of unity."""
    d = f.degree
    base = solve_psi(f, window)
    out = [base]
    for k in range(1, d - 1):
        z = RootOfUnity.of(d - 1, k)
        tail = substitute_md(base.tail, MdElement(z, 1, d))
        out.append(PsiSeries(tail, f, base.residual_checked_to, z))
    return out


def chebyshev(d: int) -> Poly:
    """C_d with C_d(t + 1/t) = t^d + t^-d, via C_(n+1) = t C_n - C_(n-1)."""
    if d < 1:
        raise ValueError("chebyshev needs d >= 1")
    prev, cur = Poly([2]), Poly([0, 1])
    for _ in range(d - 1):
        prev, cur = cur, Poly([0, 1]) * cur - prev
    return cur


class Kind(str, Enum):
    POWER = "PowerMap"
    CHEBYSHEV_PLUS = "ChebyshevPlus"
    CHEBYSHEV_MINUS = "ChebyshevMinus"
    DISINTEGRATED = "Disintegrated"


@dataclass(frozen=True)
class Classification:
    kind: Kind
    witness: Optional[Poly] = None  # l with l o f = model o l
    model: Optional[Poly] = None

    @property
    def disintegrated(self) -> bool:
        return self.kind is Kind.DISINTEGRATED


def model_map(kind: Kind, d: int) -> Poly:
    if kind is Kind.POWER:
        return Poly.monomial(d)
    if kind is Kind.CHEBYSHEV_PLUS:
        return chebyshev(d)
    if kind is Kind.CHEBYSHEV_MINUS:
        return -chebyshev(d)
    raise ValueError("no model for disintegrated maps")


def center(f: Poly) -> tuple[Poly, CyclotomicScalar]:
    """(g, beta) with g = l o f o l^-1 for l = t + beta and no t^(d-1) term in g."""
    d = f.degree
    beta = f.coeff(d - 1) / (f.leading * d)
    g = f.compose(Poly([-beta, 1])) + beta
    return g, beta


def _bezout(exps: list[int]) -> tuple[int, list[int]]:
    """g = gcd(exps) and integers u with sum u_i e_i = g."""
    g, us = 0, []
    for e in exps:
        # extended gcd of (g, e)
        old_r, r, old_s, s, old_t, t = g, e, 1, 0, 0, 1
        while r:
            q = old_r // r
            old_r, r = r, old_r - q * r
            old_s, s = s, old_s - q * s
            old_t, t = t, old_t - q * t
        if old_r < 0:
            old_r, old_s, old_t = -old_r, -old_s, -old_t
        us = [u * old_s for u in us] + [old_t]
        g = old_r
    return g, us


def _scale_power(centered: Poly, model: Poly):
    """If some a != 0 has c_i a^(1-i) = m_i for all i, return (g, c) with a^g = c.

    Decided without extracting roots: the conditions read a^(i-1) = c_i/m_i;
    with g = gcd of the exponents and Bezout weights u_i, any solution has
    a^g = prod (c_i/m_i)^(u_i), and the conditions hold iff each ratio equals
    that value raised to (i-1)/g.
    """
    d = model.degree
    exps, ratios = [], []
    for i in range(d + 1):
        c, m = centered.coeff(i), model.coeff(i)
        if m.is_zero() or c.is_zero():
            if m.is_zero() != c.is_zero():
                return None
            continue
        r = c / m
        if i == 1:
            if r != ONE:
                return None
            continue
        exps.append(i - 1)
        ratios.append(r)
    g, us = _bezout(exps)
    c = ONE
    for r, u in zip(ratios, us):
        c = c * r ** u
    for e, r in zip(exps, ratios):
        if c ** (e // g) != r:
            return None
    return g, c


def classify(f: Poly, require_witness: bool = True) -> Classification:
    """Decide whether f is linearly conjugate to t^d, C_d or -C_d.

    With ``require_witness`` false, a conjugacy whose linear witness needs a
    non-cyclotomic scale is reported with ``witness=None`` instead of raising.
    """
    d = f.degree
    if d < 2:
        raise ValueError("classify needs deg f >= 2")
    g, beta = center(f)
    for kind in (Kind.POWER, Kind.CHEBYSHEV_PLUS, Kind.CHEBYSHEV_MINUS):
        model = model_map(kind, d)
        found = _scale_power(g, model)
        if found is None:
            continue
        gexp, c = found
        try:
            a = cyclotomic_root(c, gexp)
        except NoCyclotomicRoot as exc:
            if require_witness:
                raise WitnessNotRepresentable(
                    f"{kind.value}: scale needs a {gexp}-th root of {c}", kind=kind
                ) from exc
            return Classification(kind, None, model)
        witness = Poly([a * beta, a])
        assert witness.compose(f) == model.compose(witness)
        return Classification(kind, witness, model)
    return Classification(Kind.DISINTEGRATED)


def extract_power_substitution(L: LaurentTail, D: int, f: Poly) -> PsiSeries:
    """Given L(t^d) = f(L) with v(L) = D, return psi with L(t) = psi(t^D).

    Every retained exponent of L must be a multiple of D; a violation means L
    does not satisfy the functional equation.
    """
    if L.valuation() != D:
        raise ValueError(f"valuation of L is {L.valuation()}, expected {D}")
    off = [k for k in L.terms() if k % D]
    if off:
        raise SupportViolation(f"exponent {max(off)} of L is not a multiple of {D}")
    prec = L.prec // D  # floor: psi exponents e with D*e > L.prec
    psi = LaurentTail.from_terms({k // D: c for k, c in L.terms().items()}, prec)
    residual = functional_residual(f, psi)
    if not residual.is_zero():
        raise FunctionalEquationViolation(
            f"psi(t^d) - f(psi) has a nonzero coefficient at t^{residual.valuation()}"
        )
    return PsiSeries(psi, f, residual.prec)


def commutes(f: Poly, g: Poly) -> bool:
    return f.compose(g) == g.compose(f)


def common_iterate_search(f: Poly, g: Poly, max_degree: int = 64) -> Optional[tuple[int, int]]:
    """Smallest (m, n) with f^m = g^n and deg(f)^m = deg(g)^n <= max_degree."""
    d, e = f.degree, g.degree
    if d < 2 or e < 2:
        raise ValueError("common_iterate_search needs degrees >= 2")
    f_iter, g_iter = {1: f}, {1: g}

    def iterate(cache, p, k):
        top = max(cache)
        while top < k:
            cache[top + 1] = p.compose(cache[top])
            top += 1
        return cache[k]

    m, dm = 1, d
    while dm <= max_degree:
        n, en = 1, e
        while en < dm:
            n, en = n + 1, en * e
        if en == dm and iterate(f_iter, f, m) == iterate(g_iter, g, n):
            return m, n
        m, dm = m + 1, dm * d
    return None


def twist_choices(d: int) -> list[RootOfUnity]:
    """The (d-1)-th roots of unity, trivial one first."""
    return [RootOfUnity.of(d - 1, k) for k in range(d - 1)]


def is_valid_twist(z: RootOfUnity, d: int) -> bool:
    return (d - 1) % z.order == 0 and gcd(z.order, d) == 1
