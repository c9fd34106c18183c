"""Green's functions, canonical heights and Böttcher moduli with error bounds.

Escape estimates
----------------
Write f = b_d z^d + ... + b_0 and eps(r) = sum_{i<d} |b_i| r^(i-d) / |b_d|, a
decreasing function of r.  For |z| = r:

* |f(z) / (b_d z^d) - 1| <= eps(r), hence
  |b_d| r^d (1 - eps(r)) <= |f(z)| <= |b_d| r^d (1 + eps(r)).
* The escape radius R is the least r with eps(r) <= 1/2 and
  |b_d| r^(d-1) (1 - eps(r)) >= 2, so |z| >= R implies |f(z)| >= 2|z|.
* With L(z) = log|z| + log|b_d| / (d-1) one has L(f(z)) = d L(z) + g(z) where
  |g(z)| <= -log(1 - eps) <= 2 eps(|z|).  Summing the geometric tail (each
  later |z_k| at least doubles and eps(r) scales at least like 1/r) gives

      |G(a) - L(z_n) / d^n| <= 2 eps(|z_n|) / ((d-1) d^n)   once |z_n| >= R.

* On |z| <= R, G <= M := log R + log|b_d|/(d-1) + 2 eps(R)/(d-1), so an orbit
  that stays in the disk for n steps has 0 <= G(a) <= M / d^n.

p-adic places use the same idea with the ultrametric inequality, where the
escape region v(z) < T is exact and the local height is a rational multiple
of log p; see :func:`local_height`.
"""
from __future__ import annotations

from contextlib import contextmanager
from dataclasses import dataclass, field
from decimal import ROUND_HALF_EVEN, Decimal, localcontext
from enum import Enum
from typing import Optional

import mpmath
from gmpy2 import mpq
from mpmath import iv, mp, mpf

from .conjugacy import solve_psi
from .errors import DenominatorNotSeparated, MaxIterationsExceeded, RadiusTooSmall
from .scalars import CyclotomicScalar, scalar
from .series import Poly, reversion

DEFAULT_DIGITS = 30
MAX_ITERATIONS = 10_000
EXACT_BITS = 2048  # exact orbit iteration stops once numbers get this large
MAX_RESTARTS = 5


def _bits(digits: int) -> int:
    return int(digits * 3.33) + 64


@contextmanager
def _ivprec(bits: int):
    # mpmath's interval context keeps one global precision
    old = iv.prec
    iv.prec = bits
    try:
        yield
    finally:
        iv.prec = old


# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class PrecisionReal:
    """value +- error_bound (absolute); prints only justified digits."""

    value: mpf
    error_bound: mpf
    digits: int = DEFAULT_DIGITS

    @classmethod
    def exact(cls, q, digits: int = DEFAULT_DIGITS) -> "PrecisionReal":
        q = mpq(q)
        bits = _bits(digits)
        with mp.workprec(bits):
            v = mpf(int(q.numerator)) / int(q.denominator)
        representable = q.denominator == 1 and int(q.numerator).bit_length() <= bits
        return cls(v, mpf(0) if representable else abs(v) * mpf(2) ** (-bits + 1), digits)

    @classmethod
    def from_interval(cls, x, extra=0, digits: int = DEFAULT_DIGITS) -> "PrecisionReal":
        """Midpoint/radius of an mpmath interval, widened by ``extra``."""
        with mp.workprec(_bits(digits) + 20):
            lo, hi = mpf(x.a), mpf(x.b)
            mid = (lo + hi) / 2
            rad = max(hi - mid, mid - lo)
            err = rad + mpf(extra) + abs(mid) * mpf(2) ** (-_bits(digits) - 10)
        return cls(mid, err, digits)

    def interval(self) -> tuple[mpf, mpf]:
        return self.value - self.error_bound, self.value + self.error_bound

    def contains(self, x) -> bool:
        lo, hi = self.interval()
        return lo <= mpf(x) <= hi

    def separated_from_zero(self) -> bool:
        return abs(self.value) > self.error_bound

    def _combine(self, other):
        if not isinstance(other, PrecisionReal):
            other = PrecisionReal(mpf(other), mpf(0), self.digits)
        return other, max(self.digits, other.digits)

    def __add__(self, other):
        other, digits = self._combine(other)
        with mp.workprec(_bits(digits) + 20):
            v = self.value + other.value
            err = self.error_bound + other.error_bound + abs(v) * mpf(2) ** (-_bits(digits) - 10)
        return PrecisionReal(v, err, digits)

    __radd__ = __add__

    def __neg__(self):
        return PrecisionReal(-self.value, self.error_bound, self.digits)

    def __sub__(self, other):
        return self + (-other if isinstance(other, PrecisionReal) else -mpf(other))

    def __mul__(self, other):
        other, digits = self._combine(other)
        with mp.workprec(_bits(digits) + 20):
            v = self.value * other.value
            err = (abs(self.value) * other.error_bound + abs(other.value) * self.error_bound
                   + self.error_bound * other.error_bound + abs(v) * mpf(2) ** (-_bits(digits) - 10))
        return PrecisionReal(v, err, digits)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other, digits = self._combine(other)
        if not other.separated_from_zero():
            raise DenominatorNotSeparated(f"denominator interval {other.interval()} contains 0")
        with mp.workprec(_bits(digits) + 20):
            v = self.value / other.value
            slack = abs(other.value) - other.error_bound
            err = (self.error_bound + abs(v) * other.error_bound) / slack + abs(v) * mpf(2) ** (-_bits(digits) - 10)
        return PrecisionReal(v, err, digits)

    def __float__(self):
        return float(self.value)

    def justified_decimals(self) -> int:
        """Decimal places k with error_bound <= 10^-k / 2, capped at ``digits``."""
        if self.error_bound == 0:
            return self.digits
        k = int(mpmath.floor(-mpmath.log10(2 * self.error_bound)))
        return max(0, min(self.digits, k))

    def __str__(self):
        if self.error_bound == 0 and self.value == 0:
            return "0"
        k = self.justified_decimals()
        with mp.workprec(_bits(self.digits) + 40):
            text = mpmath.nstr(self.value, k + 40 + max(0, int(mpmath.log10(abs(self.value) + 1))),
                               min_fixed=-mpmath.inf, max_fixed=mpmath.inf)
        with localcontext() as ctx:
            ctx.prec = len(text) + k + 10
            d = Decimal(text).quantize(Decimal(1).scaleb(-k), rounding=ROUND_HALF_EVEN)
        if d == 0:
            d = abs(d)
        return format(d, "f")

    def __repr__(self):
        return f"PrecisionReal({self}, err={mpmath.nstr(self.error_bound, 3)})"

    def to_json(self) -> dict:
        return {"value": str(self), "error_bound": mpmath.nstr(self.error_bound, 3)}


# ---------------------------------------------------------------------------
def _rational_coeffs(f: Poly) -> list[mpq]:
    if not f.is_rational():
        raise ValueError("heights need a polynomial with rational coefficients")
    if f.degree < 2:
        raise ValueError("heights need deg f >= 2")
    return [c.to_rational() for c in f.coeffs]


@dataclass(frozen=True)
class EscapeData:
    """Archimedean constants of f (see the module docstring)."""

    d: int
    coeffs: tuple
    R: mpq

    @property
    def lead(self) -> mpq:
        return abs(self.coeffs[-1])

    def eps(self, r: mpq) -> mpq:
        d, b = self.d, self.coeffs
        return sum((abs(b[i]) * r ** (i - d) for i in range(d) if b[i]), mpq(0)) / self.lead

    def log_lead_term(self, ctx):
        return ctx.log(ctx.mpf(int(self.lead.numerator)) / int(self.lead.denominator)) / (self.d - 1)

    def M(self, ctx):
        """Upper bound for G on |z| <= R."""
        R = ctx.mpf(int(self.R.numerator)) / int(self.R.denominator)
        eps = self.eps(self.R)
        e = ctx.mpf(int(eps.numerator)) / int(eps.denominator)
        return ctx.log(R) + self.log_lead_term(ctx) + 2 * e / (self.d - 1)


def escape_data(f: Poly) -> EscapeData:
    b = _rational_coeffs(f)
    d = len(b) - 1
    lead = abs(b[-1])

    def ok(r: mpq) -> bool:
        e = sum((abs(b[i]) * r ** (i - d) for i in range(d) if b[i]), mpq(0)) / lead
        return e <= mpq(1, 2) and lead * r ** (d - 1) * (1 - e) >= 2

    hi = mpq(1)
    while not ok(hi):
        hi *= 2
    lo = hi / 2 if hi > 1 else mpq(0)
    for _ in range(40):  # bisection on a monotone predicate, exact arithmetic
        mid = (lo + hi) / 2
        if mid > 0 and ok(mid):
            hi = mid
        else:
            lo = mid
    return EscapeData(d, tuple(b), hi)


# ---------------------------------------------------------------------------
class OrbitStatus(str, Enum):
    ESCAPED = "escaped"
    PREPERIODIC = "preperiodic"  # exact cycle found: zero is proven
    BOUNDED = "bounded"  # stayed in the escape disk; zero within the error bound, unproven


@dataclass(frozen=True)
class GreenResult:
    value: PrecisionReal
    status: OrbitStatus
    iterations: int

    @property
    def proven_zero(self) -> bool:
        return self.status is OrbitStatus.PREPERIODIC


def _to_iv(x):
    if isinstance(x, CyclotomicScalar):
        if x.conductor == 1:
            q = x.coords[0]
            return iv.mpf(int(q.numerator)) / int(q.denominator)
        return x.to_complex(iv)
    q = mpq(x)
    return iv.mpf(int(q.numerator)) / int(q.denominator)


def _size_bits(z: CyclotomicScalar) -> int:
    return sum(int(c.numerator).bit_length() + int(c.denominator).bit_length() for c in z.coords)


def _exact_phase(f: Poly, a: CyclotomicScalar, esc: EscapeData, max_iter: int):
    """Iterate exactly: ('cycle', n) | ('escaped', n, z) | ('handoff', n, z)."""
    R = esc.R
    z = a
    seen = {z: 0}
    for n in range(max_iter):
        if z.is_rational():
            if abs(z.to_rational()) > R:
                return ("escaped", n, z)
        else:
            with _ivprec(64):
                if abs(z.to_complex(iv)).a > float(R) + 1e-9:
                    return ("escaped", n, z)
        if _size_bits(z) > EXACT_BITS:
            return ("handoff", n, z)
        z = f(z)
        if z in seen:
            return ("cycle", n + 1)
        seen[z] = n + 1
    return ("handoff", max_iter, z)


class _PrecisionLoss(Exception):
    pass


def _numeric_phase(f: Poly, z0, n0: int, esc: EscapeData, digits: int, bits: int, max_iter: int):
    d = esc.d
    target = mpf(10) ** (-digits) / 4
    with _ivprec(bits):
        coeffs = [_to_iv(c) for c in esc.coeffs]
        z = _to_iv(z0)
        R = _to_iv(esc.R)
        M = max(esc.M(iv).b, 0)
        lt = esc.log_lead_term(iv)
        dn = iv.mpf(d) ** n0
        bounded_for = None
        for n in range(n0, max_iter + 1):
            r = abs(z)
            if not mpmath.isfinite(r.b):
                raise _PrecisionLoss
            if r.a > R.b:
                eps = sum((abs(coeffs[i]) * r.a ** (i - d) for i in range(d) if esc.coeffs[i]), iv.mpf(0))
                eps = eps / abs(coeffs[-1])
                tail = (2 * eps / ((d - 1) * dn)).b
                if tail <= target:
                    val = (iv.log(r) + lt) / dn
                    return PrecisionReal.from_interval(val, tail, digits), OrbitStatus.ESCAPED, n
            elif r.b <= R.a:
                bound = (M / dn).b
                bounded_for = (n, bound)
                if bound <= target:
                    return PrecisionReal(mpf(0), mpf(bound), digits), OrbitStatus.BOUNDED, n
            if r.b - r.a > max(r.a, mpf(1)) * mpf(2) ** (-bits // 4):
                raise _PrecisionLoss(bounded_for)
            acc = coeffs[-1]
            for c in reversed(coeffs[:-1]):
                acc = acc * z + c
            z = acc
            dn = dn * d
    raise MaxIterationsExceeded(
        f"orbit neither escaped nor settled within {max_iter} iterations",
        partial=PrecisionReal(mpf(0), mpf(bounded_for[1]), digits) if bounded_for else None,
    )


def green_detail(f: Poly, a, digits: int = DEFAULT_DIGITS, max_iter: int = MAX_ITERATIONS) -> GreenResult:
    """G_f(a) with orbit diagnostics.  ``a`` may be any cyclotomic scalar."""
    esc = escape_data(f)
    a = scalar(a)
    phase = _exact_phase(f, a, esc, min(max_iter, 64))
    if phase[0] == "cycle":
        return GreenResult(PrecisionReal(mpf(0), mpf(0), digits), OrbitStatus.PREPERIODIC, phase[1])
    _, n0, z = phase
    bits = _bits(digits)
    partial = None
    for _ in range(MAX_RESTARTS):
        try:
            val, status, n = _numeric_phase(f, z, n0, esc, digits, bits, max_iter)
            return GreenResult(val, status, n)
        except _PrecisionLoss as exc:
            if exc.args and exc.args[0]:
                partial = PrecisionReal(mpf(0), mpf(exc.args[0][1]), digits)
            bits *= 2
    raise MaxIterationsExceeded("interval enclosure lost all precision", partial=partial)


def green(f: Poly, a, digits: int = DEFAULT_DIGITS, max_iter: int = MAX_ITERATIONS) -> PrecisionReal:
    """Dynamical Green's function lim log|f^n(a)| / d^n."""
    return green_detail(f, a, digits, max_iter).value


# ---------------------------------------------------------------------------
def naive_height(a, digits: int = DEFAULT_DIGITS) -> PrecisionReal:
    """log max(|p|, q) for a = p/q in lowest terms."""
    q = mpq(scalar(a).to_rational())
    m = max(abs(int(q.numerator)), int(q.denominator))
    if m == 1:
        return PrecisionReal(mpf(0), mpf(0), digits)
    with _ivprec(_bits(digits)):
        return PrecisionReal.from_interval(iv.log(iv.mpf(m)), 0, digits)


def _vp(q: mpq, p: int) -> int:
    if q == 0:
        raise ValueError("valuation of zero")
    num, den, v = int(q.numerator), int(q.denominator), 0
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def _primes_of(n: int) -> set[int]:
    from sympy import factorint

    n = abs(int(n))
    return set(factorint(n)) if n > 1 else set()


class _Padic:
    """p^e * (m + O(p^N)) with m a unit, or O(p^e) when m == 0 (N == 0)."""

    __slots__ = ("e", "m", "N")

    def __init__(self, e: int, m: int, N: int):
        self.e, self.m, self.N = e, m, N

    def known(self) -> bool:
        return self.m != 0


def _pnorm(p: int, e: int, m: int, N: int) -> _Padic:
    if N <= 0:
        return _Padic(e + max(N, 0), 0, 0)
    m %= p ** N
    if m == 0:
        return _Padic(e + N, 0, 0)
    while m % p == 0:
        m //= p
        e += 1
        N -= 1
    return _Padic(e, m, N)


def _pfrom(q: mpq, p: int, N: int) -> Optional[_Padic]:
    if q == 0:
        return None
    v = _vp(q, p)
    num, den = int(q.numerator), int(q.denominator)
    if v > 0:
        num //= p ** v
    elif v < 0:
        den //= p ** (-v)
    mod = p ** N
    return _pnorm(p, v, num * pow(den, -1, mod), N)


def _padd(p, x: Optional[_Padic], y: Optional[_Padic]):
    if x is None:
        return y
    if y is None:
        return x
    top = min(x.e + x.N, y.e + y.N)
    e = min(x.e, y.e)
    m = x.m * p ** (x.e - e) + y.m * p ** (y.e - e)
    return _pnorm(p, e, m, top - e)


def _pmul(p, x: Optional[_Padic], y: Optional[_Padic]):
    if x is None or y is None:
        return None
    if not x.known() or not y.known():
        return _Padic(x.e + y.e, 0, 0)
    return _pnorm(p, x.e + y.e, x.m * y.m, min(x.N, y.N))


@dataclass(frozen=True)
class LocalHeight:
    """lambda_p(a) = coefficient * log p, or 0 <= lambda_p(a) <= bound_coefficient * log p."""

    p: int
    coefficient: mpq
    bound_coefficient: mpq = mpq(0)
    iterations: int = 0

    def to_precision_real(self, digits: int) -> PrecisionReal:
        with _ivprec(_bits(digits)):
            logp = iv.log(iv.mpf(self.p))
            if self.bound_coefficient:
                hi = logp * (iv.mpf(int(self.bound_coefficient.numerator)) / int(self.bound_coefficient.denominator))
                return PrecisionReal(mpf(0), mpf(hi.b), digits)
            c = iv.mpf(int(self.coefficient.numerator)) / int(self.coefficient.denominator)
            return PrecisionReal.from_interval(logp * c, 0, digits)

    @property
    def is_zero(self) -> bool:
        return self.coefficient == 0 and self.bound_coefficient == 0


def local_height(f: Poly, a, p: int, digits: int = DEFAULT_DIGITS, max_iter: int = MAX_ITERATIONS) -> LocalHeight:
    """p-adic escape rate lim max(0, log|f^n(a)|_p) / d^n.

    With T = min(min_{i<d} (v(b_i) - v(b_d)) / (d - i), -v(b_d) / (d - 1)), any z
    with v(z) < T has v(f(z)) = v(b_d) + d v(z) < v(z), so the orbit escapes and
    lambda_p(z) = (-v(z) - v(b_d)/(d-1)) log p exactly.  While v(z) >= T,
    v(f(z)) >= V = min_i (v(b_i) + i T) and lambda_p(a) <= C / d^(n+1) with
    C = max(0, -V - v(b_d)/(d-1)).
    """
    b = _rational_coeffs(f)
    d = len(b) - 1
    q = mpq(scalar(a).to_rational())
    vb = {i: _vp(c, p) for i, c in enumerate(b) if c}
    vd = vb[d]
    T = min([mpq(vb[i] - vd, d - i) for i in vb if i < d] + [mpq(-vd, d - 1)])
    V = min(vb[i] + i * T for i in vb)
    C = max(mpq(0), -V - mpq(vd, d - 1))
    target = mpq(1, 4 * 10 ** digits)

    def escaped_value(v: int, n: int) -> mpq:
        return (-v - mpq(vd, d - 1)) / d ** n

    if q != 0 and _vp(q, p) < T:
        return LocalHeight(p, escaped_value(_vp(q, p), 0))
    N = 64
    for _ in range(MAX_RESTARTS + 3):
        coeffs = [_pfrom(c, p, N) for c in b]
        z = _pfrom(q, p, N)
        dn = 1
        lost = False
        for n in range(0, max_iter + 1):
            if z is not None:
                if z.known() and z.e < T:
                    return LocalHeight(p, escaped_value(z.e, n), iterations=n)
                if not z.known() and z.e < T:
                    lost = True
                    break
            # here v(z) >= T
            if C == 0 or C / (dn * d) <= target:
                return LocalHeight(p, mpq(0), C / (dn * d), iterations=n)
            acc = coeffs[-1]
            for c in reversed(coeffs[:-1]):
                acc = _padd(p, _pmul(p, acc, z), c)
            z = acc
            dn *= d
        if not lost:
            break
        N *= 4
    raise MaxIterationsExceeded(f"{p}-adic orbit undecided", partial=None)


# ---------------------------------------------------------------------------
@dataclass
class HeightBreakdown:
    archimedean: PrecisionReal
    finite: dict = field(default_factory=dict)  # prime -> PrecisionReal
    total: PrecisionReal = None
    proven_preperiodic: bool = False
    archimedean_status: OrbitStatus = OrbitStatus.ESCAPED

    def to_json(self) -> dict:
        return {
            "archimedean": self.archimedean.to_json(),
            "finite": {str(p): v.to_json() for p, v in sorted(self.finite.items())},
            "total": self.total.to_json(),
            "proven_preperiodic": self.proven_preperiodic,
        }


def bad_primes(f: Poly) -> set[int]:
    """Primes where f is not p-integral with unit leading coefficient."""
    b = _rational_coeffs(f)
    out = _primes_of(int(b[-1].numerator))
    for c in b:
        out |= _primes_of(int(c.denominator))
    return out


def canonical_height(f: Poly, a, digits: int = DEFAULT_DIGITS, max_iter: int = MAX_ITERATIONS) -> HeightBreakdown:
    """hat h_f(a) = G_f(a) + sum_p lambda_p(a).

    Primes outside :func:`bad_primes` contribute max(0, -v_p(a)) log p; bad
    primes are iterated p-adically.  Only nonzero contributions are listed.
    """
    q = mpq(scalar(a).to_rational())
    arch = green_detail(f, q, digits, max_iter)
    if arch.status is OrbitStatus.PREPERIODIC:
        zero = PrecisionReal(mpf(0), mpf(0), digits)
        return HeightBreakdown(zero, {}, zero, True, arch.status)
    bad = bad_primes(f)
    primes = sorted(bad | _primes_of(int(q.denominator)))
    finite = {}
    for p in primes:
        if p in bad:
            lh = local_height(f, q, p, digits, max_iter)
        else:
            lh = LocalHeight(p, mpq(max(0, -_vp(q, p))) if q else mpq(0))
        if not lh.is_zero:
            finite[p] = lh.to_precision_real(digits)
    total = arch.value
    for p in primes:
        if p in finite:
            total = total + finite[p]
    return HeightBreakdown(arch.value, finite, total, False, arch.status)


def height_ratio(f: Poly, g: Poly, a, digits: int = DEFAULT_DIGITS) -> PrecisionReal:
    """hat h_f(a) / hat h_g(a)."""
    num = canonical_height(f, a, digits).total
    den = canonical_height(g, a, digits).total
    if not den.separated_from_zero():
        raise DenominatorNotSeparated(f"hat h_g(a) = {den!r} is not separated from 0")
    return num / den


# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class BottcherRadius:
    """phi_f is analytic on |z| > r0, which holds once G > G(critical points) there."""

    r0: mpf
    critical_bound: mpf


def _g_bounds(esc: EscapeData):
    """Float bounds Glo(r) <= G(z) for all |z| >= r and G(z) <= Gup(r) on |z| <= r."""
    d = esc.d
    lead = mpf(int(esc.lead.numerator)) / int(esc.lead.denominator)
    b = [abs(mpf(int(c.numerator)) / int(c.denominator)) for c in esc.coeffs]
    R = mpf(int(esc.R.numerator)) / int(esc.R.denominator)
    lt = mp.log(lead) / (d - 1)
    M = max(mpf(0), esc.M(mp))

    def eps(r):
        return sum(b[i] * r ** (i - d) for i in range(d) if b[i]) / lead

    def glo(r, depth=200):
        scale = mpf(1)
        for _ in range(depth):
            if r >= R:
                return (mp.log(r) + lt - 2 * eps(r) / (d - 1)) / scale
            e = eps(r)
            nxt = lead * r ** d * (1 - e)
            if e >= 1 or nxt <= r:
                return -mp.inf
            r, scale = nxt, scale * d
        return -mp.inf

    def gup(r, depth=200):
        best = M if r <= R else mp.inf
        scale = mpf(1)
        for _ in range(depth):
            if r >= R:
                return min(best, (mp.log(r) + lt + 2 * eps(r) / (d - 1)) / scale)
            best = min(best, M / scale)
            r = lead * r ** d * (1 + eps(r))
            scale *= d
        return best

    return glo, gup


def bottcher_radius(f: Poly, digits: int = DEFAULT_DIGITS) -> BottcherRadius:
    """A radius beyond which the Laurent series of phi_f converges.

    The set {G <= G*}, G* = max G(critical points), is connected, so it lies
    inside |z| < r as soon as G > G* on |z| = r.  G* is computed from the
    critical point itself when it is rational (degree 2) and otherwise
    bounded through a Cauchy bound on the roots of f'.
    """
    esc = escape_data(f)
    glo, gup = _g_bounds(esc)
    with mp.workprec(_bits(digits)):
        fp = f.derivative()
        crit = None
        if fp.degree == 1:
            crit = -fp.coeff(0) / fp.coeff(1)
        if crit is not None:
            g = green(f, crit, digits)
            gstar = g.value + g.error_bound
        else:
            lc = abs(fp.leading.to_rational())
            rho = 1 + max(abs(fp.coeff(i).to_rational()) / lc for i in range(fp.degree))
            gstar = gup(mpf(int(rho.numerator)) / int(rho.denominator))
        lo, hi = mpf(0), mpf(1)
        while glo(hi) <= gstar:
            hi *= 2
        for _ in range(80):
            mid = (lo + hi) / 2
            if glo(mid) > gstar:
                hi = mid
            else:
                lo = mid
        return BottcherRadius(hi * (1 + mpf(2) ** -30), gstar)


def phi_abs(f: Poly, a, window: int = 64, digits: int = DEFAULT_DIGITS) -> PrecisionReal:
    """log|phi_f(a)| from the truncated Böttcher series, with a Cauchy tail bound.

    h(z) = phi(z)/z is analytic on |z| > r0 including infinity, and
    |h| <= exp(Gup(r1)) / r1 on |z| = r1 for any r0 < r1 < |a|, so the
    coefficient of z^-k in h is at most that bound times r1^k.
    """
    rad = bottcher_radius(f, digits)
    a = scalar(a)
    bits = _bits(digits) + 2 * window
    with mp.workprec(bits):
        za = a.to_complex(mp)
        absa = abs(za)
        if absa <= rad.r0:
            raise RadiusTooSmall(f"|a| = {mpmath.nstr(absa, 8)} must exceed {mpmath.nstr(rad.r0, 8)}")
        phi = reversion(solve_psi(f, window).tail)
        k0 = 1 - phi.prec  # first coefficient of phi(z)/z not retained
        _, gup = _g_bounds(escape_data(f))
        best = None
        for i in range(1, 64):
            r1 = rad.r0 + (absa - rad.r0) * mpf(i) / 64
            ratio = r1 / absa
            bound = absa * mp.exp(gup(r1)) / r1 * ratio ** k0 / (1 - ratio)
            if best is None or bound < best:
                best = bound
        total = mpf(0)
        mag = mpf(0)
        for k, c in phi.terms().items():
            term = c.to_complex(mp) * za ** k
            total += term
            mag += abs(term)
        eps = best + mag * mpf(2) ** (-bits + 16)
        s = abs(total)
        if eps >= s:
            raise RadiusTooSmall(f"tail bound {mpmath.nstr(eps, 3)} swamps |phi(a)|; increase |a| or the window")
        err = -mp.log(1 - eps / s)
        return PrecisionReal(mp.log(s), err, digits)


__all__ = [
    "EscapeData",
    "GreenResult",
    "HeightBreakdown",
    "LocalHeight",
    "OrbitStatus",
    "PrecisionReal",
    "bad_primes",
    "bottcher_radius",
    "canonical_height",
    "escape_data",
    "green",
    "green_detail",
    "height_ratio",
    "local_height",
    "naive_height",
    "phi_abs",
]
