"""Dense polynomials and truncated Laurent tails in 1/t.

A :class:`LaurentTail` stores the coefficients of t^top, t^(top-1), ... down to
but excluding the first untrusted exponent ``prec``::

    t - 1/2*t^-1 - 3/8*t^-3 + O(t^-5)      # top = 1, prec = -5, window = 6

Every operation derives the exponent range it can guarantee from the ranges
of its inputs; nothing is ever padded with unverified zeros.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Iterable, Sequence

from gmpy2 import mpq

from .errors import InvalidTwist, NotInvertible, WindowTooSmall, ZeroSeries
from .scalars import ONE, ZERO, CyclotomicScalar, RootOfUnity, scalar


# ---------------------------------------------------------------------------
# coefficient kernels (fast path for purely rational data)

def _all_rational(xs) -> bool:
    return all(x.conductor == 1 for x in xs)


def _convolve(a: Sequence[CyclotomicScalar], b: Sequence[CyclotomicScalar], n: int | None = None):
    """First ``n`` coefficients of the product of two coefficient lists."""
    if not a or not b:
        return [ZERO] * (n or 0)
    full = len(a) + len(b) - 1
    n = full if n is None else n
    if _all_rational(a) and _all_rational(b):
        qa = [x.coords[0] for x in a]
        qb = [x.coords[0] for x in b]
        out = []
        lb = len(qb)
        for k in range(n):
            lo = max(0, k - lb + 1)
            hi = min(k, len(qa) - 1)
            s = mpq(0)
            for i in range(lo, hi + 1):
                s += qa[i] * qb[k - i]
            out.append(CyclotomicScalar(1, (s,)))
        return out
    out = []
    for k in range(n):
        s = ZERO
        for i in range(max(0, k - len(b) + 1), min(k, len(a) - 1) + 1):
            if a[i] and b[k - i]:
                s = s + a[i] * b[k - i]
        out.append(s)
    return out


def _add_lists(a, b):
    if len(a) < len(b):
        a, b = b, a
    return [x + y for x, y in zip(a, b)] + list(a[len(b):])


# ---------------------------------------------------------------------------
class Poly:
    """Dense univariate polynomial; ``coeffs[i]`` is the coefficient of t^i."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [scalar(c) for c in coeffs]
        while cs and cs[-1].is_zero():
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def monomial(cls, k: int, c=1) -> "Poly":
        return cls([0] * k + [c])

    @classmethod
    def constant(cls, c) -> "Poly":
        return cls([c])

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def leading(self) -> CyclotomicScalar:
        return self.coeffs[-1] if self.coeffs else ZERO

    def coeff(self, i: int) -> CyclotomicScalar:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else ZERO

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_rational(self) -> bool:
        return all(c.is_rational() for c in self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other):
        other = other if isinstance(other, Poly) else Poly.constant(other)
        return Poly(_add_lists(self.coeffs, other.coeffs))

    __radd__ = __add__

    def __neg__(self):
        return Poly([-c for c in self.coeffs])

    def __sub__(self, other):
        other = other if isinstance(other, Poly) else Poly.constant(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Poly):
            c = scalar(other)
            return Poly([x * c for x in self.coeffs])
        return Poly(_convolve(self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly":
        result = Poly([1])
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __call__(self, x):
        """Horner evaluation at anything supporting ``*`` and ``+`` with scalars."""
        if isinstance(x, Poly):
            return self.compose(x)
        if isinstance(x, LaurentTail):
            return series_compose_poly(self, x)
        acc = ZERO
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def compose(self, q: "Poly") -> "Poly":
        """p(q(t))."""
        acc = Poly()
        for c in reversed(self.coeffs):
            acc = acc * q + c
        return acc

    def iterate(self, n: int) -> "Poly":
        """n-fold composition self o ... o self (n >= 0)."""
        result = Poly([0, 1])
        for _ in range(n):
            result = self.compose(result)
        return result

    def derivative(self) -> "Poly":
        return Poly([c * i for i, c in enumerate(self.coeffs)][1:])

    def __repr__(self):
        return f"Poly({str(self)!r})"

    def __str__(self):
        from .formatting import format_poly

        return format_poly(self)


T = Poly([0, 1])


def poly_compose(p: Poly, q: Poly) -> Poly:
    return p.compose(q)


# ---------------------------------------------------------------------------
def _strip(top: int, coeffs: list, prec: int):
    i = 0
    while i < len(coeffs) and coeffs[i].is_zero():
        i += 1
    coeffs = coeffs[i:]
    if not coeffs:
        return prec, ()
    return top - i, tuple(coeffs)


class LaurentTail:
    """Truncated series sum c_k t^k over prec < k <= top."""

    __slots__ = ("top", "coeffs", "prec")

    def __init__(self, top: int, coeffs: Iterable, window: int | None = None):
        cs = [scalar(c) for c in coeffs]
        if window is None:
            window = len(cs)
        if window < len(cs):
            cs = cs[:window]
        cs.extend([ZERO] * (window - len(cs)))
        prec = top - window
        self.top, self.coeffs = _strip(top, cs, prec)
        self.prec = prec

    @classmethod
    def _raw(cls, top: int, coeffs, prec: int) -> "LaurentTail":
        obj = cls.__new__(cls)
        obj.top, obj.coeffs = _strip(top, list(coeffs), prec)
        obj.prec = prec
        return obj

    @classmethod
    def zero(cls, prec: int) -> "LaurentTail":
        """O(t^prec)."""
        return cls._raw(prec, (), prec)

    @classmethod
    def from_terms(cls, terms: dict, prec: int) -> "LaurentTail":
        """Series from {exponent: coefficient}; exponents <= prec are dropped."""
        keep = {k: scalar(v) for k, v in terms.items() if k > prec and not scalar(v).is_zero()}
        if not keep:
            return cls.zero(prec)
        top = max(keep)
        return cls._raw(top, [keep.get(top - i, ZERO) for i in range(top - prec)], prec)

    @classmethod
    def from_poly(cls, p: Poly, window: int) -> "LaurentTail":
        return cls(p.degree, reversed(p.coeffs), window)

    @classmethod
    def monomial(cls, k: int, window: int, c=1) -> "LaurentTail":
        return cls(k, [c], window)

    # -- accessors ----------------------------------------------------------
    @property
    def window(self) -> int:
        return self.top - self.prec

    def is_zero(self) -> bool:
        """True when every retained coefficient vanishes."""
        return not self.coeffs

    def coeff(self, k: int) -> CyclotomicScalar:
        if k <= self.prec:
            raise IndexError(f"exponent {k} lies in the truncated range O(t^{self.prec})")
        if k > self.top or not self.coeffs:
            return ZERO
        return self.coeffs[self.top - k]

    def terms(self) -> dict:
        return {self.top - i: c for i, c in enumerate(self.coeffs) if not c.is_zero()}

    def _val(self) -> int:
        # upper bound on the valuation; exact when nonzero
        return self.top if self.coeffs else self.prec

    def __eq__(self, other):
        if not isinstance(other, LaurentTail):
            return NotImplemented
        return (self.prec, self.top, self.coeffs) == (other.prec, other.top, other.coeffs)

    def __hash__(self):
        return hash((self.prec, self.top, self.coeffs))

    def agrees_with(self, other: "LaurentTail") -> bool:
        """Equal on the exponent range both operands know."""
        return (self - other).is_zero()

    def truncate(self, window: int | None = None, prec: int | None = None) -> "LaurentTail":
        """Drop terms: keep ``window`` terms below top, or everything above ``prec``."""
        if prec is None:
            prec = self._val() - window
        prec = max(prec, self.prec)
        return LaurentTail._raw(self.top, self.coeffs[: max(0, self.top - prec)], prec)

    def shift(self, k: int) -> "LaurentTail":
        """t^k * self (exact)."""
        return LaurentTail._raw(self.top + k, self.coeffs, self.prec + k)

    # -- ring operations ----------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, LaurentTail):
            other = LaurentTail._constant(other, self.prec)
        prec = max(self.prec, other.prec)
        top = max(self._val(), other._val())
        n = top - prec
        if n <= 0:
            return LaurentTail.zero(prec)
        out = [ZERO] * n
        for s in (self, other):
            for i, c in enumerate(s.coeffs):
                k = top - (s.top - i)
                if k >= n:
                    break
                out[k] = out[k] + c
        return LaurentTail._raw(top, out, prec)

    __radd__ = __add__

    @classmethod
    def _constant(cls, c, prec: int) -> "LaurentTail":
        """The exact constant c, represented down to ``prec``."""
        c = scalar(c)
        if prec >= 0 or c.is_zero():
            return cls.zero(prec)
        return cls._raw(0, [c] + [ZERO] * (-prec - 1), prec)

    def __neg__(self):
        return LaurentTail._raw(self.top, [-c for c in self.coeffs], self.prec)

    def __sub__(self, other):
        if not isinstance(other, LaurentTail):
            other = LaurentTail._constant(other, self.prec)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, LaurentTail):
            c = scalar(other)
            if c.is_zero():
                return LaurentTail.zero(self.prec)
            return LaurentTail._raw(self.top, [x * c for x in self.coeffs], self.prec)
        v1, v2 = self._val(), other._val()
        prec = max(self.prec + v2, other.prec + v1)
        top = v1 + v2
        if not self.coeffs or not other.coeffs or top <= prec:
            return LaurentTail.zero(prec)
        return LaurentTail._raw(top, _convolve(self.coeffs, other.coeffs, top - prec), prec)

    __rmul__ = __mul__

    def inverse(self) -> "LaurentTail":
        """1/s with the same relative precision."""
        if not self.coeffs:
            raise ZeroSeries("cannot invert a series with no nonzero retained coefficient")
        n = self.window
        a = list(self.coeffs)
        inv0 = a[0].inverse()
        b = [inv0]
        if _all_rational(a):
            qa = [x.coords[0] for x in a]
            qi = inv0.coords[0]
            qb = [qi]
            for k in range(1, n):
                s = mpq(0)
                for j in range(1, min(k, len(qa) - 1) + 1):
                    s += qa[j] * qb[k - j]
                qb.append(-s * qi)
            b = [CyclotomicScalar(1, (x,)) for x in qb]
        else:
            for k in range(1, n):
                s = ZERO
                for j in range(1, min(k, len(a) - 1) + 1):
                    s = s + a[j] * b[k - j]
                b.append(-(s * inv0))
        return LaurentTail._raw(-self.top, b, -self.top - n)

    def __truediv__(self, other):
        if isinstance(other, LaurentTail):
            return self * other.inverse()
        return self * scalar(other).inverse()

    def __pow__(self, k: int) -> "LaurentTail":
        if k < 0:
            return self.inverse() ** (-k)
        if k == 0:
            if not self.coeffs:
                raise ZeroSeries("0^0 on a truncated zero series")
            return LaurentTail._raw(0, [ONE] + [ZERO] * (self.window - 1), -self.window)
        result = None
        base = self
        while k:
            if k & 1:
                result = base if result is None else result * base
            k >>= 1
            if k:
                base = base * base
        return result

    # -- substitutions ------------------------------------------------------
    def subs_power(self, m: int) -> "LaurentTail":
        """s(t^m) for m >= 1."""
        if m < 1:
            raise ValueError("power substitution needs m >= 1")
        if m == 1 or not self.coeffs:
            return LaurentTail._raw(self.top * m, self.coeffs, self.prec * m)
        out = []
        for c in self.coeffs:
            out.append(c)
            out.extend([ZERO] * (m - 1))
        return LaurentTail._raw(self.top * m, out, self.prec * m)

    def twist(self, zeta) -> "LaurentTail":
        """s(zeta * t): the coefficient of t^k is multiplied by zeta^k."""
        z = zeta.value if isinstance(zeta, RootOfUnity) else scalar(zeta)
        if not self.coeffs:
            return self
        zinv = z.inverse()
        out = []
        w = z ** self.top if self.top >= 0 else zinv ** (-self.top)
        for c in self.coeffs:
            out.append(c * w)
            w = w * zinv
        return LaurentTail._raw(self.top, out, self.prec)

    def compose(self, r: "LaurentTail") -> "LaurentTail":
        """s(r(t)) for a tail r of positive valuation."""
        v = r.valuation()
        if v < 1:
            raise ValueError("inner series must have positive valuation")
        if not self.coeffs:
            return LaurentTail.zero(self.prec * v)
        # r's own truncation enters through s'(r) * O(t^r.prec)
        cut = max(self.prec * v, r.prec + (self.top - 1) * v)
        terms = self.terms()
        acc = LaurentTail._constant(terms.get(0, ZERO), cut)
        kmax = max(terms)
        if kmax > 0:
            # part_k = sum_{j >= k} c_j r^(j-k+1) is later multiplied by r^(k-1)
            part = None
            for k in range(kmax, 0, -1):
                c = LaurentTail._constant(terms.get(k, ZERO), cut - k * v)
                part = c if part is None else part + c
                part = (part * r).truncate(prec=cut - (k - 1) * v)
            acc = acc + part
        jmax = -min(terms)
        if jmax > 0:
            w = r.inverse().truncate(prec=cut)
            part = None
            for j in range(jmax, 0, -1):
                c = LaurentTail._constant(terms.get(-j, ZERO), cut)
                part = c if part is None else part + c
                part = (part * w).truncate(prec=cut)
            acc = acc + part
        return acc.truncate(prec=cut)

    def valuation(self) -> int:
        """v_infinity: the exponent of the leading retained term."""
        if not self.coeffs:
            raise ZeroSeries(f"all retained coefficients vanish (series is O(t^{self.prec}))")
        return self.top

    def __repr__(self):
        return f"LaurentTail({str(self)!r})"

    def __str__(self):
        from .formatting import format_series

        return format_series(self)


def valuation(s: LaurentTail) -> int:
    return s.valuation()


def series_compose_poly(p: Poly, s: LaurentTail, window: int | None = None) -> LaurentTail:
    """p(s(t)) for s of positive valuation; optionally truncated to ``window`` terms.

    The unknown part O(t^prec) of s perturbs p(s) by p'(s) * O(t^prec), so the
    result is exact above prec + (deg p - 1) * v(s).
    """
    v = s.valuation()
    if v < 1:
        raise ValueError("series_compose_poly needs a tail of positive valuation")
    d = p.degree
    if d <= 0:
        cut = s.prec
        out = LaurentTail._constant(p.coeff(0), cut) if d == 0 else LaurentTail.zero(cut)
    else:
        cut = s.prec + (d - 1) * v
        out = None
        for i in range(d, -1, -1):
            # sum_{j >= i} b_j s^(j-i) is later multiplied by s^i
            c = LaurentTail._constant(p.coeff(i), cut - i * v)
            out = c if out is None else (out * s).truncate(prec=cut - i * v) + c
    if window is not None:
        top = d * v if d > 0 else 0
        if top - out.prec < window:
            raise WindowTooSmall(
                f"input window {s.window} yields only {top - out.prec} exact terms, {window} requested"
            )
        out = out.truncate(prec=top - window)
    return out


# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class MdElement:
    """u(t) = zeta * t^m with zeta a root of unity of order prime to ``d``."""

    zeta: RootOfUnity
    m: int
    d: int

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("M_d element needs m >= 1")
        if self.d < 2:
            raise ValueError("M_d needs d >= 2")
        if gcd(self.zeta.order, self.d) != 1:
            raise InvalidTwist(f"root of unity of order {self.zeta.order} is not prime to d = {self.d}")

    def as_poly(self) -> Poly:
        return Poly.monomial(self.m, self.zeta.value)

    def __str__(self):
        return f"{self.zeta}*t^{self.m}" if self.m != 1 else f"{self.zeta}*t"


def substitute_md(s: LaurentTail, u: MdElement) -> LaurentTail:
    """s(zeta t^m): exponent k becomes zeta^k t^(k m)."""
    return s.twist(u.zeta).subs_power(u.m)


def reversion(s: LaurentTail) -> LaurentTail:
    """Compositional inverse r of s = a t + c_0 + c_1/t + ..., with s(r(t)) = t.

    Writing x = 1/t, R(x) = 1/r(1/x) is the power-series reversion of
    S(x) = 1/s(1/x), and phi(w) = w / S(w) has coefficients (a, c_0, c_1, ...),
    so Lagrange inversion gives [x^n] R = [w^(n-1)] phi(w)^n / n.

    An input window of N terms yields N - 1 returned terms (one term of margin
    below what the inversion formally determines).
    """
    if not s.coeffs or s.top != 1:
        raise NotInvertible(f"reversion needs valuation 1, got {s._val()}")
    n = s.window
    if n < 2:
        raise WindowTooSmall("reversion needs a window of at least 2")
    phi = list(s.coeffs) + [ZERO] * (n - len(s.coeffs))
    power = [ONE]
    big_r = []
    for k in range(1, n + 1):
        power = _convolve(power, phi, n)
        big_r.append(power[k - 1] * mpq(1, k))
    # R(1/t) = sum_k R_k t^-k; r = 1 / R(1/t)
    r = LaurentTail._raw(-1, big_r, -1 - n).inverse()
    return r.truncate(window=n - 1)
