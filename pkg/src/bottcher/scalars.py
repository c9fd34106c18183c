"""Exact arithmetic in cyclotomic fields Q(zeta_n).

An element of Q(zeta_n) is stored in the power basis 1, x, ..., x^(phi(n)-1) of
Q[x]/(Phi_n).  Binary operations first embed both operands into Q(zeta_lcm);
the result keeps that conductor (it is never minimized implicitly).

Rationals are ``gmpy2.mpq``; ``int`` and ``fractions.Fraction`` are accepted
anywhere a scalar is expected.
"""
from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Optional

import gmpy2
from gmpy2 import mpq

from .errors import ConductorTooLarge, DivisionByZero, NoCyclotomicRoot

DEFAULT_CONDUCTOR_CAP = 120
_conductor_cap = int(os.environ.get("BOTTCHER_CONDUCTOR_CAP", DEFAULT_CONDUCTOR_CAP))


def get_conductor_cap() -> int:
    return _conductor_cap


def set_conductor_cap(cap: int) -> int:
    """Set the largest admissible conductor; returns the previous value."""
    global _conductor_cap
    if cap < 1:
        raise ValueError("conductor cap must be positive")
    old, _conductor_cap = _conductor_cap, int(cap)
    return old


def _check_conductor(n: int) -> None:
    if n > _conductor_cap:
        raise ConductorTooLarge(f"conductor {n} exceeds cap {_conductor_cap}")


def lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b


def divisors(n: int) -> list[int]:
    return [k for k in range(1, n + 1) if n % k == 0]


@lru_cache(maxsize=None)
def euler_phi(n: int) -> int:
    return sum(1 for k in range(1, n + 1) if gcd(k, n) == 1)


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_n, ascending.

    x^n - 1 divided by Phi_e for every proper divisor e of n.  lru_cache makes
    concurrent first use idempotent: both fills compute the same tuple.
    """
    num = [-1] + [0] * (n - 1) + [1]
    for e in divisors(n)[:-1]:
        num = _exact_int_division(num, cyclotomic_polynomial(e))
    return tuple(num)


def _exact_int_division(num: list[int], den: tuple[int, ...]) -> list[int]:
    # den is monic, so the quotient stays integral
    num = list(num)
    dq = len(den) - 1
    quot = [0] * (len(num) - dq)
    for i in range(len(num) - 1, dq - 1, -1):
        c = num[i]
        if c:
            quot[i - dq] = c
            for j, dc in enumerate(den):
                num[i - dq + j] -= c * dc
    assert not any(num[:dq]), "inexact cyclotomic division"
    return quot


def _reduce(coeffs: list, n: int) -> tuple:
    """Reduce a coefficient list modulo Phi_n, returning phi(n) coordinates."""
    phi = cyclotomic_polynomial(n)
    k = len(phi) - 1
    c = list(coeffs)
    for i in range(len(c) - 1, k - 1, -1):
        lead = c[i]
        if lead:
            for j in range(k):
                if phi[j]:
                    c[i - k + j] -= lead * phi[j]
    c = c[:k]
    if len(c) < k:
        c.extend([mpq(0)] * (k - len(c)))
    return tuple(mpq(x) for x in c)


def to_rational(x) -> mpq:
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    if isinstance(x, str):
        return mpq(x)
    return mpq(x)


class CyclotomicScalar:
    """Immutable element of Q(zeta_n) with n = ``conductor``."""

    __slots__ = ("conductor", "coords")

    def __init__(self, conductor: int, coords):
        self.conductor = conductor
        self.coords = coords

    # -- constructors -------------------------------------------------------
    @classmethod
    def rational(cls, q) -> "CyclotomicScalar":
        return cls(1, (to_rational(q),))

    @classmethod
    def from_coeffs(cls, n: int, coeffs) -> "CyclotomicScalar":
        """Element sum coeffs[i] * zeta_n^i (any length; reduced mod Phi_n)."""
        _check_conductor(n)
        return cls(n, _reduce([to_rational(c) for c in coeffs], n))

    # -- structure ----------------------------------------------------------
    def embed(self, m: int) -> "CyclotomicScalar":
        """Image in Q(zeta_m); requires conductor | m."""
        n = self.conductor
        if n == m:
            return self
        if m % n:
            raise ValueError(f"cannot embed Q(zeta_{n}) into Q(zeta_{m})")
        _check_conductor(m)
        step = m // n
        raw = [mpq(0)] * (step * (len(self.coords) - 1) + 1)
        for i, c in enumerate(self.coords):
            raw[i * step] = c
        return CyclotomicScalar(m, _reduce(raw, m))

    def restrict(self, e: int) -> Optional["CyclotomicScalar"]:
        """Preimage in Q(zeta_e) for e | conductor, or None if not in that subfield."""
        n = self.conductor
        if n % e:
            raise ValueError(f"{e} does not divide conductor {n}")
        if e == n:
            return self
        k = euler_phi(e)
        cols = [CyclotomicScalar.from_coeffs(e, [0] * i + [1]).embed(n).coords for i in range(k)]
        sol = _solve_columns(cols, list(self.coords))
        if sol is None:
            return None
        return CyclotomicScalar(e, tuple(sol))

    def minimized(self) -> "CyclotomicScalar":
        """The same element written over the smallest conductor containing it."""
        if self.conductor == 1:
            return self
        for e in divisors(self.conductor):
            r = self.restrict(e)
            if r is not None:
                return r
        return self  # pragma: no cover - e = conductor always succeeds

    def is_rational(self) -> bool:
        if self.conductor == 1:
            return True
        return self.minimized().conductor == 1

    def to_rational(self) -> mpq:
        m = self.minimized()
        if m.conductor != 1:
            raise ValueError("scalar is not rational")
        return m.coords[0]

    def is_zero(self) -> bool:
        return not any(self.coords)

    def __bool__(self) -> bool:
        return any(self.coords)

    # -- arithmetic ---------------------------------------------------------
    def _lift(self, other):
        if not isinstance(other, CyclotomicScalar):
            other = CyclotomicScalar.rational(other)
        if self.conductor == other.conductor:
            return self, other
        m = lcm(self.conductor, other.conductor)
        return self.embed(m), other.embed(m)

    def __add__(self, other):
        try:
            a, b = self._lift(other)
        except TypeError:
            return NotImplemented
        return CyclotomicScalar(a.conductor, tuple(x + y for x, y in zip(a.coords, b.coords)))

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicScalar(self.conductor, tuple(-x for x in self.coords))

    def __sub__(self, other):
        try:
            a, b = self._lift(other)
        except TypeError:
            return NotImplemented
        return CyclotomicScalar(a.conductor, tuple(x - y for x, y in zip(a.coords, b.coords)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, CyclotomicScalar):
            try:
                q = to_rational(other)
            except TypeError:
                return NotImplemented
            return CyclotomicScalar(self.conductor, tuple(x * q for x in self.coords))
        a, b = self._lift(other)
        n = a.conductor
        if n == 1:
            return CyclotomicScalar(1, (a.coords[0] * b.coords[0],))
        ac, bc = a.coords, b.coords
        raw = [mpq(0)] * (len(ac) + len(bc) - 1)
        for i, x in enumerate(ac):
            if x:
                for j, y in enumerate(bc):
                    raw[i + j] += x * y
        return CyclotomicScalar(n, _reduce(raw, n))

    __rmul__ = __mul__

    def inverse(self) -> "CyclotomicScalar":
        if self.is_zero():
            raise DivisionByZero("inverse of zero")
        n = self.conductor
        if n == 1:
            return CyclotomicScalar(1, (1 / self.coords[0],))
        inv = _poly_inverse_mod(list(self.coords), [mpq(c) for c in cyclotomic_polynomial(n)])
        return CyclotomicScalar(n, _reduce(inv, n))

    def __truediv__(self, other):
        if not isinstance(other, CyclotomicScalar):
            try:
                q = to_rational(other)
            except TypeError:
                return NotImplemented
            if q == 0:
                raise DivisionByZero("division by zero")
            return CyclotomicScalar(self.conductor, tuple(x / q for x in self.coords))
        return self * other.inverse()

    def __rtruediv__(self, other):
        return CyclotomicScalar.rational(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = ONE
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result if result.conductor >= self.conductor else result.embed(self.conductor)

    def __eq__(self, other):
        if not isinstance(other, CyclotomicScalar):
            try:
                other = CyclotomicScalar.rational(other)
            except (TypeError, ValueError):
                return NotImplemented
        if self.conductor == other.conductor:
            return self.coords == other.coords
        m = lcm(self.conductor, other.conductor)
        return self.embed(m).coords == other.embed(m).coords

    def __hash__(self):
        # The normalized trace Tr(a)/phi(n) does not depend on the conductor used.
        n = self.conductor
        if n == 1:
            return hash(self.coords[0])
        t = sum((c * _normalized_trace_of_power(n, i) for i, c in enumerate(self.coords)), mpq(0))
        return hash(t)

    def galois(self, j: int) -> "CyclotomicScalar":
        """Image under zeta_n -> zeta_n^j, gcd(j, n) = 1."""
        n = self.conductor
        if gcd(j, n) != 1:
            raise ValueError("automorphism exponent must be a unit mod n")
        raw = [mpq(0)] * n
        for i, c in enumerate(self.coords):
            raw[(i * j) % n] += c
        return CyclotomicScalar(n, _reduce(raw, n))

    def conjugate(self) -> "CyclotomicScalar":
        return self.galois(-1 % self.conductor) if self.conductor > 2 else self

    def to_complex(self, ctx):
        """Numeric value under zeta_n -> exp(2 pi i / n), in mpmath context ``ctx``
        (``mpmath.mp`` or ``mpmath.iv``)."""
        n = self.conductor
        if n == 1:
            return ctx.mpc(ctx.mpf(self.coords[0].numerator) / self.coords[0].denominator, 0)
        total = ctx.mpc(0, 0)
        for i, c in enumerate(self.coords):
            if c:
                angle = ctx.mpf(2 * i) / n
                if hasattr(ctx, "cospi"):
                    z = ctx.mpc(ctx.cospi(angle), ctx.sinpi(angle))
                else:  # interval context
                    z = ctx.mpc(ctx.cos(ctx.pi * angle), ctx.sin(ctx.pi * angle))
                total += z * (ctx.mpf(c.numerator) / c.denominator)
        return total

    def __repr__(self):
        from .formatting import format_scalar

        return f"CyclotomicScalar({format_scalar(self)!r})"

    def __str__(self):
        from .formatting import format_scalar

        return format_scalar(self)


@lru_cache(maxsize=None)
def _normalized_trace_of_power(n: int, i: int) -> mpq:
    # Ramanujan sum c_n(i) divided by phi(n)
    m = n // gcd(n, i)
    return mpq(_mobius(m), euler_phi(m))


def _mobius(m: int) -> int:
    result, p = 1, 2
    while p * p <= m:
        if m % p == 0:
            m //= p
            if m % p == 0:
                return 0
            result = -result
        p += 1
    return -result if m > 1 else result


def _poly_inverse_mod(a: list, mod: list) -> list:
    """Inverse of a modulo ``mod`` over Q via the extended Euclidean algorithm."""

    def trim(p):
        while p and not p[-1]:
            p.pop()
        return p

    def divmod_poly(num, den):
        num = list(num)
        q = [mpq(0)] * max(len(num) - len(den) + 1, 1)
        lead = den[-1]
        for i in range(len(num) - len(den), -1, -1):
            c = num[i + len(den) - 1] / lead
            q[i] = c
            if c:
                for j, dc in enumerate(den):
                    num[i + j] -= c * dc
        return trim(q), trim(num[: len(den) - 1])

    def sub_mul(x, q, y):
        prod = [mpq(0)] * (len(q) + len(y) - 1 if q and y else 0)
        for i, qi in enumerate(q):
            for j, yj in enumerate(y):
                prod[i + j] += qi * yj
        out = list(x) + [mpq(0)] * max(0, len(prod) - len(x))
        for i, c in enumerate(prod):
            out[i] -= c
        return trim(out)

    r0, r1 = trim(list(mod)), trim(list(a))
    s0, s1 = [], [mpq(1)]
    while len(r1) > 1:
        q, r = divmod_poly(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, sub_mul(s0, q, s1)
        if not r1:
            raise DivisionByZero("element is not invertible")  # pragma: no cover
    c = r1[0]
    return [x / c for x in s1]


def _solve_columns(cols: list, target: list):
    """Solve sum x_i * cols[i] = target exactly; None if inconsistent."""
    rows = len(target)
    k = len(cols)
    aug = [[cols[j][r] for j in range(k)] + [target[r]] for r in range(rows)]
    piv_row = 0
    pivots = []
    for c in range(k):
        p = next((r for r in range(piv_row, rows) if aug[r][c]), None)
        if p is None:
            continue
        aug[piv_row], aug[p] = aug[p], aug[piv_row]
        inv = 1 / aug[piv_row][c]
        aug[piv_row] = [x * inv for x in aug[piv_row]]
        for r in range(rows):
            if r != piv_row and aug[r][c]:
                f = aug[r][c]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[piv_row])]
        pivots.append(c)
        piv_row += 1
    if any(aug[r][k] for r in range(piv_row, rows)):
        return None
    sol = [mpq(0)] * k
    for r, c in enumerate(pivots):
        sol[c] = aug[r][k]
    return sol


ZERO = CyclotomicScalar(1, (mpq(0),))
ONE = CyclotomicScalar(1, (mpq(1),))


def scalar(x) -> CyclotomicScalar:
    """Coerce int / Fraction / mpq / str / CyclotomicScalar to a CyclotomicScalar."""
    if isinstance(x, CyclotomicScalar):
        return x
    if isinstance(x, str):
        from .parsing import parse_scalar

        return parse_scalar(x)
    return CyclotomicScalar.rational(x)


def primitive_root(n: int) -> CyclotomicScalar:
    """zeta_n = exp(2 pi i / n) as an element of conductor n."""
    if n < 1:
        raise ValueError("order must be positive")
    return CyclotomicScalar.from_coeffs(n, [0, 1])


@dataclass(frozen=True)
class RootOfUnity:
    """zeta_order^exponent in canonical form: gcd(exponent, order) = 1 or (1, 0)."""

    order: int
    exponent: int

    def __post_init__(self):
        if self.order < 1:
            raise ValueError("order must be positive")
        if not (0 <= self.exponent < self.order):
            raise ValueError("exponent out of range")
        if self.order == 1:
            if self.exponent != 0:
                raise ValueError("non-canonical root of unity")
        elif gcd(self.exponent, self.order) != 1:
            raise ValueError("non-canonical root of unity; use RootOfUnity.of")

    @classmethod
    def of(cls, n: int, k: int = 1) -> "RootOfUnity":
        """Canonical form of zeta_n^k."""
        k %= n
        g = gcd(k, n)
        if k == 0:
            return cls(1, 0)
        return cls(n // g, k // g)

    @property
    def value(self) -> CyclotomicScalar:
        return primitive_root(self.order) ** self.exponent

    def __mul__(self, other: "RootOfUnity") -> "RootOfUnity":
        m = lcm(self.order, other.order)
        return RootOfUnity.of(m, self.exponent * (m // self.order) + other.exponent * (m // other.order))

    def __pow__(self, k: int) -> "RootOfUnity":
        return RootOfUnity.of(self.order, self.exponent * k)

    def __str__(self):
        if self.order == 1:
            return "1"
        if self.exponent == 1:
            return f"zeta({self.order})"
        return f"zeta({self.order})^{self.exponent}"


def scalar_is_root_of_unity(a) -> Optional[RootOfUnity]:
    """Canonical (order, exponent) if ``a`` is a root of unity, else None.

    The roots of unity in Q(zeta_n) are the N-th roots with N = lcm(n, 2).
    """
    a = scalar(a)
    n = a.conductor
    big = lcm(n, 2)
    if a ** big != ONE:
        return None
    zeta = primitive_root(big)
    z = ONE
    for k in range(big):
        if z == a:
            return RootOfUnity.of(big, k)
        z = z * zeta
    return None  # pragma: no cover - a^big = 1 forces a hit


def rational_root(q, k: int) -> Optional[mpq]:
    """Nonnegative rational k-th root of q >= 0, or None if irrational."""
    q = to_rational(q)
    if q < 0:
        return None
    num, exact_n = gmpy2.iroot(q.numerator, k)
    den, exact_d = gmpy2.iroot(q.denominator, k)
    if exact_n and exact_d:
        return mpq(int(num), int(den))
    return None


def cyclotomic_root(b, k: int) -> CyclotomicScalar:
    """Some x in a cyclotomic field with x^k = b.

    Handles b = q * rho with q rational and rho a root of unity; anything else
    raises :class:`NoCyclotomicRoot`.  For rational b > 0 the positive real root
    is returned.
    """
    b = scalar(b)
    if k == 1:
        return b
    if b.is_zero():
        return ZERO
    if b.is_rational():
        q = b.to_rational()
        r = rational_root(abs(q), k)
        if r is None and k == 2:
            return rational_sqrt(q)
        if r is None:
            raise NoCyclotomicRoot(f"{q} has no rational {k}-th root")
        x = CyclotomicScalar.rational(r)
        if q < 0:
            # mu = zeta_{2k} has mu^k = -1
            x = x * primitive_root(2 * k)
        return x
    n = b.conductor
    big = lcm(n, 2)
    bb = b ** big
    if not bb.is_rational():
        raise NoCyclotomicRoot("scalar is not a rational multiple of a root of unity")
    mag = rational_root(abs(bb.to_rational()), big)
    if mag is None:
        raise NoCyclotomicRoot("modulus is not rational")
    rho = scalar_is_root_of_unity(b / mag)
    if rho is None:  # pragma: no cover - |b/mag| = 1 with b^big rational
        raise NoCyclotomicRoot("scalar is not a rational multiple of a root of unity")
    r = rational_root(mag, k)
    if r is None:
        raise NoCyclotomicRoot(f"{mag} has no rational {k}-th root")
    return RootOfUnity.of(rho.order * k, rho.exponent).value * r


def _squarefree_split(n: int) -> tuple[int, list[int]]:
    """n = square * product(primes); returns (sqrt(square), primes)."""
    root, primes, p = 1, [], 2
    while p * p <= n:
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        root *= p ** (e // 2)
        if e % 2:
            primes.append(p)
        p += 1
    if n > 1:
        primes.append(n)
    return root, primes


def _sqrt_prime(p: int) -> CyclotomicScalar:
    """sqrt(p) > 0 from a quadratic Gauss sum."""
    if p == 2:
        z8 = primitive_root(8)
        return z8 + z8 ** 7
    zeta = primitive_root(p)
    gauss = ZERO
    for a in range(1, p):
        legendre = 1 if pow(a, (p - 1) // 2, p) == 1 else -1
        gauss = gauss + zeta ** a * legendre
    # gauss^2 = p* = (-1)^((p-1)/2) p; for p = 3 mod 4 divide out sqrt(-1) = zeta_4
    return gauss if p % 4 == 1 else gauss / primitive_root(4)


def rational_sqrt(q) -> CyclotomicScalar:
    """A square root of the rational q inside some Q(zeta_n)."""
    q = to_rational(q)
    if q == 0:
        return ZERO
    num = abs(q.numerator) * q.denominator
    root, primes = _squarefree_split(int(num))
    x = CyclotomicScalar.rational(mpq(root, q.denominator))
    for p in primes:
        x = x * _sqrt_prime(p)
    if q < 0:
        x = x * primitive_root(4)
    return x
