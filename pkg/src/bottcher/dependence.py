"""Algebraic relations among truncated psi-series.

A relation is a polynomial P(X_0, ..., X_n) with X_0 standing for t.  Relations
are searched by exact linear algebra on the truncated expansions of all
monomials of bounded total degree, then re-checked on a doubled window.  A
``Found`` outcome is a certificate; ``NotFoundUpTo`` only says no relation of
degree <= B shows up in the searched window.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations_with_replacement
from math import gcd, lcm
from typing import Iterable, Mapping, Optional, Sequence, Union

from gmpy2 import mpq

from .conjugacy import TRIVIAL_TWIST, extract_power_substitution, solve_psi
from .errors import (
    InvalidTwist,
    InvalidWitness,
    ParseError,
    TwistNotFound,
    WindowInsufficient,
    ZeroRelation,
)
from .formatting import format_poly, format_relation, format_scalar
from .linalg import first_kernel_vector
from .parsing import parse_poly, parse_scalar
from .scalars import ONE, ZERO, CyclotomicScalar, RootOfUnity, scalar, scalar_is_root_of_unity
from .series import LaurentTail, MdElement, Poly, series_compose_poly, substitute_md

SAFETY_MARGIN = 8  # extra equation rows beyond the number of unknowns

Exponent = tuple[int, ...]


def grlex_key(e: Exponent):
    """Graded lex: total degree first, then lex with X_0 > X_1 > ... ."""
    return (sum(e), e)


def monomials(nvars: int, degree_bound: int) -> list[Exponent]:
    """All exponent vectors of total degree <= bound, grlex ascending."""
    out = []
    for deg in range(degree_bound + 1):
        for combo in combinations_with_replacement(range(nvars), deg):
            e = [0] * nvars
            for i in combo:
                e[i] += 1
            out.append(tuple(e))
    return sorted(out, key=grlex_key)


# ---------------------------------------------------------------------------
class Relation:
    """Sparse multivariate polynomial over cyclotomic scalars."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[Exponent, object] = ()):
        clean = {}
        for e, c in dict(terms).items():
            e = tuple(int(x) for x in e)
            if len(e) != nvars or min(e, default=0) < 0:
                raise ValueError(f"bad exponent vector {e} for {nvars} variables")
            c = scalar(c)
            if not c.is_zero():
                clean[e] = c
        self.nvars = nvars
        self.terms = clean

    @classmethod
    def variable(cls, i: int, nvars: int) -> "Relation":
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): ONE})

    @classmethod
    def constant(cls, c, nvars: int) -> "Relation":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def from_poly(cls, p: Poly, var: int, nvars: int) -> "Relation":
        """p(X_var)."""
        terms = {}
        for k, c in enumerate(p.coeffs):
            e = [0] * nvars
            e[var] = k
            terms[tuple(e)] = c
        return cls(nvars, terms)

    # -- basic properties --------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def sorted_exponents(self, reverse: bool = False) -> list[Exponent]:
        return sorted(self.terms, key=grlex_key, reverse=reverse)

    def leading_exponent(self) -> Exponent:
        if not self.terms:
            raise ZeroRelation("the zero polynomial has no leading term")
        return max(self.terms, key=grlex_key)

    def leading_coefficient(self) -> CyclotomicScalar:
        return self.terms[self.leading_exponent()]

    def is_rational(self) -> bool:
        return all(c.is_rational() for c in self.terms.values())

    def variables(self) -> set[int]:
        return {i for e in self.terms for i, x in enumerate(e) if x}

    def normalized(self) -> "Relation":
        """Scale to a canonical representative.

        Rational relations become coprime integers with positive leading
        coefficient; others are made monic (and then integer-normalized if
        that leaves them rational).
        """
        if not self.terms:
            return self
        rel = self
        if not rel.is_rational():
            inv = rel.leading_coefficient().inverse()
            rel = Relation(self.nvars, {e: c * inv for e, c in rel.terms.items()})
            if not rel.is_rational():
                return rel
        qs = {e: c.to_rational() for e, c in rel.terms.items()}
        den = lcm(*[int(q.denominator) for q in qs.values()])
        nums = {e: int(q * den) for e, q in qs.items()}
        g = 0
        for v in nums.values():
            g = gcd(g, v)
        lead = nums[max(nums, key=grlex_key)]
        if lead < 0:
            g = -g
        return Relation(self.nvars, {e: mpq(v, g) for e, v in nums.items()})

    # -- arithmetic --------------------------------------------------------
    def _check(self, other: "Relation"):
        if other.nvars != self.nvars:
            raise ValueError("relations in different numbers of variables")

    def __add__(self, other):
        if not isinstance(other, Relation):
            other = Relation.constant(other, self.nvars)
        self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, ZERO) + c
        return Relation(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return Relation(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, Relation):
            other = Relation.constant(other, self.nvars)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Relation):
            c = scalar(other)
            return Relation(self.nvars, {e: v * c for e, v in self.terms.items()})
        self._check(other)
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, ZERO) + c1 * c2
        return Relation(self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Relation":
        if k < 0:
            raise ValueError("negative power of a relation")
        out, base = Relation.constant(ONE, self.nvars), self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def __eq__(self, other):
        if not isinstance(other, Relation):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def equivalent(self, other: "Relation") -> bool:
        """Equal up to a nonzero scalar."""
        return self.normalized() == other.normalized()

    # -- substitution and division -----------------------------------------
    def substitute(self, images: Sequence["Relation"]) -> "Relation":
        """P(images[0], ..., images[n]) for images in a common ring."""
        if len(images) != self.nvars:
            raise ValueError("need one image per variable")
        target = images[0].nvars
        powers = [{0: Relation.constant(ONE, target)} for _ in images]

        def power(i, k):
            cache = powers[i]
            top = max(cache)
            while top < k:
                cache[top + 1] = cache[top] * images[i]
                top += 1
            return cache[k]

        out = Relation(target)
        for e, c in self.terms.items():
            mono = Relation.constant(c, target)
            for i, k in enumerate(e):
                if k:
                    mono = mono * power(i, k)
            out = out + mono
        return out

    def divmod(self, divisor: "Relation") -> tuple["Relation", "Relation"]:
        """Division by one polynomial w.r.t. grlex leading terms."""
        self._check(divisor)
        lt = divisor.leading_exponent()
        lc = divisor.terms[lt]
        p = dict(self.terms)
        q, r = {}, {}
        while p:
            e = max(p, key=grlex_key)
            c = p[e]
            if all(a >= b for a, b in zip(e, lt)):
                shift = tuple(a - b for a, b in zip(e, lt))
                coef = c / lc
                q[shift] = q.get(shift, ZERO) + coef
                for de, dc in divisor.terms.items():
                    k = tuple(a + b for a, b in zip(de, shift))
                    v = p.get(k, ZERO) - coef * dc
                    if v.is_zero():
                        p.pop(k, None)
                    else:
                        p[k] = v
            else:
                r[e] = c
                del p[e]
        return Relation(self.nvars, q), Relation(self.nvars, r)

    def graph_form(self) -> Optional[tuple[int, int, Poly]]:
        """(i, j, Q) when the relation is a multiple of X_i - Q(X_j), i, j >= 1."""
        vs = self.variables()
        if len(vs) != 2 or 0 in vs:
            return None
        a, b = sorted(vs)
        for i, j in ((a, b), (b, a)):
            unit = tuple(1 if k == i else 0 for k in range(self.nvars))
            if unit not in self.terms:
                continue
            if any(e[i] and e != unit for e in self.terms):
                continue
            c = self.terms[unit]
            coeffs = {}
            for e, v in self.terms.items():
                if e != unit:
                    coeffs[e[j]] = -v / c
            q = Poly([coeffs.get(k, ZERO) for k in range(max(coeffs, default=0) + 1)])
            if q.degree >= 1:
                return i, j, q
        return None

    # -- evaluation --------------------------------------------------------
    def evaluate(self, series: Sequence[LaurentTail]) -> LaurentTail:
        """P(t, s_1, ..., s_n) with precision tracked exactly."""
        if len(series) + 1 != self.nvars:
            raise ValueError(f"relation has {self.nvars} variables, got {len(series)} series")
        expansions = _monomial_expansions(list(self.terms), series)
        return _combine(expansions, [self.terms[e] for e in self.terms])

    def __str__(self):
        return format_relation(self) if self.terms else "0"

    def __repr__(self):
        return f"Relation({self.nvars}, {str(self)!r})"


def _monomial_expansions(exps: Sequence[Exponent], series: Sequence[LaurentTail]):
    """LaurentTail for each monomial; pure X_0 powers come back as ints."""
    powers = [{1: s} for s in series]

    def power(i, k):
        cache = powers[i]
        if k not in cache:
            top = max(j for j in cache if j <= k)
            cur = cache[top]
            while top < k:
                cur = cur * series[i]
                top += 1
                cache[top] = cur
        return cache[k]

    out = []
    for e in exps:
        acc = None
        for i, k in enumerate(e[1:]):
            if k:
                p = power(i, k)
                acc = p if acc is None else acc * p
        out.append(e[0] if acc is None else acc.shift(e[0]))
    return out


def _exact_floor(expansions) -> int:
    """A precision usable for exact monomials t^k alongside the given tails."""
    precs = [x.prec for x in expansions if isinstance(x, LaurentTail)]
    tops = [x for x in expansions if isinstance(x, int)]
    return min(precs + [min(tops, default=0) - 1])


def _as_tail(x, floor: int) -> LaurentTail:
    if isinstance(x, LaurentTail):
        return x
    return LaurentTail.from_terms({x: ONE}, floor)


def _combine(expansions, coeffs) -> LaurentTail:
    floor = _exact_floor(expansions)
    acc = LaurentTail.zero(floor)
    for x, c in zip(expansions, coeffs):
        acc = acc + _as_tail(x, floor) * c
    return acc


# ---------------------------------------------------------------------------
@lru_cache(maxsize=128)
def _psi_tail(f: Poly, window: int) -> LaurentTail:
    return solve_psi(f, window).tail


_PSI_RE = re.compile(r"^\s*psi\s*\((.*)\)\s*(?:\[\s*@\s*(.+?)\s*,\s*(\d+)\s*\])?\s*$")


@dataclass(frozen=True)
class PsiTerm:
    """The series psi_f(zeta * t^m), materialized on demand.

    ``at(N)`` solves psi_f to N coefficients before substituting, so the
    result is exact above m * (1 - N).
    """

    f: Poly
    zeta: RootOfUnity = TRIVIAL_TWIST
    m: int = 1

    def __post_init__(self):
        MdElement(self.zeta, self.m, self.f.degree)  # validates

    def at(self, window: int) -> LaurentTail:
        tail = _psi_tail(self.f, window)
        if self.zeta == TRIVIAL_TWIST and self.m == 1:
            return tail
        return substitute_md(tail, MdElement(self.zeta, self.m, self.f.degree))

    @classmethod
    def parse(cls, src: str) -> "PsiTerm":
        m = _PSI_RE.match(src)
        if not m:
            raise ParseError("expected psi(FPOLY) or psi(FPOLY)[@ zeta(n)^k, m]", 0, ["'psi('"])
        f = parse_poly(m.group(1))
        if f.degree < 2:
            raise ParseError("psi needs a polynomial of degree >= 2", m.start(1), ["polynomial of degree >= 2"])
        if m.group(2) is None:
            return cls(f)
        z = scalar_is_root_of_unity(parse_scalar(m.group(2)))
        if z is None:
            raise ParseError("twist is not a root of unity", m.start(2), ["root of unity"])
        return cls(f, z, int(m.group(3)))

    def __str__(self):
        base = f"psi({format_poly(self.f)})"
        if self.zeta == TRIVIAL_TWIST and self.m == 1:
            return base
        return f"{base}[@ {self.zeta}, {self.m}]"


SeriesSource = Union[LaurentTail, PsiTerm]


def _materialize(series: Sequence[SeriesSource], window: int) -> list[LaurentTail]:
    out = []
    for s in series:
        if isinstance(s, PsiTerm):
            out.append(s.at(window))
        elif isinstance(s, LaurentTail):
            if s.window < window:
                raise WindowInsufficient(f"series has window {s.window}, {window} required")
            out.append(s.truncate(window=window) if s.window > window else s)
        else:
            raise TypeError(f"unsupported series source {type(s).__name__}")
    return out


@dataclass(frozen=True)
class Found:
    relation: Relation
    verified_window: int

    found = True


@dataclass(frozen=True)
class NotFoundUpTo:
    degree_bound: int
    window: int

    found = False


DependenceReport = Union[Found, NotFoundUpTo]


def relation_matrix(series: Sequence[LaurentTail], degree_bound: int):
    """(monomials, exponent rows, matrix) of the linear system for a relation."""
    nvars = len(series) + 1
    exps = monomials(nvars, degree_bound)
    expansions = _monomial_expansions(exps, series)
    floor = _exact_floor(expansions)
    tails = [_as_tail(x, floor) for x in expansions]
    prec = max(x.prec for x in tails if isinstance(x, LaurentTail))
    top = max(x._val() for x in tails)
    rows = list(range(top, prec, -1))
    matrix = [[x.coeff(k) for x in tails] for k in rows]
    return exps, rows, matrix


def find_relation(series: Sequence[SeriesSource], degree_bound: int, window: int) -> DependenceReport:
    """Search for P of total degree <= B with P(t, s_1, ..., s_n) = 0.

    Columns (monomials) are ordered grlex ascending and the kernel vector is
    attached to the first dependent column, so the candidate has the least
    possible leading monomial (hence least total degree).  The candidate is
    re-verified at window 2N before being reported.
    """
    if degree_bound < 1:
        raise ValueError("degree bound must be >= 1")
    if window < 2:
        raise WindowInsufficient("window must be >= 2")
    short = _materialize(series, window)
    exps, rows, matrix = relation_matrix(short, degree_bound)
    if len(rows) < len(exps) + SAFETY_MARGIN:
        raise WindowInsufficient(
            f"{len(rows)} equations for {len(exps)} monomials; need {len(exps) + SAFETY_MARGIN}"
        )
    vec = first_kernel_vector(matrix)
    if vec is None:
        return NotFoundUpTo(degree_bound, window)
    rel = Relation(len(series) + 1, dict(zip(exps, vec))).normalized()
    check = 2 * window
    residual = rel.evaluate(_materialize(series, check))
    if not residual.is_zero():
        raise WindowInsufficient(
            f"candidate {rel} fails at window {check} (t^{residual.valuation()}); increase the window"
        )
    return Found(rel, check)


def residual(rel: Relation, series: Sequence[SeriesSource], window: int) -> LaurentTail:
    if rel.is_zero():
        raise ZeroRelation("zero relation")
    return rel.evaluate(_materialize(series, window))


def verify_relation(rel: Relation, series: Sequence[SeriesSource], window: int) -> int:
    """Largest v with P(t, s_1, ...) = O(t^v) as far as the data determine.

    This is the valuation of the residual when it is nonzero; when every
    retained coefficient vanishes it is the truncation exponent itself,
    which is the certified case (see :func:`is_certified`).
    """
    return residual(rel, series, window)._val()


def is_certified(rel: Relation, series: Sequence[SeriesSource], window: int) -> bool:
    return residual(rel, series, window).is_zero()


def check_invariance(rel: Relation, base_degree: int, maps: Sequence[Poly]) -> bool:
    """Does P divide P(X_0^d, f_1(X_1), ..., f_n(X_n))?"""
    if rel.nvars != len(maps) + 1:
        raise ValueError("need one map per series variable")
    if rel.is_zero():
        raise ZeroRelation("zero relation")
    n = rel.nvars
    images = [Relation.variable(0, n) ** base_degree]
    images += [Relation.from_poly(f, i + 1, n) for i, f in enumerate(maps)]
    _, rem = rel.substitute(images).divmod(rel)
    return rem.is_zero()


def semiconj_verify(f: Poly, pi: Poly, h: Poly) -> bool:
    """f o pi == pi o h exactly."""
    if pi.degree < 1:
        raise ValueError("pi must be non-constant")
    return f.compose(pi) == pi.compose(h)


# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class SemiconjWitness:
    f: Poly
    pi: Poly
    h: Poly
    iterate: int = 1

    def validate(self) -> "SemiconjWitness":
        if self.iterate < 1:
            raise InvalidWitness("iterate must be positive")
        if self.pi.degree < 1:
            raise InvalidWitness("pi must be non-constant")
        if self.f.degree < 2:
            raise InvalidWitness("f must have degree >= 2")
        if not semiconj_verify(self.f.iterate(self.iterate), self.pi, self.h):
            raise InvalidWitness("f^n o pi != pi o h")
        return self


@dataclass
class Certificate:
    """A relation together with the series it vanishes on."""

    relation: Relation
    series: list = field(default_factory=list)
    window: int = 64
    residual_valuation: Optional[int] = None

    def verify(self, window: Optional[int] = None) -> bool:
        w = self.window if window is None else window
        res = residual(self.relation, self.series, w)
        if window is None:
            self.residual_valuation = res._val()
        return res.is_zero()

    def to_text(self) -> str:
        rel = self.relation
        lines = [
            f"nvars {rel.nvars}",
            f"degree {rel.total_degree}",
            f"window {self.window}",
        ]
        lines += [f"series {s}" for s in self.series]
        for e in rel.sorted_exponents(reverse=True):
            lines.append(" ".join(map(str, e)) + " : " + format_scalar(rel.terms[e]))
        if self.residual_valuation is None:
            self.verify()
        lines.append(f"residual_valuation {self.residual_valuation}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Certificate":
        header, series, terms, resval = {}, [], {}, None
        offset = 0
        for line in text.splitlines(keepends=True):
            body = line.strip()
            start = offset
            offset += len(line.encode())
            if not body or body.startswith("#"):
                continue
            if ":" in body and not body.startswith("series"):
                lhs, rhs = body.split(":", 1)
                try:
                    e = tuple(int(x) for x in lhs.split())
                except ValueError:
                    raise ParseError("bad exponent vector", start, ["integers"]) from None
                terms[e] = parse_scalar(rhs)
                continue
            key, _, rest = body.partition(" ")
            if key in ("nvars", "degree", "window"):
                header[key] = int(rest)
            elif key == "series":
                series.append(PsiTerm.parse(rest))
            elif key == "residual_valuation":
                resval = int(rest)
            else:
                raise ParseError(f"unknown certificate line {key!r}", start,
                                 ["nvars", "degree", "window", "series", "term", "residual_valuation"])
        for key in ("nvars", "window"):
            if key not in header:
                raise ParseError(f"certificate lacks '{key}'", offset, [key])
        try:
            rel = Relation(header["nvars"], terms)
        except ValueError as exc:
            raise ParseError(str(exc), 0, ["exponent vectors of length nvars"]) from None
        if "degree" in header and header["degree"] != rel.total_degree:
            raise ParseError("declared degree disagrees with the terms", 0, ["consistent degree"])
        if len(series) + 1 != rel.nvars:
            raise ParseError("series count disagrees with nvars", 0, ["nvars - 1 series lines"])
        return cls(rel, series, header["window"], resval)


def witness_relation(w: SemiconjWitness, window: int = 64) -> Certificate:
    """Certificate for psi_(f^n)(t^deg pi) = pi(psi_h(t)).

    psi_(f^n) is read off L = pi(psi_h) by removing the power t^D, D = deg pi;
    it is one of the twists psi_f(zeta t), zeta^(delta - 1) = 1 with
    delta = deg f^n, and the matching twist is found by comparison.
    """
    w.validate()
    F = w.f.iterate(w.iterate)
    delta, D = F.degree, w.pi.degree
    psi_h = _psi_tail(w.h, window)
    L = series_compose_poly(w.pi, psi_h)
    psi_F = extract_power_substitution(L, D, F).tail
    base = _psi_tail(w.f, window)
    zeta = None
    for k in range(delta - 1):
        z = RootOfUnity.of(delta - 1, k)
        if substitute_md(base, MdElement(z, 1, w.f.degree)).agrees_with(psi_F):
            zeta = z
            break
    if zeta is None:
        raise TwistNotFound(f"no ({delta - 1})-th root of unity twist matches")
    rel = Relation.variable(1, 3) - Relation.from_poly(w.pi, 2, 3)
    cert = Certificate(rel, [PsiTerm(w.f, zeta, D), PsiTerm(w.h)], window)
    if not cert.verify():
        raise TwistNotFound("matched twist does not certify the relation")  # pragma: no cover
    return cert


# ---------------------------------------------------------------------------
def _monic_semiconj(c, ct, k: int) -> Optional[Poly]:
    """The monic pi of degree k with f_c o pi = pi o f_ct, if any.

    The coefficient of t^(2k-j) in pi^2 + c - pi(t^2 + ct) involves p_(k-j)
    only through 2 p_k p_(k-j) = 2 p_(k-j), and otherwise only p_i with i > k - j;
    so each coefficient is solved in turn and the rest is checked.
    """
    f_h = Poly([ct, 0, 1])
    p = [ZERO] * k + [ONE]
    for j in range(1, k + 1):
        i = k - j
        trial = Poly(p)
        diff = trial * trial + c - trial.compose(f_h)
        p[i] = -diff.coeff(2 * k - j) / 2
    pi = Poly(p)
    if pi * pi + c == pi.compose(f_h):
        return pi
    return None


def _is_trivial(pi: Poly, c) -> bool:
    """pi is an iterate f_c^n (n >= 0) of f_c = t^2 + c."""
    f = Poly([c, 0, 1])
    cur = Poly([0, 1])
    while cur.degree <= pi.degree:
        if cur == pi:
            return True
        cur = f.compose(cur)
    return False


def quadratic_semiconj_all(c, c_tilde, degree_bound: int) -> list[Poly]:
    """Every monic pi of degree <= B with (t^2 + c) o pi = pi o (t^2 + c_tilde).

    Only monic pi need searching: the leading coefficients force p_k^2 = p_k.
    """
    if degree_bound < 1:
        raise ValueError("degree bound must be >= 1")
    c, ct = scalar(c), scalar(c_tilde)
    out = []
    for k in range(1, degree_bound + 1):
        pi = _monic_semiconj(c, ct, k)
        if pi is not None:
            out.append(pi)
    return out


def quadratic_semiconj_search(c, c_tilde, degree_bound: int, nontrivial: bool = False) -> Optional[Poly]:
    """Lowest-degree semi-conjugacy pi from t^2 + c_tilde to t^2 + c, or None.

    With ``nontrivial`` the identity and the iterates of t^2 + c are skipped.
    """
    for pi in quadratic_semiconj_all(c, c_tilde, degree_bound):
        if nontrivial and scalar(c) == scalar(c_tilde) and _is_trivial(pi, scalar(c)):
            continue
        return pi
    return None


def md_twist_ok(zeta: RootOfUnity, d: int) -> bool:
    try:
        MdElement(zeta, 1, d)
    except InvalidTwist:
        return False
    return True


__all__ = [
    "Certificate",
    "DependenceReport",
    "Found",
    "NotFoundUpTo",
    "PsiTerm",
    "Relation",
    "SemiconjWitness",
    "check_invariance",
    "find_relation",
    "grlex_key",
    "is_certified",
    "monomials",
    "quadratic_semiconj_all",
    "quadratic_semiconj_search",
    "relation_matrix",
    "residual",
    "semiconj_verify",
    "verify_relation",
    "witness_relation",
]
