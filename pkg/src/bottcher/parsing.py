"""Recursive-descent parser for scalar, polynomial and series literals.

Grammar (whitespace insensitive)::

    expr   := sign? term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := base ('^' uint)?            # '^' '-'? uint in series mode
    base   := rational | 'zeta(' uint ')' | 't' | '(' expr ')'
    rational := uint ('/' uint)?

Series literals end with an order term ``+ O(t^k)``.  Division is only by
constants.  Errors carry the byte offset and the set of expected tokens.
"""
from __future__ import annotations

import re

from gmpy2 import mpq

from .errors import ParseError
from .scalars import ONE, ZERO, CyclotomicScalar, get_conductor_cap, primitive_root

_TOKEN = re.compile(r"\s*(?:(\d+)|(zeta)|(O)|(t)|(.))")

# Laurent polynomials during parsing: {exponent: CyclotomicScalar}


def _lp_add(a, b, sign=1):
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, ZERO) + (v if sign > 0 else -v)
    return {k: v for k, v in out.items() if not v.is_zero()}


def _lp_mul(a, b):
    out = {}
    for i, x in a.items():
        for j, y in b.items():
            out[i + j] = out.get(i + j, ZERO) + x * y
    return {k: v for k, v in out.items() if not v.is_zero()}


def _lp_pow(a, k):
    out = {0: ONE}
    for _ in range(k):
        out = _lp_mul(out, a)
    return out


class _Parser:
    def __init__(self, src: str, allow_t: bool, series: bool):
        self.src = src
        self.allow_t = allow_t
        self.series = series
        self.pos = 0
        self.order_term = None

    # -- tokens -------------------------------------------------------------
    def _peek(self):
        m = _TOKEN.match(self.src, self.pos)
        if not m or m.end() == m.start() and self.pos >= len(self.src):
            return None, len(self.src)
        start = m.start(m.lastindex) if m.lastindex else len(self.src)
        if m.group(1) is not None:
            return ("int", m.group(1)), start
        if m.group(2):
            return ("zeta", "zeta"), start
        if m.group(3):
            return ("O", "O"), start
        if m.group(4):
            return ("t", "t"), start
        return ("op", m.group(5)), start

    def _next(self):
        tok, start = self._peek()
        if tok is None:
            return None, start
        m = _TOKEN.match(self.src, self.pos)
        self.pos = m.end()
        return tok, start

    def _at_end(self):
        return self.src[self.pos:].strip() == ""

    def _expect_op(self, ch):
        tok, start = self._next()
        if tok != ("op", ch):
            raise ParseError(f"unexpected {self._describe(tok)}", start, [f"'{ch}'"])

    def _describe(self, tok):
        return "end of input" if tok is None else f"'{tok[1]}'"

    def _uint(self):
        tok, start = self._next()
        if tok is None or tok[0] != "int":
            raise ParseError(f"unexpected {self._describe(tok)}", start, ["unsigned integer"])
        return int(tok[1])

    # -- grammar ------------------------------------------------------------
    def parse(self):
        value = self.expr()
        if not self._at_end():
            tok, start = self._peek()
            expected = ["'+'", "'-'", "'*'", "'/'", "'^'"]
            raise ParseError(f"unexpected {self._describe(tok)}", start, expected)
        return value

    def expr(self):
        tok, _ = self._peek()
        if self.series and tok == ("O", "O") and self.order_term is None:
            self.order_term = self._order_term()
            return {}
        sign = 1
        if tok in (("op", "-"), ("op", "+")):
            self._next()
            sign = -1 if tok[1] == "-" else 1
        value = self.term()
        if sign < 0:
            value = {k: -v for k, v in value.items()}
        while True:
            tok, _ = self._peek()
            if tok not in (("op", "+"), ("op", "-")):
                return value
            self._next()
            if self.series and tok[1] == "+" and self._peek()[0] == ("O", "O"):
                self.order_term = self._order_term()
                return value
            value = _lp_add(value, self.term(), 1 if tok[1] == "+" else -1)

    def _order_term(self):
        _, start = self._next()
        self._expect_op("(")
        tok, tstart = self._next()
        if tok == ("int", "1"):
            k = 0
        elif tok == ("t", "t"):
            k = 1
            if self._peek()[0] == ("op", "^"):
                self._next()
                k = self._signed_int()
        else:
            raise ParseError(f"unexpected {self._describe(tok)}", tstart, ["'t'", "'1'"])
        self._expect_op(")")
        if not self._at_end():
            raise ParseError("order term must come last", self._peek()[1], ["end of input"])
        return k

    def _signed_int(self):
        tok, _ = self._peek()
        if tok == ("op", "-"):
            self._next()
            return -self._uint()
        return self._uint()

    def term(self):
        value = self.factor()
        while True:
            tok, start = self._peek()
            if tok == ("op", "*"):
                self._next()
                value = _lp_mul(value, self.factor())
            elif tok == ("op", "/"):
                self._next()
                den_start = self._peek()[1]
                den = self.factor()
                if set(den) - {0} or not den:
                    raise ParseError("division by a non-constant or zero", den_start, ["nonzero constant"])
                inv = den[0].inverse()
                value = {k: v * inv for k, v in value.items()}
            else:
                return value

    def factor(self):
        base, base_start = self.base()
        tok, _ = self._peek()
        if tok != ("op", "^"):
            return base
        self._next()
        if self.series:
            k = self._signed_int()
        else:
            k = self._uint()
        if k < 0:
            if len(base) != 1:
                raise ParseError("negative power of a non-monomial", base_start, ["monomial base"])
            (e, c), = base.items()
            return {e * k: c.inverse() ** (-k)}
        return _lp_pow(base, k)

    def base(self):
        tok, start = self._next()
        if tok is None:
            raise ParseError("unexpected end of input", start, self._base_expected())
        kind, text = tok
        if kind == "int":
            num = int(text)
            nxt, _ = self._peek()
            # a '/' directly followed by an integer binds as a rational literal
            if nxt == ("op", "/"):
                save = self.pos
                self._next()
                t2, _ = self._peek()
                if t2 is not None and t2[0] == "int":
                    den = self._uint()
                    if den == 0:
                        raise ParseError("zero denominator", start, ["positive integer"])
                    return {0: CyclotomicScalar.rational(mpq(num, den))}, start
                self.pos = save
            return ({0: CyclotomicScalar.rational(num)} if num else {}), start
        if kind == "zeta":
            self._expect_op("(")
            n_start = self._peek()[1]
            n = self._uint()
            if n < 1 or n > get_conductor_cap():
                raise ParseError(f"zeta order {n} outside 1..{get_conductor_cap()}", n_start, ["valid order"])
            self._expect_op(")")
            return {0: primitive_root(n)}, start
        if kind == "t" and self.allow_t:
            return {1: ONE}, start
        if tok == ("op", "("):
            value = self.expr()
            self._expect_op(")")
            return value, start
        raise ParseError(f"unexpected {self._describe(tok)}", start, self._base_expected())

    def _base_expected(self):
        exp = ["integer", "'zeta('", "'('"]
        if self.allow_t:
            exp.append("'t'")
        return exp


def parse_scalar(src: str) -> CyclotomicScalar:
    value = _Parser(src, allow_t=False, series=False).parse()
    return value.get(0, ZERO)


def parse_poly(src: str):
    """Parse a polynomial in t, e.g. ``"t^2 - 2"`` or ``"3*t^5 + 1/2"``."""
    from .series import Poly

    value = _Parser(src, allow_t=True, series=False).parse()
    deg = max(value, default=-1)
    coeffs = [value.get(k, ZERO) for k in range(deg + 1)]
    return Poly(coeffs)


def parse_series(src: str):
    """Parse ``"t - 1/2*t^-1 + O(t^-3)"`` into a LaurentTail."""
    from .series import LaurentTail

    p = _Parser(src, allow_t=True, series=True)
    value = p.parse()
    if p.order_term is None:
        raise ParseError("series literal needs an order term", len(src), ["'+ O(t^k)'"])
    bad = [k for k in value if k <= p.order_term]
    if bad:
        raise ParseError(f"term t^{max(bad)} lies inside O(t^{p.order_term})", 0, ["higher exponents"])
    return LaurentTail.from_terms(value, p.order_term)
