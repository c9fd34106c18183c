"""Text rendering for scalars, polynomials, series and relations.

Every rendering reparses (see :mod:`bottcher.parsing`) to an equal value.
"""
from __future__ import annotations

from gmpy2 import mpq


def _rational_str(q: mpq) -> str:
    return str(q)


def format_scalar(a) -> str:
    a = a.minimized()
    if a.conductor == 1:
        return _rational_str(a.coords[0])
    pieces = []
    for i, c in enumerate(a.coords):
        if not c:
            continue
        if i == 0:
            mono = None
        elif i == 1:
            mono = f"zeta({a.conductor})"
        else:
            mono = f"zeta({a.conductor})^{i}"
        pieces.append((c, mono))
    return _join(pieces)


def _join(pieces) -> str:
    """Join (coefficient, monomial-or-None) pairs into ``a + b*m - ...``."""
    if not pieces:
        return "0"
    out = []
    for idx, (c, mono) in enumerate(pieces):
        if isinstance(c, mpq):
            neg = c < 0
            mag = -c if neg else c
            if mono is None:
                body = _rational_str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{_rational_str(mag)}*{mono}"
        else:
            neg = False
            body = f"({c})" if mono is None else f"({c})*{mono}"
        if idx == 0:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out)


def _coeff_key(c):
    """mpq if the coefficient is rational (so signs print inline), else the scalar."""
    m = c.minimized()
    return m.coords[0] if m.conductor == 1 else m


def _t_power(k: int):
    if k == 0:
        return None
    if k == 1:
        return "t"
    return f"t^{k}"


def format_poly(p) -> str:
    pieces = [(_coeff_key(c), _t_power(k)) for k, c in reversed(list(enumerate(p.coeffs))) if c]
    return _join(pieces)


def format_series(s) -> str:
    pieces = [(_coeff_key(c), _t_power(k)) for k, c in sorted(s.terms().items(), reverse=True)]
    oterm = f"O(t^{s.prec})" if s.prec != 1 else "O(t)"
    if s.prec == 0:
        oterm = "O(1)"
    if not pieces:
        return oterm
    return _join(pieces) + " + " + oterm


def format_monomial(exps) -> str | None:
    parts = []
    for i, e in enumerate(exps):
        if e == 1:
            parts.append(f"X{i}")
        elif e > 1:
            parts.append(f"X{i}^{e}")
    return "*".join(parts) if parts else None


def format_relation(rel) -> str:
    pieces = [(_coeff_key(rel.terms[e]), format_monomial(e)) for e in rel.sorted_exponents(reverse=True)]
    return _join(pieces)
