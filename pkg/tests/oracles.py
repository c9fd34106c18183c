"""Reference computations that share no code with the package.

Laurent polynomials here are plain ``{exponent: Fraction}`` dicts, truncated
below a floor exponent.  Everything is deliberately naive.
"""
from __future__ import annotations

from fractions import Fraction


def lp_trim(a: dict, floor: int) -> dict:
    return {k: v for k, v in a.items() if v != 0 and k >= floor}


def lp_add(a: dict, b: dict, floor: int) -> dict:
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, 0) + v
    return lp_trim(out, floor)


def lp_scale(a: dict, c) -> dict:
    return {k: v * c for k, v in a.items() if v * c != 0}


def lp_mul(a: dict, b: dict, floor: int) -> dict:
    out: dict = {}
    for i, x in a.items():
        for j, y in b.items():
            if i + j >= floor:
                out[i + j] = out.get(i + j, 0) + x * y
    return lp_trim(out, floor)


def lp_pow(a: dict, k: int, floor: int) -> dict:
    out = {0: Fraction(1)}
    for _ in range(k):
        out = lp_mul(out, a, floor)
    return out


def lp_poly_eval(coeffs: list, s: dict, floor: int) -> dict:
    """sum_i coeffs[i] * s^i (coeffs low to high)."""
    out: dict = {}
    for i, c in enumerate(coeffs):
        if c:
            out = lp_add(out, lp_scale(lp_pow(s, i, floor), Fraction(c)), floor)
    return out


def psi_by_matching(coeffs: list, nterms: int) -> dict:
    """psi for a monic f, found coefficient by coefficient by trial substitution.

    For each unknown c_m the residual coefficient at t^(d-m) is affine in c_m;
    it is evaluated at c_m = 0 and c_m = 1 and the root taken.
    """
    coeffs = [Fraction(c) for c in coeffs]
    d = len(coeffs) - 1
    assert coeffs[-1] == 1, "oracle handles monic f only"
    psi = {1: Fraction(1)}
    for m in range(1, nterms):
        k = 1 - m  # exponent of the unknown
        floor = d * k - 2 * d  # generous margin below the matched exponent
        target = d - m

        def residual_at(c):
            trial = dict(psi)
            trial[k] = Fraction(c)
            lhs = {e * d: v for e, v in trial.items()}
            rhs = lp_poly_eval(coeffs, trial, floor)
            return lhs.get(target, 0) - rhs.get(target, 0)

        r0, r1 = residual_at(0), residual_at(1)
        c = -r0 / (r1 - r0)
        if c:
            psi[k] = c
    return psi


def lp_inverse(a: dict, floor: int) -> dict:
    """1/a for a with a single leading term, by repeated correction."""
    top = max(a)
    lead = a[top]
    rest = {k - top: v / lead for k, v in a.items() if k != top}  # a = lead t^top (1 + rest)
    # 1/(1+x) = sum (-x)^j, x has negative exponents only
    inv: dict = {0: Fraction(1)}
    term = {0: Fraction(1)}
    neg = lp_scale(rest, -1)
    for _ in range(top - floor + 2):
        term = lp_mul(term, neg, floor + top)
        if not term:
            break
        inv = lp_add(inv, term, floor + top)
    return lp_trim({k - top: v / lead for k, v in inv.items()}, floor)


def lp_compose_laurent(psi: dict, phi: dict, floor: int) -> dict:
    """psi(phi(t)) for psi with exponents <= 1 and phi = a t + ... ."""
    out: dict = {}
    for k in (1, 0):
        if psi.get(k):
            out = lp_add(out, lp_scale(lp_pow(phi, k, floor), psi[k]), floor)
    inv = lp_inverse(phi, floor)
    p = {0: Fraction(1)}
    for k in range(-1, min(psi) - 1, -1):
        p = lp_mul(p, inv, floor)
        if psi.get(k):
            out = lp_add(out, lp_scale(p, psi[k]), floor)
    return out


def reversion_by_fixed_point(psi: dict, nterms: int) -> dict:
    """phi with psi(phi(t)) = t for psi = a t + ..., via phi <- phi + (t - psi(phi)) / a.

    Each sweep fixes at least one more coefficient, so nterms + 2 sweeps suffice.
    """
    a = psi[1]
    floor = 2 - nterms
    phi = {1: 1 / a}
    for _ in range(nterms + 2):
        err = lp_add({1: Fraction(1)}, lp_scale(lp_compose_laurent(psi, phi, floor), -1), floor)
        if not err:
            break
        phi = lp_add(phi, lp_scale(err, 1 / a), floor)
    return phi


def catalan(n: int) -> int:
    c = 1
    for k in range(n):
        c = c * 2 * (2 * k + 1) // (k + 2)
    return c


def chebyshev_by_expansion(d: int) -> list:
    """Coefficients (low to high) of C_d solved from C_d(t + 1/t) = t^d + t^-d.

    Peels the top power of (t + 1/t) off t^d + t^-d repeatedly.
    """
    target = {d: Fraction(1), -d: Fraction(1)} if d else {0: Fraction(2)}
    coeffs = [Fraction(0)] * (d + 1)
    x = {1: Fraction(1), -1: Fraction(1)}
    while target:
        k = max(target)
        c = target[k]
        coeffs[k] = c
        target = lp_add(target, lp_scale(lp_pow(x, k, -d - 1), -c), -d - 1)
    return coeffs


def cyclotomic_mod_mul_q6(a: tuple, b: tuple) -> tuple:
    """Multiply x0 + x1 z in Q(zeta_6) using z^2 = z - 1 (Phi_6 = z^2 - z + 1)."""
    a0, a1 = a
    b0, b1 = b
    # (a0 + a1 z)(b0 + b1 z) = a0 b0 + (a0 b1 + a1 b0) z + a1 b1 z^2
    c2 = a1 * b1
    return (a0 * b0 - c2, a0 * b1 + a1 * b0 + c2)
