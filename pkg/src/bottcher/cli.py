"""Command-line front end.

Exit status: 0 on success, 1 on a domain error (the error class name is
printed verbatim), 2 on usage errors including unparsable literals.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from typing import Optional, Sequence

from . import conjugacy, dependence, heights
from .errors import DynamicsError, ParseError, VerificationFailed
from .parsing import parse_poly, parse_scalar, parse_series
from .scalars import DEFAULT_CONDUCTOR_CAP, get_conductor_cap, scalar_is_root_of_unity, set_conductor_cap
from .series import reversion

MIN_WINDOW = 2
MAX_DIGITS = 5000


@dataclass(frozen=True)
class CommandConfig:
    window: int = 64
    degree: int = 3
    digits: int = 30
    output: str = "text"
    conductor_cap: Optional[int] = None

    def problems(self) -> list[str]:
        out = []
        if self.window < MIN_WINDOW:
            out.append(f"--window must be >= {MIN_WINDOW}")
        if self.degree < 1:
            out.append("--degree must be >= 1")
        if not 1 <= self.digits <= MAX_DIGITS:
            out.append(f"--digits must lie in 1..{MAX_DIGITS}")
        if self.conductor_cap is not None and self.conductor_cap < 1:
            out.append("--conductor-cap must be >= 1")
        return out


class _Usage(Exception):
    """Bad command-line input (exit status 2)."""


# -- JSON schemas -------------------------------------------------------------
_STR = {"type": "string"}
_INT = {"type": "integer"}
_BOOL = {"type": "boolean"}
_PREC = {
    "type": "object",
    "properties": {"value": _STR, "error_bound": _STR},
    "required": ["value", "error_bound"],
    "additionalProperties": False,
}


def _obj(props: dict, required=None) -> dict:
    return {
        "type": "object",
        "properties": props,
        "required": list(props) if required is None else required,
        "additionalProperties": False,
    }


def _nullable(schema: dict) -> dict:
    return {"anyOf": [schema, {"type": "null"}]}


SCHEMAS = {
    "psi": _obj({"series": {"type": "array", "items": _STR}, "window": _INT, "residual_checked_to": _INT}),
    "phi": _obj({"series": _STR, "window": _INT}),
    "cheb": _obj({"poly": _STR, "degree": _INT}),
    "classify": _obj({"kind": {"enum": [k.value for k in conjugacy.Kind]},
                      "witness": _nullable(_STR), "model": _nullable(_STR)}),
    "commutes": _obj({"commutes": _BOOL}),
    "common-iterate": _obj({"found": _BOOL, "m": _nullable(_INT), "n": _nullable(_INT)}),
    "relation find": _obj({"found": _BOOL, "relation": _nullable(_STR), "verified_window": _nullable(_INT),
                           "degree_bound": _INT, "window": _INT, "certificate": _nullable(_STR)}),
    "relation verify": _obj({"certified": _BOOL, "residual_valuation": _INT, "window": _INT,
                             "relation": _STR}),
    "semiconj verify": _obj({"semiconjugate": _BOOL}),
    "semiconj quad": _obj({"found": _BOOL, "pi": _nullable(_STR)}),
    "witness": _obj({"relation": _STR, "series": {"type": "array", "items": _STR}, "window": _INT,
                     "residual_valuation": _INT, "certificate": _STR}),
    "extract": _obj({"series": _STR}),
    "green": _obj({"value": _PREC, "status": {"enum": [s.value for s in heights.OrbitStatus]}}),
    "cheight": _obj({"archimedean": _PREC, "finite": {"type": "object", "additionalProperties": _PREC,
                                                      "propertyNames": {"pattern": "^[0-9]+$"}},
                     "total": _PREC, "proven_preperiodic": _BOOL}),
    "hratio": _PREC,
    "naive-height": _PREC,
    "phi-abs": _PREC,
}


# -- argument helpers ---------------------------------------------------------
def _poly(src: str):
    return parse_poly(src)


def _int(src: str) -> int:
    try:
        return int(src)
    except ValueError:
        raise _Usage(f"expected an integer, got {src!r}") from None


def _config(ns) -> CommandConfig:
    return CommandConfig(ns.window, ns.degree, ns.digits, "json" if ns.json else "text", ns.conductor_cap)


# -- commands -----------------------------------------------------------------
# each returns (text, json_payload)
def cmd_psi(ns, cfg):
    f = _poly(ns.f)
    if ns.all:
        sols = conjugacy.enumerate_psi_choices(f, cfg.window)
    elif ns.twist:
        z = scalar_is_root_of_unity(parse_scalar(ns.twist))
        if z is None:
            raise _Usage(f"--twist {ns.twist!r} is not a root of unity")
        sols = [conjugacy.solve_psi(f, cfg.window, z)]
    else:
        sols = [conjugacy.solve_psi(f, cfg.window)]
    series = [str(s.tail) for s in sols]
    return "\n".join(series), {"series": series, "window": cfg.window,
                               "residual_checked_to": sols[0].residual_checked_to}


def cmd_phi(ns, cfg):
    r = reversion(conjugacy.solve_psi(_poly(ns.f), cfg.window).tail)
    return str(r), {"series": str(r), "window": r.window}


def cmd_cheb(ns, cfg):
    d = _int(ns.d)
    if d < 1:
        raise _Usage("cheb: D must be >= 1")
    p = conjugacy.chebyshev(d)
    return str(p), {"poly": str(p), "degree": d}


def cmd_classify(ns, cfg):
    c = conjugacy.classify(_poly(ns.f), require_witness=not ns.allow_unrepresentable)
    lines = [c.kind.value]
    if c.model is not None:
        lines.append(f"model: {c.model}")
        lines.append(f"witness: {c.witness if c.witness is not None else 'not representable'}")
    return "\n".join(lines), {"kind": c.kind.value,
                              "witness": None if c.witness is None else str(c.witness),
                              "model": None if c.model is None else str(c.model)}


def cmd_commutes(ns, cfg):
    ok = conjugacy.commutes(_poly(ns.f), _poly(ns.g))
    return ("true" if ok else "false"), {"commutes": ok}


def cmd_common_iterate(ns, cfg):
    res = conjugacy.common_iterate_search(_poly(ns.f), _poly(ns.g), ns.max_degree)
    if res is None:
        return "none", {"found": False, "m": None, "n": None}
    m, n = res
    return f"m = {m}, n = {n}", {"found": True, "m": m, "n": n}


def cmd_relation_find(ns, cfg):
    terms = [dependence.PsiTerm.parse(s) for s in ns.series]
    report = dependence.find_relation(terms, cfg.degree, cfg.window)
    if isinstance(report, dependence.NotFoundUpTo):
        text = f"not found up to degree {report.degree_bound} at window {report.window}"
        return text, {"found": False, "relation": None, "verified_window": None,
                      "degree_bound": cfg.degree, "window": cfg.window, "certificate": None}
    cert = dependence.Certificate(report.relation, terms, report.verified_window)
    cert_text = cert.to_text()
    if ns.output:
        with open(ns.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(cert_text)
    text = f"found: {report.relation}\nverified_window: {report.verified_window}"
    return text, {"found": True, "relation": str(report.relation), "verified_window": report.verified_window,
                  "degree_bound": cfg.degree, "window": cfg.window, "certificate": cert_text}


def cmd_relation_verify(ns, cfg):
    with open(ns.certfile, encoding="utf-8") as fh:
        cert = dependence.Certificate.from_text(fh.read())
    window = ns.window if ns.window_given else cert.window
    res = dependence.residual(cert.relation, cert.series, window)
    ok = res.is_zero()
    payload = {"certified": ok, "residual_valuation": res._val(), "window": window, "relation": str(cert.relation)}
    if not ok:
        raise VerificationFailed(f"residual is nonzero at t^{res.valuation()} (window {window})")
    return f"certified: {cert.relation} vanishes through O(t^{res.prec}) at window {window}", payload


def cmd_semiconj_verify(ns, cfg):
    ok = dependence.semiconj_verify(_poly(ns.f), _poly(ns.pi), _poly(ns.h))
    return ("true" if ok else "false"), {"semiconjugate": ok}


def cmd_semiconj_quad(ns, cfg):
    c, ct = parse_scalar(ns.c), parse_scalar(ns.ctilde)
    if not (c.is_rational() and ct.is_rational()):
        raise _Usage("semiconj quad: C and CTILDE must be rational")
    pi = dependence.quadratic_semiconj_search(c, ct, cfg.degree, nontrivial=ns.nontrivial)
    if pi is None:
        return "none", {"found": False, "pi": None}
    return str(pi), {"found": True, "pi": str(pi)}


def cmd_witness(ns, cfg):
    n = _int(ns.n)
    w = dependence.SemiconjWitness(_poly(ns.f), _poly(ns.pi), _poly(ns.h), n)
    cert = dependence.witness_relation(w, cfg.window)
    text = cert.to_text()
    if ns.output:
        with open(ns.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    return text.rstrip("\n"), {"relation": str(cert.relation), "series": [str(s) for s in cert.series],
                               "window": cert.window, "residual_valuation": cert.residual_valuation,
                               "certificate": text}


def cmd_extract(ns, cfg):
    L = parse_series(ns.L)
    psi = conjugacy.extract_power_substitution(L, _int(ns.D), _poly(ns.f))
    return str(psi.tail), {"series": str(psi.tail)}


def _rational_arg(src: str):
    a = parse_scalar(src)
    if not a.is_rational():
        raise _Usage(f"{src!r} must be rational here")
    return a


def cmd_green(ns, cfg):
    res = heights.green_detail(_poly(ns.f), parse_scalar(ns.a), cfg.digits)
    text = str(res.value)
    if res.status is heights.OrbitStatus.BOUNDED:
        text += f"  (bounded orbit, unproven zero; error <= {res.value.to_json()['error_bound']})"
    elif res.status is heights.OrbitStatus.PREPERIODIC:
        text += "  (preperiodic: proven zero)"
    return text, {"value": res.value.to_json(), "status": res.status.value}


def cmd_cheight(ns, cfg):
    hb = heights.canonical_height(_poly(ns.f), _rational_arg(ns.a), cfg.digits)
    lines = [f"archimedean: {hb.archimedean}"]
    lines += [f"finite[{p}]: {v}" for p, v in sorted(hb.finite.items())]
    lines.append(f"total: {hb.total}")
    lines.append(f"proven_preperiodic: {'true' if hb.proven_preperiodic else 'false'}")
    return "\n".join(lines), hb.to_json()


def cmd_hratio(ns, cfg):
    r = heights.height_ratio(_poly(ns.f), _poly(ns.g), _rational_arg(ns.a), cfg.digits)
    return str(r), r.to_json()


def cmd_naive(ns, cfg):
    h = heights.naive_height(_rational_arg(ns.a), cfg.digits)
    return str(h), h.to_json()


def cmd_phi_abs(ns, cfg):
    v = heights.phi_abs(_poly(ns.f), parse_scalar(ns.a), cfg.window, cfg.digits)
    return str(v), v.to_json()


# -- parser -------------------------------------------------------------------
class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _Usage(f"{self.prog}: {message}")


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--window", type=int, default=argparse.SUPPRESS, help="series window N (default 64)")
    p.add_argument("--degree", type=int, default=argparse.SUPPRESS, help="degree bound B (default 3)")
    p.add_argument("--digits", type=int, default=argparse.SUPPRESS, help="decimal digits D (default 30)")
    p.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="JSON output")
    p.add_argument("--conductor-cap", type=int, default=argparse.SUPPRESS,
                   help=f"largest cyclotomic conductor (default {DEFAULT_CONDUCTOR_CAP}, "
                        "env BOTTCHER_CONDUCTOR_CAP)")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    top = _Parser(prog="bottcher", description="Local conjugacies, relations and heights of polynomials.",
                  parents=[common])
    sub = top.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help_, parent=sub):
        p = parent.add_parser(name, help=help_, parents=[common])
        p.set_defaults(func=func, schema=name if parent is sub else None)
        return p

    p = add("psi", cmd_psi, "local conjugacy psi_f")
    p.add_argument("f")
    p.add_argument("--twist", help="root of unity zeta with zeta^(d-1) = 1")
    p.add_argument("--all", action="store_true", help="all d-1 twists")
    add("phi", cmd_phi, "Böttcher coordinate phi_f (reversion of psi_f)").add_argument("f")
    add("cheb", cmd_cheb, "Chebyshev polynomial C_d").add_argument("d")
    p = add("classify", cmd_classify, "power map / Chebyshev / disintegrated")
    p.add_argument("f")
    p.add_argument("--allow-unrepresentable", action="store_true",
                   help="report the kind even when the linear witness is not cyclotomic")
    p = add("commutes", cmd_commutes, "does f o g = g o f")
    p.add_argument("f")
    p.add_argument("g")
    p = add("common-iterate", cmd_common_iterate, "smallest f^m = g^n")
    p.add_argument("f")
    p.add_argument("g")
    p.add_argument("--max-degree", type=int, default=64)

    rel = sub.add_parser("relation", help="relation search and certificates")
    rsub = rel.add_subparsers(dest="action", required=True, parser_class=_Parser)
    p = rsub.add_parser("find", help="search for a relation", parents=[common])
    p.set_defaults(func=cmd_relation_find, schema="relation find")
    p.add_argument("series", nargs="+", help='e.g. "psi(t^2 + 1)" or "psi(t^2 + 1)[@ zeta(3), 2]"')
    p.add_argument("--output", "-o", help="write the certificate here")
    p = rsub.add_parser("verify", help="re-verify a certificate file", parents=[common])
    p.set_defaults(func=cmd_relation_verify, schema="relation verify")
    p.add_argument("certfile")

    sc = sub.add_parser("semiconj", help="semi-conjugacies")
    ssub = sc.add_subparsers(dest="action", required=True, parser_class=_Parser)
    p = ssub.add_parser("verify", help="f o pi = pi o h", parents=[common])
    p.set_defaults(func=cmd_semiconj_verify, schema="semiconj verify")
    for a in ("f", "pi", "h"):
        p.add_argument(a)
    p = ssub.add_parser("quad", help="search pi with (t^2+c) o pi = pi o (t^2+ctilde)", parents=[common])
    p.set_defaults(func=cmd_semiconj_quad, schema="semiconj quad")
    p.add_argument("c")
    p.add_argument("ctilde")
    p.add_argument("--nontrivial", action="store_true", help="skip t and iterates of t^2 + c")

    p = add("witness", cmd_witness, "certificate from a semi-conjugacy f^n o pi = pi o h")
    for a in ("f", "pi", "h", "n"):
        p.add_argument(a)
    p.add_argument("--output", "-o")
    p = add("extract", cmd_extract, "psi with L(t) = psi(t^D)")
    p.add_argument("L")
    p.add_argument("D")
    p.add_argument("f")
    p = add("green", cmd_green, "Green's function G_f(a)")
    p.add_argument("f")
    p.add_argument("a")
    p = add("cheight", cmd_cheight, "canonical height with local breakdown")
    p.add_argument("f")
    p.add_argument("a")
    p = add("hratio", cmd_hratio, "hat h_f(a) / hat h_g(a)")
    p.add_argument("f")
    p.add_argument("g")
    p.add_argument("a")
    add("naive-height", cmd_naive, "log max(|p|, q)").add_argument("a")
    p = add("phi-abs", cmd_phi_abs, "log|phi_f(a)| from the Böttcher series")
    p.add_argument("f")
    p.add_argument("a")
    return top


def run(argv: Sequence[str], out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    try:
        ns = parser.parse_args(list(argv))
    except _Usage as exc:
        print(f"usage error: {exc}", file=err)
        return 2
    ns.window_given = hasattr(ns, "window")
    for name, default in (("window", 64), ("degree", 3), ("digits", 30), ("json", False), ("conductor_cap", None)):
        if not hasattr(ns, name):
            setattr(ns, name, default)
    cfg = _config(ns)
    problems = cfg.problems()
    if problems:
        print("usage error: " + "; ".join(problems), file=err)
        return 2
    old_cap = get_conductor_cap()
    if cfg.conductor_cap is not None:
        set_conductor_cap(cfg.conductor_cap)
    try:
        text, payload = ns.func(ns, cfg)
    except (ParseError, _Usage) as exc:
        print(f"usage error: {type(exc).__name__}: {exc}", file=err)
        return 2
    except OSError as exc:
        print(f"usage error: {exc}", file=err)
        return 2
    except DynamicsError as exc:
        print(f"{type(exc).__name__}: {exc}", file=err)
        return 1
    finally:
        set_conductor_cap(old_cap)
    if cfg.output == "json":
        print(json.dumps(payload, sort_keys=True), file=out)
    else:
        print(text, file=out)
    return 0


def main() -> None:  # pragma: no cover
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":  # pragma: no cover
    main()
