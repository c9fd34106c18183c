"""Dump the coefficients of psi_f and phi_f as exact rationals, one per line (CSV).

Useful for eyeballing growth: for t^2 + c the coefficients of phi grow
roughly like r0^k with r0 the radius returned by bottcher_radius.

    python3 scripts/bottcher_coefficients.py --f "t^2 + 1" --window 40 > coeffs.csv
"""
from __future__ import annotations

import argparse
import csv
import sys
from dataclasses import dataclass

from bottcher import parse_poly, reversion, solve_psi
from bottcher.formatting import format_scalar
from bottcher.heights import bottcher_radius


@dataclass(frozen=True)
class DumpConfig:
    f: str = "t^2 + 1"
    window: int = 40


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--f", default=DumpConfig.f)
    ap.add_argument("--window", type=int, default=DumpConfig.window)
    cfg = DumpConfig(**vars(ap.parse_args()))
    f = parse_poly(cfg.f)
    psi = solve_psi(f, cfg.window).tail
    phi = reversion(psi)
    print(f"# f = {f}; bottcher radius r0 = {float(bottcher_radius(f).r0):.6g}", file=sys.stderr)
    out = csv.writer(sys.stdout)
    out.writerow(["exponent", "psi", "phi"])
    for k in range(1, phi.prec, -1):
        out.writerow([k, format_scalar(psi.coeff(k)), format_scalar(phi.coeff(k))])


if __name__ == "__main__":
    main()
