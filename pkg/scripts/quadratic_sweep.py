"""Dependence sweep over pairs psi_{t^2+c}, psi_{t^2+c'} with small integer parameters.

For each pair the relation search and the semi-conjugacy search run side by
side; the table shows whether the two agree (a relation appears exactly when
some low-degree pi links the maps).

    python3 scripts/quadratic_sweep.py --cmin -3 --cmax 3 --degree 2 --window 40
"""
from __future__ import annotations

import argparse
import itertools
import time
from dataclasses import dataclass

from bottcher import Found, PsiTerm, find_relation, quadratic_semiconj_search
from bottcher.series import Poly


@dataclass(frozen=True)
class SweepConfig:
    cmin: int = -3
    cmax: int = 3
    degree: int = 2
    window: int = 40
    pi_degree: int = 4


def sweep(cfg: SweepConfig):
    rows = []
    values = range(cfg.cmin, cfg.cmax + 1)
    for c, ct in itertools.combinations_with_replacement(values, 2):
        t0 = time.perf_counter()
        report = find_relation([PsiTerm(Poly([c, 0, 1])), PsiTerm(Poly([ct, 0, 1]))], cfg.degree, cfg.window)
        pi = quadratic_semiconj_search(c, ct, cfg.pi_degree) or quadratic_semiconj_search(ct, c, cfg.pi_degree)
        rel = str(report.relation) if isinstance(report, Found) else "-"
        rows.append((c, ct, rel, str(pi) if pi is not None else "-", time.perf_counter() - t0))
    return rows


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    for name, default in vars(SweepConfig()).items():
        ap.add_argument(f"--{name.replace('_', '-')}", type=int, default=default)
    cfg = SweepConfig(**vars(ap.parse_args()))
    print(f"{'c':>3} {'c~':>3}  {'relation':<28} {'pi':<16} seconds")
    for c, ct, rel, pi, dt in sweep(cfg):
        print(f"{c:>3} {ct:>3}  {rel:<28} {pi:<16} {dt:.2f}")


if __name__ == "__main__":
    main()
