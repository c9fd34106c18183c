"""Table of canonical heights and the ratio hat h_f(a) / hat h_g(a) along a grid of points.

    python3 scripts/height_ratios.py --f "t^2 + 1" --g "t^2 + 2" --amax 12 --digits 20
"""
from __future__ import annotations

import argparse
from dataclasses import dataclass
from fractions import Fraction

from bottcher import canonical_height, parse_poly
from bottcher.errors import DenominatorNotSeparated


@dataclass(frozen=True)
class RatioConfig:
    f: str = "t^2 + 1"
    g: str = "t^2 + 2"
    amax: int = 12
    denominator: int = 1
    digits: int = 20


def table(cfg: RatioConfig):
    f, g = parse_poly(cfg.f), parse_poly(cfg.g)
    for n in range(-cfg.amax * cfg.denominator, cfg.amax * cfg.denominator + 1):
        a = Fraction(n, cfg.denominator)
        hf = canonical_height(f, a, cfg.digits).total
        hg = canonical_height(g, a, cfg.digits).total
        try:
            ratio = str(hf / hg)
        except DenominatorNotSeparated:
            ratio = "undefined"
        yield a, hf, hg, ratio


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    defaults = RatioConfig()
    for name, value in vars(defaults).items():
        ap.add_argument(f"--{name}", type=type(value), default=value)
    cfg = RatioConfig(**vars(ap.parse_args()))
    print(f"f = {cfg.f}, g = {cfg.g}")
    print(f"{'a':>8}  {'h_f(a)':<24} {'h_g(a)':<24} ratio")
    for a, hf, hg, ratio in table(cfg):
        print(f"{str(a):>8}  {str(hf):<24} {str(hg):<24} {ratio}")


if __name__ == "__main__":
    main()
