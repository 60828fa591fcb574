#!/usr/bin/env python3
"""Sweep the truncation order and show which results move.

Two groups are measured side by side.  Exact-support computations (the
gallery reports, polynomial derivatives) must render identically at
every order; genuinely infinite series (a geometric inverse) must grow
one stored term per unit of precision.  The sweep prints both so a
regression in either direction is visible at a glance:

    python3 scripts/precision_sweep.py
    python3 scripts/precision_sweep.py --orders 4 8 16 32 64
"""

import argparse
import sys
from dataclasses import dataclass
from fractions import Fraction

from lcfield import inverse, make_real, eps
from lcfield.calculus import derivative_at
from lcfield.dsl import parse_text
from lcfield.gallery import (
    ellipse_parabola_report,
    infinitesimal_equality_report,
    parallel_lines_report,
)


@dataclass(frozen=True)
class SweepConfig:
    orders: tuple[int, ...] = (4, 16, 64)
    baseline: int = 16


STABLE_CASES = {
    "parallel_lines": lambda t: parallel_lines_report(precision=t).render_text(),
    "infinitesimal_equality": lambda t: infinitesimal_equality_report(
        precision=t
    ).render_text(),
    "ellipse_parabola": lambda t: ellipse_parabola_report(precision=t).render_text(),
    "derivative of x^3 - 2x at 5/2": lambda t: str(
        derivative_at(parse_text("x^3 - 2*x"), "x", Fraction(5, 2), precision=t).shadow
    ),
}


def sweep(config: SweepConfig) -> bool:
    print(f"orders: {', '.join(str(t) for t in config.orders)}")
    print()
    print("exact-support cases (must not move):")
    all_stable = True
    for name, run in STABLE_CASES.items():
        renders = {t: run(t) for t in config.orders}
        stable = len(set(renders.values())) == 1
        all_stable = all_stable and stable
        print(f"  {'stable  ' if stable else 'MOVED   '}{name}")

    print()
    print("truncated series (must widen with the order):")
    widths_ok = True
    for t in config.orders:
        series = inverse(make_real(1, t) - eps(t))
        expected = t
        ok = len(series.terms) == expected
        widths_ok = widths_ok and ok
        mark = "ok " if ok else "BAD"
        print(f"  {mark} T={t:<3} inverse(1 - eps) keeps {len(series.terms)} terms")
    return all_stable and widths_ok


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument(
        "--orders",
        type=int,
        nargs="+",
        default=[4, 16, 64],
        help="truncation orders to compare (default: 4 16 64)",
    )
    args = parser.parse_args()
    for t in args.orders:
        if t < 2:
            parser.error("orders must be at least 2")
    config = SweepConfig(orders=tuple(args.orders))
    return 0 if sweep(config) else 1


if __name__ == "__main__":
    sys.exit(main())
