#!/usr/bin/env python3
"""Run every worked example and print the full reports.

Exit status is nonzero when any claim fails, so the script doubles as a
smoke check:

    python3 scripts/run_gallery.py
    python3 scripts/run_gallery.py --precision 4 --csv out/parabola.csv
"""

import argparse
import sys
from dataclasses import dataclass
from fractions import Fraction

from lcfield.calculus import product_rule_report
from lcfield.dsl import parse_text
from lcfield.gallery import (
    ellipse_parabola_report,
    infinitesimal_equality_report,
    parallel_lines_report,
    write_parabola_csv,
)


@dataclass(frozen=True)
class SweepConfig:
    precision: int = 16
    csv_path: str | None = None


def build_reports(config: SweepConfig):
    yield parallel_lines_report(precision=config.precision)
    yield infinitesimal_equality_report(precision=config.precision)
    yield ellipse_parabola_report(precision=config.precision)
    yield product_rule_report(
        parse_text("x^2 - 1"),
        parse_text("x^3 + x"),
        "x",
        Fraction(3, 2),
        precision=config.precision,
    )


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--precision", "-T", type=int, default=16)
    parser.add_argument("--csv", metavar="PATH", help="also write the parabola rows")
    args = parser.parse_args()
    config = SweepConfig(precision=args.precision, csv_path=args.csv)

    all_passed = True
    for report in build_reports(config):
        print(report.render_text())
        print()
        all_passed = all_passed and report.passed
    if config.csv_path:
        write_parabola_csv(config.csv_path, precision=config.precision)
        print(f"parabola rows written to {config.csv_path}")
    return 0 if all_passed else 1


if __name__ == "__main__":
    sys.exit(main())
