#!/usr/bin/env python3
"""Sweep the bundled sets and measures, print a dimension summary table, and
optionally write it as CSV.

Usage:
    python scripts/dimension_scan.py [--csv table.csv] [--depth 10]
"""

import argparse
import math
import sys
from fractions import Fraction as F

from assouad import ScaleWindow, measure_dimension, set_dimension, sum_measures
from assouad.estimators import set_scan
from assouad import fixtures


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--csv", default=None)
    parser.add_argument("--depth", type=int, default=10)
    args = parser.parse_args()

    rows = []

    window = ScaleWindow(s=F(1, 3), j_min=1, j_max=args.depth, ratio_floor=F(3) ** 6)
    cantor = fixtures.cantor_desc()
    scan = set_scan(cantor, window)
    for kind in ("upper", "lower", "box"):
        est = set_dimension(cantor, kind, window, scan=scan if kind != "box" else None)
        rows.append(("middle-thirds set", kind, est.value, math.log(2) / math.log(3)))

    geo_set = fixtures.geometric_measure().point_set
    est = set_dimension(
        geo_set, "upper", ScaleWindow(s=F(1, 2), j_min=1, j_max=40, ratio_floor=F(2) ** 30)
    )
    rows.append(("geometric closure q=1/2", "upper", est.value, 0.0))

    mu, nu = fixtures.example_pair(12)
    window_m = ScaleWindow(s=F(1, 3), j_min=2, j_max=8, ratio_floor=F(3) ** 5)
    rows.append(
        ("skewed pair mu (p=0.4)", "upper",
         measure_dimension(mu, "upper", window_m).value,
         abs(math.log(0.4)) / math.log(3))
    )
    rows.append(
        ("mu + mirrored nu", "upper",
         measure_dimension(sum_measures(mu, nu), "upper", window_m).value,
         math.log(2) / math.log(3))
    )

    dm = fixtures.geometric_measure()
    rows.append(("geometric masses p=1/4 on q=1/2", "upper",
                 measure_dimension(dm, "upper").value, 2.0))

    bounded = fixtures.dexp_bounded_tails()
    rows.append(("double-exp, geometric tails", "upper",
                 measure_dimension(bounded, "upper").value, 0.0))

    print(f"{'object':<36} {'kind':<6} {'estimate':>10} {'closed form':>12}")
    for name, kind, value, truth in rows:
        print(f"{name:<36} {kind:<6} {value:>10.4f} {truth:>12.4f}")

    if args.csv:
        with open(args.csv, "w", encoding="utf-8") as handle:
            handle.write("object,kind,estimate,closed_form\n")
            for name, kind, value, truth in rows:
                handle.write(f"{name},{kind},{value},{truth}\n")
        print(f"\ntable written to {args.csv}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
