#!/usr/bin/env python3
"""Refinement study: quasi-conformal error versus mean edge length.

Flattens a spherical cap at a sequence of resolutions and reports the
log-log slope of (Q_avg - 1) against h, optionally writing a CSV.
"""

import argparse

import numpy as np

from conformap import generators as gen
from conformap.quality import convergence_study, study_rows_to_csv


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--levels", type=int, nargs="+", default=[6, 12, 24, 48, 96])
    parser.add_argument("--cap-angle", type=float, default=np.pi / 2)
    parser.add_argument("--csv", help="write rows to this CSV file")
    args = parser.parse_args()

    def generator(level):
        return gen.disk_mesh_from(gen.spherical_cap(level, args.cap_angle))

    rows, slope = convergence_study(generator, args.levels)
    for row in rows:
        print(f"level {row['level']:4d}  h {row['h']:.5f}  "
              f"q_avg-1 {row['q_avg_minus_1']:.4e}  q_max {row['q_max']:.5f}")
    print(f"log-log slope: {slope:.4f}")
    if args.csv:
        with open(args.csv, "w", encoding="utf-8") as fh:
            fh.write(study_rows_to_csv(rows))
        print(f"wrote {args.csv}")


if __name__ == "__main__":
    main()
