#!/usr/bin/env python3
"""Success-rate sweep for perfect tilings of random hosts around a threshold.

Example:
    python3 scripts/threshold_sweep.py --tile complete:3 --seed 1 --trials 20
"""

import argparse
import sys
from fractions import Fraction

from tilinglab.cli import load_graph
from tilinglab.experiments import SweepConfig, rows_to_csv, sweep, sweep_columns
from tilinglab.thresholds import threshold_graph_tiling


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--tile", default="complete:3")
    ap.add_argument("--ns", default="9,12,15,18,21")
    ap.add_argument("--ratios", default="1/2,3/5,2/3,3/4,4/5")
    ap.add_argument("--trials", type=int, default=10)
    ap.add_argument("--seed", type=int, required=True)
    ap.add_argument("--checkers", default="spa,div,cov")
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("-o", "--output")
    args = ap.parse_args(argv)

    F = load_graph(args.tile)
    cfg = SweepConfig(F, [int(x) for x in args.ns.split(",")],
                      [Fraction(r) for r in args.ratios.split(",")],
                      args.trials, args.seed,
                      [c for c in args.checkers.split(",") if c], workers=args.workers)
    text = rows_to_csv(sweep(cfg), sweep_columns(cfg))
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if F.k == 2:
        til = threshold_graph_tiling(F)["til"]
        print(f"# formula value th_1(til) = {til.value.to_json()}", file=sys.stderr)


if __name__ == "__main__":
    main()
