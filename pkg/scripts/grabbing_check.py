#!/usr/bin/env python3
"""Degree retention of random s-subsets in dense graphs, across host densities.

Each host has minimum degree at least ceil(min_ratio * n); the density column
is the G(n, p) edge probability before patching.
"""

import argparse
import math
import sys

import numpy as np

from tilinglab.core import complete_kgraph
from tilinglab.experiments import GRABBING_COLUMNS, grabbing_check, random_host, rows_to_csv


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=60)
    ap.add_argument("--s", type=int, default=12)
    ap.add_argument("--min-ratio", type=float, default=0.8)
    ap.add_argument("--densities", default="boundary,0.85,0.9,0.95,complete")
    ap.add_argument("--samples", type=int, default=10**4)
    ap.add_argument("--seed", type=int, required=True)
    args = ap.parse_args(argv)

    delta = math.ceil(args.min_ratio * args.n)
    rows = []
    for label in args.densities.split(","):
        if label == "complete":
            G = complete_kgraph(args.n)
        else:
            density = None if label == "boundary" else float(label)
            G = random_host(args.n, delta, np.random.default_rng(args.seed), density=density)
        row = grabbing_check(G, args.s, args.samples, args.seed).to_row()
        row["host"] = label
        rows.append(row)
    sys.stdout.write(rows_to_csv(rows, ["host"] + GRABBING_COLUMNS))


if __name__ == "__main__":
    main()
