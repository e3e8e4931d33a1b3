#!/usr/bin/env python3
"""Rebuild the extremal host constructions and compare measured degree
ratios with the closed-form threshold values."""

import argparse
import math
from fractions import Fraction

from tilinglab.barriers import is_covered, is_lattice_complete
from tilinglab.constructions import (
    cover_barrier,
    divisibility_barrier,
    downspin_bottlegraph,
    space_barrier,
)
from tilinglab.core import complete_kgraph, complete_partite, min_degree, path_graph
from tilinglab.homlift import hom_digraph
from tilinglab.numbers import COVER_CONSTANT
from tilinglab.solver import exact_perfect_matching, exact_tiling, tiling_of_size


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--cover-ns", default="50,100,200")
    ap.add_argument("--space-ns", default="60,150,300")
    args = ap.parse_args(argv)

    print("cover barrier, k=3: delta_1 / C(n,2) against 2(sqrt2-1)^2")
    for n in map(int, args.cover_ns.split(",")):
        G = cover_barrier(n, 3).graph
        r = min_degree(G, 1) / math.comb(n, 2)
        print(f"  n={n:4d}  ratio={r:.4f}  target={float(COVER_CONSTANT):.4f}")
    C = cover_barrier(20, 3)
    cert = is_covered(hom_digraph(complete_partite([2, 2, 2]), C.graph))
    print(f"  n=20 cover check for (2,2,2): holds={cert.holds} "
          f"vertex={cert.witness.get('vertex')} v={C.special}")

    print("space barrier, k=2, i=1, beta=1/3, K3: e / C(n,2) against 5/9")
    for n in map(int, args.space_ns.split(",")):
        G = space_barrier(n, 2, 1, Fraction(1, 3), [1, 1, 1]).graph
        print(f"  n={n:4d}  ratio={G.e / math.comb(n, 2):.4f}  target={5 / 9:.4f}")
    G = space_barrier(12, 2, 1, Fraction(1, 3), [1, 1, 1]).graph
    print(f"  n=12 K3-tiling of size 4: {tiling_of_size(complete_kgraph(3), G, 4).outcome}")

    print("divisibility barrier: two cliques")
    C = divisibility_barrier(8, 2)
    H = hom_digraph(complete_kgraph(2), C.graph)
    cert = is_lattice_complete(H)
    print(f"  n=8 perfect matching: {exact_perfect_matching(H).outcome}; "
          f"lattice complete={cert.holds} pair={cert.witness.get('pair')}")
    for k in (2, 3):
        n = 40
        G = divisibility_barrier(n, k).graph
        r = min_degree(G, 1) / math.comb(n - 1, k - 1)
        print(f"  n={n} k={k} delta_1 / C(n-1,k-1) = {r:.4f}  (2^(1-k) = {2 ** (1 - k):.4f})")

    print("downspin bottlegraphs")
    print(f"  K_(1,2) on K_(7,5): {exact_tiling(path_graph(3), downspin_bottlegraph(2, 6).graph).outcome}")
    print(f"  K3 on parts (4,2,3): {exact_tiling(complete_kgraph(3), downspin_bottlegraph(3, 3).graph).outcome}")


if __name__ == "__main__":
    main()
