"""Exact fractional matchings and covers via a rational revised simplex.

Primal:  max sum_e w(e)  s.t.  sum_e w(e) mult(v,e) <= 1 for all v, w >= 0.
Dual:    min sum_v c(v)  s.t.  sum_v c(v) mult(v,e) >= 1 for all e, c >= 0.

The slack basis is feasible (b = 1), so no phase one is needed.  Bland's rule
picks the entering and leaving variables, which rules out cycling.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from math import lcm

import numpy as np

from .core import Digraph
from .errors import ResourceLimitError

DEFAULT_LP_CAP = 10**7

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass(frozen=True)
class FractionalMatching:
    weights: dict  # edge tuple -> Fraction (only nonzero entries)
    size: Fraction

    def load(self, H: Digraph):
        load = [ZERO] * H.n
        for e, w in self.weights.items():
            for v in e:
                load[v] += w
        return load

    def is_feasible(self, H: Digraph):
        if any(w < 0 for w in self.weights.values()):
            return False
        if any(e not in H.edges for e in self.weights):
            return False
        return all(x <= 1 for x in self.load(H)) and self.size == sum(self.weights.values(), ZERO)


@dataclass(frozen=True)
class FractionalCover:
    weights: tuple  # vertex -> Fraction
    size: Fraction

    def is_feasible(self, H: Digraph):
        if len(self.weights) != H.n or any(c < 0 for c in self.weights):
            return False
        for e in H.edges:
            if sum((self.weights[v] for v in e), ZERO) < 1:
                return False
        return self.size == sum(self.weights, ZERO)


@dataclass(frozen=True)
class LPSolution:
    matching: FractionalMatching
    cover: FractionalCover
    pivots: int

    @property
    def value(self):
        return self.matching.size


def solve_matching_lp(H: Digraph, cap: int = DEFAULT_LP_CAP) -> LPSolution:
    n = H.n
    # tuples with the same multiset of vertices give identical columns
    edges = sorted({tuple(sorted(e)): e for e in reversed(H.sorted_edges())}.values())
    E = len(edges)
    if E * max(n, 1) > cap:
        raise ResourceLimitError(f"LP with {E} edges and {n} vertices exceeds size cap {cap}", cap)
    if E == 0:
        return LPSolution(FractionalMatching({}, ZERO),
                          FractionalCover(tuple([ZERO] * n), ZERO), 0)
    cols = [sorted(Counter(e).items()) for e in edges]  # sparse (vertex, mult)
    width = max(len(c) for c in cols)
    idx = np.full((E, width), n, dtype=np.int64)   # padding points at a zero entry
    cnt = np.zeros((E, width), dtype=np.int64)
    for j, col in enumerate(cols):
        for t, (v, c) in enumerate(col):
            idx[j, t] = v
            cnt[j, t] = c
    max_mult = int(cnt.max())

    basis = [E + v for v in range(n)]       # basic variable per row
    binv = [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]
    xb = [ONE] * n
    cost = lambda j: ONE if j < E else ZERO
    pivots = 0
    while True:
        # y = c_B B^-1
        y = [ZERO] * n
        for i in range(n):
            cb = cost(basis[i])
            if cb:
                row = binv[i]
                for v in range(n):
                    if row[v]:
                        y[v] += cb * row[v]
        # price with integers: y = Y / D
        D = 1
        for x in y:
            D = lcm(D, x.denominator)
        Y = [x.numerator * (D // x.denominator) for x in y]
        # basic columns have reduced cost zero, so they never pass the test
        entering = None
        in_basis = set(basis)
        bound = max(max((abs(x) for x in Y), default=0) * max_mult, D)
        if bound < 2**62 // max(H.m, 1):
            Yarr = np.array(Y + [0], dtype=np.int64)
            hits = np.flatnonzero((Yarr[idx] * cnt).sum(axis=1) < D)
            if hits.size:
                entering = int(hits[0])
        else:
            for j in range(E):
                if j not in in_basis and sum(Y[v] * c for v, c in cols[j]) < D:
                    entering = j
                    break
        if entering is None:
            for v in range(n):
                if E + v not in in_basis and Y[v] < 0:
                    entering = E + v
                    break
        if entering is None:
            break
        # d = B^-1 A_j
        if entering < E:
            d = [sum((binv[i][v] * c for v, c in cols[entering]), ZERO) for i in range(n)]
        else:
            d = [binv[i][entering - E] for i in range(n)]
        leave, best = None, None
        for i in range(n):
            if d[i] > 0:
                ratio = xb[i] / d[i]
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    leave, best = i, ratio
        # the polytope is bounded (every column has a positive entry) so leave exists
        piv = d[leave]
        prow = [x / piv for x in binv[leave]]
        pxb = xb[leave] / piv
        for i in range(n):
            if i == leave or not d[i]:
                continue
            f = d[i]
            row = binv[i]
            for v in range(n):
                if prow[v]:
                    row[v] -= f * prow[v]
            xb[i] -= f * pxb
        binv[leave] = prow
        xb[leave] = pxb
        basis[leave] = entering
        pivots += 1

    weights = {}
    for i, j in enumerate(basis):
        if j < E and xb[i]:
            weights[edges[j]] = xb[i]
    size = sum(weights.values(), ZERO)
    cover = tuple(y)
    lam = sum(cover, ZERO)
    assert size == lam, "strong duality violated"
    return LPSolution(FractionalMatching(weights, size), FractionalCover(cover, lam), pivots)


def complementary_slackness(H: Digraph, matching: FractionalMatching, cover: FractionalCover):
    """Check w(e) > 0 => e is tight for c, and c(v) > 0 => v is saturated by w."""
    for e, w in matching.weights.items():
        if w > 0 and sum((cover.weights[v] for v in e), ZERO) != 1:
            return False
    load = matching.load(H)
    for v, c in enumerate(cover.weights):
        if c > 0 and load[v] != 1:
            return False
    return True
