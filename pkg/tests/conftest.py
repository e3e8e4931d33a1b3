"""Shared strategies and brute-force oracles for the test suite."""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from tilinglab.core import Digraph, KGraph

settings.register_profile(
    "default", deadline=None, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large])
settings.load_profile("default")


@st.composite
def digraphs(draw, max_n=6, max_m=3, max_edges=12, min_n=1, one_to_one_bias=False):
    m = draw(st.integers(1, max_m))
    n = draw(st.integers(max(min_n, 1), max_n))
    tup = st.tuples(*[st.integers(0, n - 1)] * m)
    if one_to_one_bias and n >= m:
        tup = st.one_of(tup, st.permutations(range(n)).map(lambda p: tuple(p[:m])))
    edges = draw(st.lists(tup, max_size=max_edges, unique=True))
    return Digraph(m, n, frozenset(edges))


@st.composite
def kgraphs(draw, max_n=7, k=2, min_n=0, max_edges=None):
    n = draw(st.integers(min_n, max_n))
    all_sets = list(itertools.combinations(range(n), k))
    if not all_sets:
        return KGraph(k, n, frozenset())
    chosen = draw(st.lists(st.sampled_from(all_sets), unique=True,
                           max_size=max_edges if max_edges is not None else len(all_sets)))
    return KGraph(k, n, frozenset(chosen))


def random_digraph(rng: random.Random, n, m, density):
    edges = set()
    for e in itertools.product(range(n), repeat=m):
        if rng.random() < density:
            edges.add(e)
    return Digraph(m, n, frozenset(edges))


def random_digraph_sparse(rng: random.Random, n, m, count):
    """At most ``count`` uniformly random m-tuples."""
    edges = {tuple(rng.randrange(n) for _ in range(m)) for _ in range(count)}
    return Digraph(m, n, frozenset(edges))


def random_graph(rng: random.Random, n, p, k=2):
    return KGraph(k, n, frozenset(S for S in itertools.combinations(range(n), k)
                                  if rng.random() < p))


def brute_perfect_matchings(H: Digraph):
    """All perfect matchings as sets of vertex sets (edge multiplicity ignored)."""
    if H.n % H.m:
        return set()
    sets = sorted({frozenset(e) for e in H.edges if len(set(e)) == H.m}, key=sorted)
    out = set()
    for combo in itertools.combinations(sets, H.n // H.m):
        if len(frozenset().union(*combo)) == H.n:
            out.add(frozenset(combo))
    return out


def brute_fractional_bound(H: Digraph):
    """Largest integral matching size, a lower bound for nu."""
    sets = sorted({frozenset(e) for e in H.edges if len(set(e)) == H.m}, key=sorted)
    best = 0
    for r in range(1, H.n // H.m + 1):
        for combo in itertools.combinations(sets, r):
            if len(frozenset().union(*combo)) == r * H.m:
                best = r
                break
        else:
            break
    return Fraction(best)


def proper_colouring(F, col):
    return all(len({col[v] for v in e}) == len(e) for e in F.edges)


def brute_profile(F):
    """chi, tau and D by enumerating every colour assignment."""
    for r in range(1, F.n + 1):
        sizes = set()
        for col in itertools.product(range(r), repeat=F.n):
            if len(set(col)) == r and proper_colouring(F, col):
                sizes.add(tuple(sorted(col.count(c) for c in range(r))))
        if sizes:
            tau = Fraction(min(s[0] for s in sizes), F.n)
            D = {abs(a - b) for s in sizes for a, b in itertools.combinations(s, 2)}
            if r == 1:
                D |= {s[0] for s in sizes}
            return r, tau, D
    raise AssertionError("unreachable")


def diophantine_reachable(H, coef=5, box=2):
    """Vectors sum c_e 1_e with |c_e| <= coef, tracking partial sums inside
    the box |x_v| <= box.  Every reported vector is a genuine lattice member;
    clipping only loses vectors, so the oracle decides membership positively.
    """
    n = H.n
    base = 2 * box + 1
    weights = base ** np.arange(n)
    states = np.zeros((1, n), dtype=np.int64)
    for e in sorted(H.edges):
        ind = np.zeros(n, dtype=np.int64)
        for v in e:
            ind[v] += 1
        cs = np.arange(-coef, coef + 1)
        cand = (states[:, None, :] + cs[None, :, None] * ind[None, None, :]).reshape(-1, n)
        cand = cand[(np.abs(cand) <= box).all(axis=1)]
        keys = (cand + box) @ weights
        _, idx = np.unique(keys, return_index=True)
        states = cand[idx]
    return {tuple(int(x) for x in s) for s in states}


@pytest.fixture
def rng():
    return random.Random(20240617)
