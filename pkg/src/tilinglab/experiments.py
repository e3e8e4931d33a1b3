"""Monte Carlo harness: success-rate sweeps over minimum degree, and the
grabbing check for degree retention in random s-sets.

Every trial gets its own child of ``numpy.random.SeedSequence(seed)``, so the
table is the same whatever the number of workers.
"""

from __future__ import annotations

import csv
import io
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil

import numpy as np

from .barriers import has_space, is_covered, is_lattice_complete
from .core import KGraph
from .errors import InputError
from .homlift import hom_digraph
from .solver import FOUND, INCONCLUSIVE, NONE, exact_tiling


def random_host(n, delta, rng, density=None):
    """Random graph with minimum degree at least ``delta``.

    Starts from G(n, p) with p = delta / (n - 1) (or ``density``) and patches
    each deficient vertex with random extra neighbours.
    """
    if not 0 <= delta <= n - 1:
        raise InputError(f"delta={delta} impossible on {n} vertices")
    p = delta / max(n - 1, 1) if density is None else density
    adj = np.zeros((n, n), dtype=bool)
    iu = np.triu_indices(n, 1)
    adj[iu] = rng.random(len(iu[0])) < p
    adj |= adj.T
    for v in range(n):
        short = delta - int(adj[v].sum())
        if short > 0:
            free = np.flatnonzero(~adj[v])
            free = free[free != v]
            pick = rng.choice(free, size=short, replace=False)
            adj[v, pick] = True
            adj[pick, v] = True
    return adjacency_to_graph(adj)


def adjacency_to_graph(adj):
    n = adj.shape[0]
    us, vs = np.nonzero(np.triu(adj, 1))
    return KGraph(2, n, frozenset(zip(us.tolist(), vs.tolist())))


def graph_to_adjacency(G: KGraph):
    adj = np.zeros((G.n, G.n), dtype=bool)
    for u, v in G.edges:
        adj[u, v] = adj[v, u] = True
    return adj


# --- sweep -------------------------------------------------------------------

CHECKERS = {
    "spa": lambda H: has_space(H).holds,
    "div": lambda H: is_lattice_complete(H).holds,
    "cov": lambda H: is_covered(H).holds,
}


@dataclass
class SweepConfig:
    tile: KGraph
    ns: list
    ratios: list                 # target delta / n values (Fractions)
    trials: int
    seed: int
    checkers: list = field(default_factory=list)
    solve: bool = True
    budget: int = 10**6
    workers: int = 1


def _trial(args):
    tile, n, delta, seed_seq, checkers, solve, budget = args
    rng = np.random.default_rng(seed_seq)
    G = random_host(n, delta, rng)
    out = {}
    if checkers:
        H = hom_digraph(tile, G)
        for name in checkers:
            out[name] = CHECKERS[name](H)
    if solve:
        out["outcome"] = exact_tiling(tile, G, budget=budget).outcome
    return out


def _map(func, jobs, workers):
    if workers <= 1:
        return [func(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, jobs, chunksize=4))


def sweep(cfg: SweepConfig):
    """Rows of success rates, one per (n, ratio) cell."""
    for name in cfg.checkers:
        if name not in CHECKERS:
            raise InputError(f"unknown checker {name!r}")
    cells, jobs = [], []
    root = np.random.SeedSequence(cfg.seed)
    ns = [n for n in cfg.ns if n % cfg.tile.n == 0]
    children = root.spawn(len(ns) * len(cfg.ratios) * cfg.trials)
    c = 0
    for n in ns:
        for r in cfg.ratios:
            delta = min(n - 1, ceil(Fraction(r) * n))
            cells.append((n, Fraction(r), delta))
            for _ in range(cfg.trials):
                jobs.append((cfg.tile, n, delta, children[c], cfg.checkers, cfg.solve, cfg.budget))
                c += 1
    results = _map(_trial, jobs, cfg.workers)
    rows = []
    for idx, (n, r, delta) in enumerate(cells):
        chunk = results[idx * cfg.trials:(idx + 1) * cfg.trials]
        row = {"n": n, "ratio": str(r), "delta": delta, "trials": cfg.trials}
        if cfg.solve:
            for key in (FOUND, NONE, INCONCLUSIVE):
                row[key] = sum(1 for x in chunk if x["outcome"] == key)
            row["success_rate"] = f"{row[FOUND] / cfg.trials:.4f}" if cfg.trials else ""
        for name in cfg.checkers:
            row[f"{name}_rate"] = (f"{sum(x[name] for x in chunk) / cfg.trials:.4f}"
                                   if cfg.trials else "")
        rows.append(row)
    return rows


def sweep_columns(cfg: SweepConfig):
    cols = ["n", "ratio", "delta", "trials"]
    if cfg.solve:
        cols += [FOUND, NONE, INCONCLUSIVE, "success_rate"]
    cols += [f"{name}_rate" for name in cfg.checkers]
    return cols


def rows_to_csv(rows, columns):
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
    return buf.getvalue()


# --- grabbing ----------------------------------------------------------------

@dataclass
class GrabbingResult:
    n: int
    s: int
    samples: int
    threshold: float
    retained: int
    seed: int
    host_min_degree: int

    @property
    def fraction(self):
        return self.retained / self.samples if self.samples else 1.0

    def to_row(self):
        return {"n": self.n, "s": self.s, "samples": self.samples,
                "threshold": self.threshold, "host_min_degree": self.host_min_degree,
                "retained": self.retained, "fraction": f"{self.fraction:.4f}",
                "seed": self.seed}


GRABBING_COLUMNS = ["n", "s", "samples", "threshold", "host_min_degree", "retained",
                    "fraction", "seed"]


def grabbing_check(G: KGraph, s: int, samples: int, seed: int, ratio=0.7, batch=2000):
    """Fraction of uniform s-subsets S with delta_1(G[S]) >= ratio (s - 1)."""
    if G.k != 2:
        raise InputError("grabbing check is implemented for 2-graphs")
    if not 1 <= s <= G.n:
        raise InputError("need 1 <= s <= n")
    adj = graph_to_adjacency(G).astype(np.int32)
    rng = np.random.default_rng(seed)
    need = ratio * (s - 1)
    kept = 0
    done = 0
    while done < samples:
        size = min(batch, samples - done)
        S = np.argsort(rng.random((size, G.n)), axis=1)[:, :s]
        sub = adj[S[:, :, None], S[:, None, :]]
        kept += int((sub.sum(axis=2).min(axis=1) >= need).sum())
        done += size
    return GrabbingResult(G.n, s, samples, ratio, kept, seed, int(adj.sum(axis=1).min()))
