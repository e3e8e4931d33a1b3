"""Exact and heuristic perfect matching / tiling engines.

The exact engines branch on the lowest uncovered vertex and memoise covered
vertex masks that are known dead ends.  Every search has a node budget and
reports ``inconclusive`` when it runs out, which is never confused with a
proof of non-existence (``none``).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

import numpy as np

from .barriers import Certificate, _as_digraph
from .core import Digraph, KGraph, Matching, Tiling, induced
from .errors import InputError, ResourceLimitError
from .lp import solve_matching_lp

DEFAULT_BUDGET = 10**7

FOUND, NONE, INCONCLUSIVE = "found", "none", "inconclusive"


@dataclass
class SolveReport:
    outcome: str
    matching: Matching = None
    tiling: Tiling = None
    stats: dict = field(default_factory=dict)

    @property
    def found(self):
        return self.outcome == FOUND

    def certificate(self):
        if self.tiling is not None or self.stats.get("kind") == "tiling":
            prop = "tiling"
            witness = {"embeddings": [list(t) for t in self.tiling.embeddings]} if self.tiling else {}
        else:
            prop = "matching"
            witness = {"edges": [list(e) for e in self.matching.edges]} if self.matching else {}
        witness["outcome"] = self.outcome
        if self.outcome != FOUND:
            witness["nodes"] = self.stats.get("nodes", 0)
        return Certificate(prop, self.outcome == FOUND, witness)


class _Budget(Exception):
    pass


# --- exact perfect matching -------------------------------------------------

def _edge_index(H: Digraph):
    """One-to-one edges grouped by vertex set.

    Returns (masks_at, reps, mult): for each vertex v, the list of vertex-set
    masks containing v ordered by the branching heuristic; a representative
    tuple per mask; the number of tuples per mask.
    """
    reps, mult = {}, {}
    for e in H.sorted_edges():
        if len(set(e)) != len(e):
            continue
        mask = 0
        for v in e:
            mask |= 1 << v
        mult[mask] = mult.get(mask, 0) + 1
        reps.setdefault(mask, e)
    degree = [0] * H.n
    for mask in reps:
        for v in reps[mask]:
            degree[v] += 1
    masks_at = [[] for _ in range(H.n)]
    for mask, e in reps.items():
        for v in e:
            masks_at[v].append(mask)
    for v in range(H.n):
        # fewest extensions first: edges through rarely covered vertices
        masks_at[v].sort(key=lambda mk: (sum(degree[u] for u in reps[mk] if u != v),
                                         tuple(sorted(reps[mk]))))
    return masks_at, reps, mult


def exact_perfect_matching(H, budget: int = DEFAULT_BUDGET) -> SolveReport:
    H = _as_digraph(H)
    n, m = H.n, H.m
    if n % m:
        return SolveReport(NONE, stats={"nodes": 0, "reason": "v(H) not divisible by m"})
    masks_at, reps, _ = _edge_index(H)
    full = (1 << n) - 1
    dead = set()
    nodes = 0
    chosen = []

    def rec(covered):
        nonlocal nodes
        if covered == full:
            return True
        if covered in dead:
            return False
        nodes += 1
        if nodes > budget:
            raise _Budget
        v = (~covered & (covered + 1)).bit_length() - 1  # lowest uncovered
        for mask in masks_at[v]:
            if mask & covered:
                continue
            chosen.append(mask)
            if rec(covered | mask):
                return True
            chosen.pop()
        dead.add(covered)
        return False

    try:
        ok = rec(0)
    except _Budget:
        return SolveReport(INCONCLUSIVE, stats={"nodes": nodes, "budget": budget})
    if not ok:
        return SolveReport(NONE, stats={"nodes": nodes})
    M = Matching(tuple(reps[mk] for mk in chosen))
    return SolveReport(FOUND, matching=M, stats={"nodes": nodes})


def count_perfect_matchings(H, cap: int = DEFAULT_BUDGET) -> int:
    """Number of perfect matchings (sets of one-to-one edge tuples)."""
    H = _as_digraph(H)
    n, m = H.n, H.m
    if n % m:
        return 0
    masks_at, _, mult = _edge_index(H)
    full = (1 << n) - 1
    memo = {full: 1}
    nodes = 0

    def rec(covered):
        nonlocal nodes
        if covered in memo:
            return memo[covered]
        nodes += 1
        if nodes > cap:
            raise ResourceLimitError(f"matching count exceeded node cap {cap}", cap)
        v = (~covered & (covered + 1)).bit_length() - 1
        total = 0
        for mask in masks_at[v]:
            if not mask & covered:
                total += mult[mask] * rec(covered | mask)
        memo[covered] = total
        return total

    return rec(0)


# --- exact tiling (embedding level) -----------------------------------------

def _copies_through(F: KGraph, G: KGraph, v, covered, nbG):
    """Vertex sets of copies of F in G - covered that contain v."""
    m = F.n
    closing = [[] for _ in range(m)]
    for f in F.sorted_edges():
        closing[max(f)].append(f)
    seen = set()
    for anchor in range(m):
        # place tile vertex `anchor` on v, then the others in label order
        order = [anchor] + [w for w in range(m) if w != anchor]
        pos = {w: i for i, w in enumerate(order)}
        checks = [[] for _ in range(m)]
        for f in F.edges:
            checks[max(pos[w] for w in f)].append(f)
        phi = {}
        used = set()

        def rec(i):
            if i == m:
                key = frozenset(phi.values())
                if key not in seen:
                    seen.add(key)
                    yield tuple(phi[w] for w in range(m))
                return
            w = order[i]
            if i == 0:
                cands = [v]
            else:
                cands = None
                for f in F.edges:
                    if w in f:
                        for u in f:
                            if u != w and u in phi:
                                s = nbG[phi[u]]
                                cands = set(s) if cands is None else cands & s
                cands = range(G.n) if cands is None else sorted(cands)
            for x in cands:
                if x in used or (covered >> x) & 1:
                    continue
                phi[w] = x
                if all(G.has_edge(phi[u] for u in f) for f in checks[i]):
                    used.add(x)
                    yield from rec(i + 1)
                    used.discard(x)
                del phi[w]

        yield from rec(0)


def exact_tiling(F: KGraph, G: KGraph, budget: int = DEFAULT_BUDGET) -> SolveReport:
    if F.k != G.k:
        raise InputError("uniformity mismatch")
    if G.n % F.n:
        return SolveReport(NONE, stats={"nodes": 0, "kind": "tiling",
                                        "reason": "v(F) does not divide v(G)"})
    full = (1 << G.n) - 1
    nbG = G.neighbours()
    dead = set()
    nodes = 0
    chosen = []

    def rec(covered):
        nonlocal nodes
        if covered == full:
            return True
        if covered in dead:
            return False
        nodes += 1
        if nodes > budget:
            raise _Budget
        v = (~covered & (covered + 1)).bit_length() - 1
        for emb in _copies_through(F, G, v, covered, nbG):
            mask = 0
            for x in emb:
                mask |= 1 << x
            chosen.append(emb)
            if rec(covered | mask):
                return True
            chosen.pop()
        dead.add(covered)
        return False

    try:
        ok = rec(0)
    except _Budget:
        return SolveReport(INCONCLUSIVE, stats={"nodes": nodes, "budget": budget, "kind": "tiling"})
    if not ok:
        return SolveReport(NONE, stats={"nodes": nodes, "kind": "tiling"})
    return SolveReport(FOUND, tiling=Tiling(tuple(chosen)), stats={"nodes": nodes, "kind": "tiling"})


def tiling_of_size(F: KGraph, G: KGraph, t: int, budget: int = DEFAULT_BUDGET) -> SolveReport:
    """Search for t vertex-disjoint copies of F (not necessarily spanning).

    The lowest undecided vertex is either covered by a copy or discarded.
    """
    if F.k != G.k:
        raise InputError("uniformity mismatch")
    if t < 0:
        raise InputError("t must be non-negative")
    full = (1 << G.n) - 1
    nbG = G.neighbours()
    dead = set()
    nodes = 0
    chosen = []

    def rec(decided, covered, need):
        nonlocal nodes
        if need == 0:
            return True
        if (G.n - bin(decided).count("1")) < need * F.n or (decided, need) in dead:
            return False
        nodes += 1
        if nodes > budget:
            raise _Budget
        v = (~decided & (decided + 1)).bit_length() - 1
        for emb in _copies_through(F, G, v, decided, nbG):
            mask = 0
            for x in emb:
                mask |= 1 << x
            chosen.append(emb)
            if rec(decided | mask, covered | mask, need - 1):
                return True
            chosen.pop()
        if rec(decided | (1 << v), covered, need):
            return True
        dead.add((decided, need))
        return False

    stats = {"kind": "tiling", "size": t}
    try:
        ok = rec(0, 0, t) if t * F.n <= G.n else False
    except _Budget:
        return SolveReport(INCONCLUSIVE, stats={**stats, "nodes": nodes, "budget": budget})
    stats["nodes"] = nodes
    if not ok:
        return SolveReport(NONE, stats=stats)
    return SolveReport(FOUND, tiling=Tiling(tuple(chosen)), stats=stats)


# --- greedy almost-perfect matchings ----------------------------------------

def _one_to_one(H):
    return [e for e in H.sorted_edges() if len(set(e)) == H.m]


def _greedy_fill(edges, covered, out):
    """Add edges (in the given order) that avoid ``covered``."""
    for e in edges:
        if not covered.intersection(e):
            out.append(e)
            covered.update(e)


def _max_degree_greedy(H, covered, out):
    """Cover the currently hardest vertex using the easiest partners.

    Repeatedly pick the uncovered vertex with the fewest available edges and
    match it by the available edge whose other vertices have the largest
    available degree.
    """
    edges = [e for e in _one_to_one(H) if not covered.intersection(e)]
    while edges:
        deg = {}
        for e in edges:
            for v in e:
                deg[v] = deg.get(v, 0) + 1
        v = min(deg, key=lambda u: (deg[u], u))
        best = max((e for e in edges if v in e),
                   key=lambda e: (sum(deg[u] for u in e if u != v), tuple(-x for x in e)))
        out.append(best)
        covered.update(best)
        edges = [e for e in edges if not covered.intersection(e)]


def greedy_almost_matching(H, strategy="max-degree", seed=None, exclude=()):
    """A maximal matching built greedily; returns (Matching, leftover list).

    ``lp-rounding`` orders the support of an optimal fractional matching by a
    seeded weighted random permutation, adds edges in that order, then repairs
    with the max-degree rule.  Vertices in ``exclude`` are left untouched.
    """
    H = _as_digraph(H)
    covered = set(exclude)
    out = []
    if strategy == "lp-rounding":
        if seed is None:
            raise InputError("lp-rounding needs a seed")
        sub = induced(H, [v for v in range(H.n) if v not in covered])
        sol = solve_matching_lp(sub)
        support = [(tuple(sub.labels[v] for v in e), w)
                   for e, w in sorted(sol.matching.weights.items()) if len(set(e)) == H.m]
        rng = np.random.default_rng(seed)
        keys = []
        for e, w in support:
            u = rng.random()
            keys.append((u ** (1.0 / float(w)), e))
        keys.sort(key=lambda t: (-t[0], t[1]))
        _greedy_fill([e for _, e in keys], covered, out)
        _max_degree_greedy(H, covered, out)
    elif strategy == "max-degree":
        _max_degree_greedy(H, covered, out)
    else:
        raise InputError(f"unknown strategy {strategy!r}")
    leftover = [v for v in range(H.n) if v not in covered]
    return Matching(tuple(out)), leftover


# --- absorbers ---------------------------------------------------------------

@dataclass(frozen=True)
class Absorber:
    X: tuple
    M1: Matching
    M2: Matching

    @property
    def order(self):
        return len(self.M2.vertices())

    def body(self):
        return self.M2.vertices()

    def validate(self, H: Digraph):
        self.M1.validate(H)
        self.M2.validate(H)
        X = set(self.X)
        if self.M2.vertices() & X:
            raise InputError("M2 meets X")
        if self.M1.vertices() != self.M2.vertices() | X:
            raise InputError("V(M1) differs from V(M2) plus X")
        return True


@dataclass
class AbsorberResult:
    outcome: str
    absorber: Absorber = None
    nodes: int = 0


def find_absorber(H, X, q, budget: int = 10**5, avoid=()) -> AbsorberResult:
    """Search for an X-absorber of order q avoiding the vertices in ``avoid``.

    Builds a matching M1 covering X on exactly q + m vertices (edges through
    uncovered X-vertices first, then extra edges in increasing order of their
    lowest vertex), and accepts it once H[V(M1) - X] has a perfect matching.
    """
    H = _as_digraph(H)
    m = H.m
    X = tuple(sorted(set(X)))
    if len(X) != m:
        raise InputError(f"X must be an m-set (m={m})")
    if q % m:
        raise InputError("q must be divisible by m")
    target = q + m
    blocked = set(avoid)
    if blocked & set(X):
        raise InputError("X meets the avoided vertices")
    edges = [e for e in _one_to_one(H) if not blocked.intersection(e)]
    through = {}
    for e in edges:
        for v in e:
            through.setdefault(v, []).append(e)
    for x in X:
        if x not in through:
            return AbsorberResult(NONE)
    Xset = set(X)
    nodes = 0
    chosen = []
    exhaustive = True

    def body_matching(used):
        W = sorted(used - Xset)
        if not W:
            return Matching(())
        sub = induced(H, W)
        rep = exact_perfect_matching(sub, budget=max(1, budget - nodes))
        if rep.outcome == FOUND:
            return Matching(tuple(tuple(W[v] for v in e) for e in rep.matching.edges))
        if rep.outcome == INCONCLUSIVE:
            nonlocal exhaustive
            exhaustive = False
        return None

    def rec(used, min_extra):
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            raise _Budget
        missing = [x for x in X if x not in used]
        if missing:
            for e in through[missing[0]]:
                if used.intersection(e) or len(used) + m > target:
                    continue
                chosen.append(e)
                res = rec(used | set(e), min_extra)
                if res:
                    return res
                chosen.pop()
            return None
        if len(used) == target:
            M2 = body_matching(used)
            if M2 is not None:
                return Absorber(X, Matching(tuple(chosen)), M2)
            return None
        for e in edges:
            if min(e) <= min_extra or used.intersection(e):
                continue
            chosen.append(e)
            res = rec(used | set(e), min(e))
            if res:
                return res
            chosen.pop()
        return None

    try:
        result = rec(set(), -1)
    except _Budget:
        return AbsorberResult(INCONCLUSIVE, nodes=nodes)
    if result is None:
        return AbsorberResult(NONE if exhaustive else INCONCLUSIVE, nodes=nodes)
    return AbsorberResult(FOUND, result, nodes)


# --- absorption pipeline ----------------------------------------------------

@dataclass
class AbsorptionParams:
    q: int = None               # absorber order, default 2m
    absorbers: int = None       # number of absorbers to reserve
    absorber_budget: int = 10**4
    leftover_cap: int = None    # largest exact subproblem before the final fallback
    seed: int = 0
    strategy: str = "lp-rounding"
    budget: int = DEFAULT_BUDGET


def _solve_region(H, region, budget):
    region = sorted(region)
    rep = exact_perfect_matching(induced(H, region), budget=budget)
    if rep.outcome != FOUND:
        return rep.outcome, None, rep.stats.get("nodes", 0)
    return FOUND, [tuple(region[v] for v in e) for e in rep.matching.edges], rep.stats.get("nodes", 0)


def absorption_solve(H, params: AbsorptionParams = None) -> SolveReport:
    """Absorbers + greedy almost-matching + exact completion.

    1. Reserve pairwise disjoint absorbers for anchor m-sets made of the
       vertices with the fewest one-to-one edges.
    2. Greedily match the vertices outside the absorber bodies.
    3. Activate every absorber whose anchor is entirely left over; solve the
       rest exactly on the passive bodies plus the leftover, releasing greedy
       edges into the region while that fails.
    Success is re-verified; failure of the heuristic phases falls back to the
    exact solver within the remaining budget.
    """
    H = _as_digraph(H)
    p = params or AbsorptionParams()
    n, m = H.n, H.m
    stats = {"method": "absorb", "seed": p.seed}
    if n % m:
        return SolveReport(NONE, stats={**stats, "reason": "v(H) not divisible by m"})
    q = 2 * m if p.q is None else p.q
    count = max(1, n // (3 * (q + m))) if p.absorbers is None else p.absorbers
    leftover_cap = p.leftover_cap if p.leftover_cap is not None else max(4 * (q + m), n // 2)
    nodes = 0

    # 1. absorbers
    degree = [0] * n
    for e in _one_to_one(H):
        for v in e:
            degree[v] += 1
    order = sorted(range(n), key=lambda v: (degree[v], v))
    reserved = set()      # absorber bodies
    anchored = set()      # anchor vertices of reserved absorbers
    skipped = set()
    absorbers = []
    while len(absorbers) < count:
        free = [v for v in order if v not in reserved and v not in anchored and v not in skipped]
        if len(free) < q + m:
            break
        X = tuple(sorted(free[:m]))
        res = find_absorber(H, X, q, budget=p.absorber_budget, avoid=reserved | anchored)
        nodes += res.nodes
        if res.outcome == FOUND:
            absorbers.append(res.absorber)
            reserved |= res.absorber.body()
            anchored |= set(X)
        else:
            skipped.add(free[0])
    stats["absorbers"] = len(absorbers)

    # 2. greedy on everything outside the bodies
    greedy, leftover = greedy_almost_matching(H, p.strategy, seed=p.seed, exclude=reserved)
    kept = list(greedy.edges)

    # 3. flip absorbers and complete exactly
    final = []
    region = set(leftover)
    for ab in absorbers:
        if set(ab.X) <= region:
            final.extend(ab.M1.edges)
            region -= set(ab.X)
        else:
            region |= ab.body()
    stats["leftover"] = len(leftover)
    released = 0
    while True:
        if len(region) > leftover_cap:
            break
        outcome, sub, used = _solve_region(H, region, max(1, p.budget - nodes))
        nodes += used
        if outcome == FOUND:
            final.extend(sub)
            final.extend(kept)
            M = Matching(tuple(sorted(final)))
            M.validate(H, perfect=True)
            stats.update(nodes=nodes, released=released)
            return SolveReport(FOUND, matching=M, stats=stats)
        if outcome == INCONCLUSIVE or not kept:
            break
        step = max(1, released or 1)
        for e in kept[-step:]:
            region |= set(e)
        kept = kept[:-step]
        released += step

    # fallback
    rep = exact_perfect_matching(H, budget=max(1, p.budget - nodes))
    nodes += rep.stats.get("nodes", 0)
    stats.update(nodes=nodes, released=released, fallback=True)
    if rep.outcome == FOUND:
        rep.matching.validate(H, perfect=True)
    return SolveReport(rep.outcome, matching=rep.matching, stats=stats)
