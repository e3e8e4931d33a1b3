"""Tile invariants: chromatic data, gcd, cones, interval colourings, density.

A colouring of a k-graph is proper when no edge sees a colour twice, which is
the same as being a proper colouring of its 2-shadow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations, product

import numpy as np

from .core import KGraph, complete_partite
from .errors import InputError, ResourceLimitError

DEFAULT_COLORING_CAP = 20
DEFAULT_PARTITION_CAP = 2 * 10**6
INF = math.inf


@dataclass(frozen=True)
class ColoringProfile:
    chi: int
    class_sizes: tuple      # distinct sorted size profiles of proper chi-colourings
    tau: Fraction
    D: frozenset
    gcd: object             # int, or math.inf when D == {0}
    colorings: int          # number of proper chi-colourings up to relabelling

    def to_json(self):
        return {"chi": self.chi,
                "class_sizes": [list(s) for s in self.class_sizes],
                "tau": _fs(self.tau),
                "D": sorted(self.D),
                "gcd": "inf" if self.gcd == INF else self.gcd,
                "chi_crit": _fs(crit_from(self.chi, self.tau)),
                "colorings": self.colorings}


def _fs(x):
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _shadow(F: KGraph):
    return [frozenset(s) for s in F.neighbours()]


def iter_proper_partitions(F: KGraph, classes: int, cap=DEFAULT_PARTITION_CAP):
    """Yield proper colourings with exactly ``classes`` non-empty classes.

    Colourings are generated once per set partition: vertex v may only open
    colour c if colours 0..c-1 are already in use.
    """
    nb = _shadow(F)
    n = F.n
    colour = [-1] * n
    members = [[] for _ in range(classes)]
    count = 0

    def rec(v, used):
        nonlocal count
        if n - v < classes - used:
            return
        if v == n:
            count += 1
            if count > cap:
                raise ResourceLimitError(f"more than {cap} proper colourings", cap)
            yield [list(m) for m in members]
            return
        for c in range(min(used + 1, classes)):
            if any(colour[u] == c for u in nb[v] if u < v):
                continue
            colour[v] = c
            members[c].append(v)
            yield from rec(v + 1, max(used, c + 1))
            members[c].pop()
            colour[v] = -1

    yield from rec(0, 0)


def _colourable(F: KGraph, r):
    """Is there a proper colouring with at most r colours (DSatur-free DFS)?"""
    nb = _shadow(F)
    order = sorted(range(F.n), key=lambda v: -len(nb[v]))
    colour = {}

    def rec(i, used):
        if i == len(order):
            return True
        v = order[i]
        taken = {colour[u] for u in nb[v] if u in colour}
        for c in range(min(used + 1, r)):
            if c not in taken:
                colour[v] = c
                if rec(i + 1, max(used, c + 1)):
                    return True
                del colour[v]
        return False

    return rec(0, 0)


def chromatic_number(F: KGraph, cap=DEFAULT_COLORING_CAP):
    if F.n > cap:
        raise ResourceLimitError(f"exact colouring limited to v(F) <= {cap}", cap)
    if F.n == 0:
        return 0
    r = 1
    while not _colourable(F, r):
        r += 1
    return r


def coloring_profile(F: KGraph, cap=DEFAULT_COLORING_CAP,
                     partition_cap=DEFAULT_PARTITION_CAP) -> ColoringProfile:
    chi = chromatic_number(F, cap)
    if chi == 0:
        raise InputError("tile has no vertices")
    profiles = set()
    count = 0
    for classes in iter_proper_partitions(F, chi, partition_cap):
        profiles.add(tuple(sorted(len(c) for c in classes)))
        count += 1
    tau = Fraction(min(p[0] for p in profiles), F.n)
    D = set()
    for p in profiles:
        if chi == 1:
            D.add(p[0])      # the second colour class is empty
        for a, b in combinations(p, 2):
            D.add(abs(a - b))
    g = 0
    for x in D:
        g = math.gcd(g, x)
    return ColoringProfile(chi, tuple(sorted(profiles)), tau, frozenset(D),
                           INF if g == 0 else g, count)


def crit_from(chi, tau):
    if chi < 2:
        return Fraction(1)
    return Fraction(chi - 1) / (1 - Fraction(tau))


def chi_crit(F: KGraph) -> Fraction:
    p = coloring_profile(F)
    return crit_from(p.chi, p.tau)


def is_cone(F: KGraph) -> bool:
    p = coloring_profile(F)
    return any(1 in sizes for sizes in p.class_sizes)


def gcd_of_tile(F: KGraph):
    return coloring_profile(F).gcd


def has_bridge(F: KGraph) -> bool:
    """Does the 2-graph F have an edge whose removal disconnects its ends?"""
    if F.k != 2:
        raise InputError("bridges are defined for 2-graphs")
    edges = F.sorted_edges()
    nb = F.neighbours()
    for a, b in edges:
        seen, stack = {a}, [a]
        while stack:
            x = stack.pop()
            for y in nb[x]:
                if {x, y} == {a, b} or y in seen:
                    continue
                seen.add(y)
                stack.append(y)
        if b not in seen:
            return True
    return False


def component_orders(F: KGraph):
    nb = F.neighbours()
    seen, sizes = set(), []
    for s in range(F.n):
        if s in seen:
            continue
        comp, stack = 1, [s]
        seen.add(s)
        while stack:
            x = stack.pop()
            for y in nb[x]:
                if y not in seen:
                    seen.add(y)
                    comp += 1
                    stack.append(y)
        sizes.append(comp)
    return sizes


# --- ordered tiles ----------------------------------------------------------

def _reach(F: KGraph):
    """reach[a] = largest b such that the interval [a, b) is independent."""
    nb = _shadow(F)
    n = F.n
    reach = [0] * (n + 1)
    for a in range(n + 1):
        b = a
        while b < n and not any(a <= u < b for u in nb[b]):
            b += 1
        reach[a] = b
    return reach


def _independent_interval(nb, a, b):
    return not any(a <= u < b for v in range(a, b) for u in nb[v])


def interval_chromatic(F: KGraph):
    """Least number of independent intervals; returns (r, intervals)."""
    n = F.n
    if n == 0:
        return 0, []
    reach = _reach(F)
    best = [math.inf] * (n + 1)
    back = [None] * (n + 1)
    best[0] = 0
    for a in range(n):
        if best[a] == math.inf:
            continue
        for b in range(a + 1, reach[a] + 1):
            if best[a] + 1 < best[b]:
                best[b] = best[a] + 1
                back[b] = a
    intervals, b = [], n
    while b:
        a = back[b]
        intervals.append(list(range(a, b)))
        b = a
    intervals.reverse()
    return int(best[n]), intervals


def iter_interval_colorings(F: KGraph, r):
    """All interval r-colourings, empty intervals allowed, as cut lists.

    Intervals are [c_i, c_{i+1}) with c_0 = 0 and c_r = n.
    """
    n = F.n
    nb = _shadow(F)
    reach = _reach(F)

    def rec(i, start, cuts):
        if i == r - 1:
            if reach[start] >= n:
                yield cuts + [n]
            return
        for end in range(start, reach[start] + 1):
            yield from rec(i + 1, end, cuts + [end])

    for cuts in rec(0, 0, [0]):
        yield cuts


def _classes(cuts):
    return [list(range(cuts[i], cuts[i + 1])) for i in range(len(cuts) - 1)]


def is_j_flexible(F: KGraph, j: int):
    """Returns (flag, witnesses) with one (colouring, i, v) per index i."""
    if j not in (0, 1):
        raise InputError("j must be 0 or 1")
    r, _ = interval_chromatic(F)
    colours = r + j
    nb = _shadow(F)
    witnesses = []
    for i in range(colours - 1):       # 0-based i stands for V_{i+1}
        found = None
        for cuts in iter_interval_colorings(F, colours):
            a, b, c = cuts[i], cuts[i + 1], cuts[i + 2]
            if b == a:
                continue
            v = b - 1                  # the largest vertex of V_i
            if _independent_interval(nb, v, c):
                found = {"classes": _classes(cuts), "i": i + 1, "v": v}
                break
        if found is None:
            return False, witnesses + [{"i": i + 1, "v": None}]
        witnesses.append(found)
    return True, witnesses


def is_ordered_cone(F: KGraph):
    """Returns (flag, witnesses) keyed by the pair (i, j), 1-based."""
    r, _ = interval_chromatic(F)
    if r < 2:
        raise InputError(f"ordered cone needs interval chromatic number >= 2, got {r}")
    nb = _shadow(F)
    colourings = list(iter_interval_colorings(F, r + 1))
    witnesses = {}
    for i in range(r + 1):
        for jj in range(r + 1):
            if i == jj:
                continue
            hit = None
            for cuts in colourings:
                Vi = range(cuts[i], cuts[i + 1])
                if len(Vi) != 1:
                    continue
                x = Vi[0]
                Vj = set(range(cuts[jj], cuts[jj + 1]))
                if not (nb[x] & Vj):
                    hit = _classes(cuts)
                    break
            if hit is None:
                return False, {"failing": [i + 1, jj + 1]}
            witnesses[f"{i + 1},{jj + 1}"] = hit
    return True, witnesses


def ordered_blowup_host(part_sizes, sigma, b, k=2):
    """Complete multipartite host whose parts (scaled by b) appear in sigma order."""
    sizes = [part_sizes[s] * b for s in sigma]
    return complete_partite(sizes, k)


def bottlegraph_check(part_sizes, F: KGraph, b_max: int, budget=10**6):
    """For each ordering sigma of the parts, the least b <= b_max for which the
    sigma-ordered blow-up has a perfect F-tiling by order-preserving copies.

    Returns (verdict, per_sigma) where verdict is True when every sigma
    succeeded and None (inconclusive) otherwise.
    """
    from .homlift import ordered_hom_digraph
    from .solver import FOUND, exact_perfect_matching

    per_sigma = {}
    for sigma in permutations(range(len(part_sizes))):
        hit = None
        for b in range(1, b_max + 1):
            host = ordered_blowup_host(part_sizes, sigma, b, F.k)
            if host.n % F.n:
                continue
            rep = exact_perfect_matching(ordered_hom_digraph(F, host), budget=budget)
            if rep.outcome == FOUND:
                hit = b
                break
        per_sigma[sigma] = hit
    verdict = True if per_sigma and all(v is not None for v in per_sigma.values()) else None
    return verdict, per_sigma


def ordered_crit_upper_bound(F: KGraph, max_parts=None, max_part_size=3, b_max=2,
                             budget=10**5):
    """min chi_crit(B) over complete multipartite bottlegraphs found in range.

    Candidates have between chi^<(F)-1 (at least 2) and ``max_parts`` parts
    with sizes up to ``max_part_size``.  The result is an upper bound only.
    """
    r, _ = interval_chromatic(F)
    max_parts = r if max_parts is None else max_parts
    best = None
    tried = 0
    for parts in range(max(2, r - 1), max_parts + 1):
        for sizes in product(range(1, max_part_size + 1), repeat=parts):
            if list(sizes) != sorted(sizes):
                continue
            total = sum(sizes)
            crit = Fraction(parts - 1) / (1 - Fraction(min(sizes), total))
            if best is not None and crit >= best:
                continue
            tried += 1
            verdict, _ = bottlegraph_check(list(sizes), F, b_max, budget)
            if verdict:
                best = crit
    limits = {"max_parts": max_parts, "max_part_size": max_part_size,
              "b_max": b_max, "candidates": tried}
    return best, limits


@dataclass(frozen=True)
class OrderedProfile:
    chi_lt: int
    coloring: list
    flexible0: bool
    flexible1: bool
    ordered_cone: object        # bool, or None when chi^< < 2
    crit_bound: Fraction = None
    limits: dict = field(default_factory=dict)

    def to_json(self):
        return {"chi_lt": self.chi_lt, "coloring": self.coloring,
                "flexible0": self.flexible0, "flexible1": self.flexible1,
                "ordered_cone": self.ordered_cone,
                "crit_upper_bound": None if self.crit_bound is None else _fs(self.crit_bound),
                "limits": self.limits}


def ordered_profile(F: KGraph, search_crit=True, **search) -> OrderedProfile:
    r, intervals = interval_chromatic(F)
    flex0, _ = is_j_flexible(F, 0)
    flex1, _ = is_j_flexible(F, 1)
    cone = is_ordered_cone(F)[0] if r >= 2 else None
    bound, limits = (ordered_crit_upper_bound(F, **search) if search_crit else (None, {}))
    return OrderedProfile(r, intervals, flex0, flex1, cone, bound, limits)


# --- uniform density --------------------------------------------------------

def _ordered_counts(G: KGraph, rest_sets):
    """c[v] = number of ordered edge tuples (v, v_2..v_k), v_i in X_i."""
    c = [0] * G.n
    for e in G.edges:
        for v in e:
            others = [u for u in e if u != v]
            for perm in permutations(others):
                if all(u in X for u, X in zip(perm, rest_sets)):
                    c[v] += 1
    return c


def edge_tuple_count(G: KGraph, sets):
    """e_G(X_1..X_k): ordered tuples of distinct vertices forming an edge."""
    total = 0
    for e in G.edges:
        for perm in permutations(e):
            if all(u in X for u, X in zip(perm, sets)):
                total += 1
    return total


@dataclass(frozen=True)
class DensityResult:
    holds: bool
    witness: tuple = None   # violating (X_1, ..., X_k)
    slack: Fraction = None
    mode: str = "exact"
    seed: int = None
    checked: int = 0


def is_uniformly_dense(G: KGraph, eps, d, mode="exact", seed=None, trials=1000,
                       slack=None, cap=2**24) -> DensityResult:
    """Check e_G(X_1..X_k) >= d |X_1|...|X_k| - slack for subset tuples.

    ``slack`` defaults to eps * n^k.  Exact mode enumerates X_2..X_k and picks
    the worst X_1 directly (the deficit is additive over v in X_1).  Sampled
    mode tests random tuples and can only refute.
    """
    eps, d = Fraction(eps), Fraction(d)
    n, k = G.n, G.k
    slack = eps * n**k if slack is None else Fraction(slack)
    if mode == "exact":
        if 2 ** ((k - 1) * n) > cap:
            raise ResourceLimitError(f"2^{(k - 1) * n} subset tuples exceed cap {cap}", cap)
        subsets = [frozenset(c for c in range(n) if mask >> c & 1) for mask in range(2**n)]
        checked = 0
        for rest in product(subsets, repeat=k - 1):
            checked += 1
            P = math.prod(len(X) for X in rest)
            c = _ordered_counts(G, rest)
            X1 = frozenset(v for v in range(n) if c[v] - d * P < 0)
            deficit = sum(c[v] - d * P for v in X1)
            if deficit < -slack:
                return DensityResult(False, (tuple(sorted(X1)),) + tuple(tuple(sorted(X)) for X in rest),
                                     slack, "exact", None, checked)
        return DensityResult(True, None, slack, "exact", None, checked)
    if mode != "sampled":
        raise InputError(f"unknown mode {mode!r}")
    if seed is None:
        raise InputError("sampled mode requires a seed")
    rng = np.random.default_rng(seed)
    for t in range(trials):
        sets = [frozenset(np.flatnonzero(rng.random(n) < 0.5).tolist()) for _ in range(k)]
        lhs = edge_tuple_count(G, sets)
        if lhs < d * math.prod(len(X) for X in sets) - slack:
            return DensityResult(False, tuple(tuple(sorted(X)) for X in sets),
                                 slack, "sampled", seed, t + 1)
    return DensityResult(True, None, slack, "sampled", seed, trials)
