"""Space, divisibility and cover properties of digraphs with certificates.

* space(rho): the fractional matching number is at least (1-rho) n / m.
* div: the edge lattice contains every transferral 1_v - 1_u.
* cov: every vertex lies in an edge in which it appears exactly once.

Each checker returns a :class:`Certificate` whose witness can be re-verified
without trusting the checker (see :mod:`tilinglab.certificates`).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Callable

import numpy as np

from .core import Digraph, KGraph, Partition, delete, induced, multiplicity
from .errors import InputError, ResourceLimitError
from .formats import fraction_str
from .lattice import (
    coefficients_from_basis,
    lattice_basis,
    separating_vector,
    transferral,
)
from .lp import FractionalCover, FractionalMatching, solve_matching_lp

DEFAULT_SUBSET_CAP = 10**6


def _as_digraph(H):
    return getattr(H, "digraph", H)


@dataclass
class Certificate:
    property: str
    holds: bool
    witness: dict = field(default_factory=dict)
    instance_hash: str = None
    seed: int = None

    def to_json(self):
        data = {"schema": "tiling-lab/1", "property": self.property,
                "holds": self.holds, "witness": self.witness}
        if self.instance_hash is not None:
            data["instance_hash"] = self.instance_hash
        if self.seed is not None:
            data["seed"] = self.seed
        return data

    @classmethod
    def from_json(cls, data):
        try:
            return cls(data["property"], bool(data["holds"]), data.get("witness", {}),
                       data.get("instance_hash"), data.get("seed"))
        except (KeyError, TypeError) as exc:
            raise InputError(f"malformed certificate: {exc}") from None


# --- fractional matchings ---------------------------------------------------

def max_fractional_matching(H):
    H = _as_digraph(H)
    sol = solve_matching_lp(H)
    return sol.matching.size, sol.matching


def min_fractional_cover(H):
    H = _as_digraph(H)
    sol = solve_matching_lp(H)
    assert sol.cover.size == sol.matching.size
    return sol.cover.size, sol.cover


def matching_witness(fm: FractionalMatching):
    return {"size": fraction_str(fm.size),
            "weights": [[list(e), fraction_str(w)] for e, w in sorted(fm.weights.items())]}


def cover_witness(fc: FractionalCover):
    return {"size": fraction_str(fc.size),
            "cover": [fraction_str(c) for c in fc.weights]}


def has_space(H, rho=0) -> Certificate:
    H = _as_digraph(H)
    rho = Fraction(rho)
    if not 0 <= rho <= 1:
        raise InputError("rho must lie in [0, 1]")
    sol = solve_matching_lp(H)
    target = (1 - rho) * H.n / H.m
    holds = sol.matching.size >= target
    if holds:
        witness = matching_witness(sol.matching)
    else:
        witness = cover_witness(sol.cover)
    witness["rho"] = fraction_str(rho)
    witness["target"] = fraction_str(target)
    return Certificate("space", holds, witness)


# --- lattices ---------------------------------------------------------------

def _roots_and_members(n, partition):
    if partition is None:
        parts = [list(range(n))] if n else []
    else:
        if set(partition.ground) != set(range(n)):
            raise InputError("partition ground set differs from V(H)")
        parts = [sorted(p) for p in partition.parts]
    return [(p[0], p[1:]) for p in parts]


def is_lattice_complete(H, partition: Partition = None) -> Certificate:
    """Check 1_v - 1_root is in L(H) for every v, one root per part.

    On failure the witness holds the pair and a rational vector y with y.1_e
    integral on every edge but y.(1_v - 1_root) not integral.
    """
    H = _as_digraph(H)
    B = lattice_basis(H)
    combos = []
    for root, members in _roots_and_members(H.n, partition):
        for v in members:
            b = transferral(H.n, v, root)
            coeffs = coefficients_from_basis(B, b)
            if coeffs is None:
                y = separating_vector(B, b)
                witness = {"pair": [root, v], "dual": [fraction_str(x) for x in y]}
                if partition is not None:
                    witness["parts"] = [sorted(p) for p in partition.parts]
                return Certificate("div", False, witness)
            combos.append({"pair": [root, v],
                           "coefficients": [[list(e), c] for e, c in coeffs.items()]})
    witness = {"transferrals": combos}
    if partition is not None:
        witness["parts"] = [sorted(p) for p in partition.parts]
    return Certificate("div", True, witness)


# --- cover -----------------------------------------------------------------

def is_covered(H) -> Certificate:
    H = _as_digraph(H)
    witness_edge = {}
    for e in H.sorted_edges():
        for v in set(e):
            if v not in witness_edge and multiplicity(v, e) == 1:
                witness_edge[v] = e
    for v in range(H.n):
        if v not in witness_edge:
            return Certificate("cov", False, {"vertex": v})
    return Certificate("cov", True, {"edges": [list(witness_edge[v]) for v in range(H.n)]})


# --- properties as predicates ----------------------------------------------

@dataclass(frozen=True)
class Property:
    """A named digraph predicate; ``name`` is used in reports and the CLI."""

    name: str
    check: Callable

    def __call__(self, H):
        return self.check(_as_digraph(H))


def space_property(rho=0):
    rho = Fraction(rho)
    return Property(f"spa({fraction_str(rho)})", lambda H: has_space(H, rho).holds)


def div_property(partition: Partition = None):
    if partition is None:
        return Property("div", lambda H: is_lattice_complete(H).holds)

    def check(H):
        # restrict the partition to the (possibly relabelled) vertices of H
        parts = []
        for p in partition.parts:
            local = [i for i, lab in enumerate(H.labels) if lab in p]
            if local:
                parts.append(local)
        return is_lattice_complete(H, Partition(tuple(parts), frozenset(range(H.n)))).holds

    return Property("div(U)", check)


def cov_property():
    return Property("cov", lambda H: is_covered(H).holds)


def fissile_property():
    from .homlift import is_fissile

    return Property("fissile", lambda H: is_fissile(H)[0])


def intersect(*props):
    return Property("&".join(p.name for p in props),
                    lambda H: all(p(H) for p in props))


def all_property(rho=0):
    return intersect(space_property(rho), div_property(), cov_property())


def parse_properties(spec: str, rho=0, partition=None):
    """Parse a comma list from {spa, div, divU, cov, fissile, all}."""
    props = []
    for name in spec.split(","):
        name = name.strip()
        if name in ("spa", "space"):
            props.append(space_property(rho))
        elif name == "div":
            props.append(div_property())
        elif name in ("divU", "div(U)"):
            if partition is None:
                raise InputError("div(U) needs a partition")
            props.append(div_property(partition))
        elif name == "cov":
            props.append(cov_property())
        elif name == "fissile":
            props.append(fissile_property())
        elif name == "all":
            props.append(all_property(rho))
        else:
            raise InputError(f"unknown property {name!r}")
    if not props:
        raise InputError("no properties given")
    return props[0] if len(props) == 1 else intersect(*props)


# --- robustness -------------------------------------------------------------

def _deletion_sets(n, q, cap):
    total = sum(comb(n, i) for i in range(q + 1))
    if total > cap:
        raise ResourceLimitError(f"{total} deletion sets exceed cap {cap}", cap)
    for size in range(q + 1):
        yield from combinations(range(n), size)


def del_q(H, prop, q, cap=DEFAULT_SUBSET_CAP):
    """True iff H - X satisfies ``prop`` for every X of at most q vertices.

    Returns ``(holds, failing_set_or_None)``.
    """
    H = _as_digraph(H)
    if not 0 <= q <= H.n:
        raise InputError(f"q={q} outside 0..{H.n}")
    for X in _deletion_sets(H.n, q, cap):
        if not prop(delete(H, X)):
            return False, list(X)
    return True, None


def robust_matching_hypothesis(H, cap=DEFAULT_SUBSET_CAP, budget=None):
    """True iff H - X has a perfect matching for every m-set X."""
    from .solver import exact_perfect_matching

    H = _as_digraph(H)
    if H.n <= H.m:
        raise InputError("robust matching hypothesis needs v(H) > m")
    if (H.n - H.m) % H.m:
        return False
    if comb(H.n, H.m) > cap:
        raise ResourceLimitError(f"C({H.n},{H.m}) deletions exceed cap {cap}", cap)
    kwargs = {} if budget is None else {"budget": budget}
    for X in combinations(range(H.n), H.m):
        report = exact_perfect_matching(delete(H, X), **kwargs)
        if report.outcome == "inconclusive":
            raise ResourceLimitError("solver budget exhausted in robust matching check", budget)
        if report.outcome != "found":
            return False
    return True


# --- property graphs --------------------------------------------------------

@dataclass(frozen=True)
class SampledDegrees:
    fractions: dict  # vertex -> Fraction of sampled s-sets through it in the property
    trials: int
    seed: int

    @property
    def min_fraction(self):
        return min(self.fractions.values()) if self.fractions else Fraction(1)


def property_graph(H, prop, s, mode="exact", seed=None, trials=1000, vertices=None,
                   cap=DEFAULT_SUBSET_CAP):
    """The s-graph of s-sets S whose induced digraph H[S] satisfies ``prop``.

    ``mode="sampled"`` instead estimates, for each vertex (or each of
    ``vertices``), the fraction of uniformly random s-sets through it whose
    induced digraph has the property.  Sampling is driven by ``seed``.
    """
    H = _as_digraph(H)
    if not H.m <= s <= H.n:
        raise InputError(f"need m <= s <= v(H), got s={s}")
    if mode == "exact":
        if comb(H.n, s) > cap:
            raise ResourceLimitError(f"C({H.n},{s}) s-sets exceed cap {cap}", cap)
        edges = [S for S in combinations(range(H.n), s) if prop(induced(H, S))]
        return KGraph(s, H.n, frozenset(edges))
    if mode != "sampled":
        raise InputError(f"unknown mode {mode!r}")
    if seed is None:
        raise InputError("sampled mode requires a seed")
    targets = list(range(H.n)) if vertices is None else sorted(vertices)
    children = np.random.SeedSequence(seed).spawn(len(targets))
    fractions = {}
    for v, child in zip(targets, children):
        rng = np.random.default_rng(child)
        others = np.array([u for u in range(H.n) if u != v])
        hits = 0
        for _ in range(trials):
            rest = rng.choice(others, size=s - 1, replace=False) if s > 1 else []
            S = [v] + [int(u) for u in rest]
            hits += bool(prop(induced(H, S)))
        fractions[v] = Fraction(hits, trials) if trials else Fraction(0)
    return SampledDegrees(fractions, trials, seed)


# --- proportionality --------------------------------------------------------

def is_proportional(x, partition: Partition) -> bool:
    """U-proportionality of a vertex set, an edge tuple, or a digraph."""
    V = partition.ground
    N = len(V)
    if isinstance(x, (Digraph,)) or hasattr(x, "digraph"):
        H = _as_digraph(x)
        if set(range(H.n)) != set(V):
            raise InputError("digraph vertex set differs from the partition ground set")
        return all(_tuple_proportional(e, partition, N) for e in H.edges)
    if isinstance(x, tuple):
        return _tuple_proportional(x, partition, N)
    S = set(x)
    if not S <= set(V):
        raise InputError("set is not contained in the ground set")
    if not S:
        return True
    return all(Fraction(len(U & S), len(S)) == Fraction(len(U), N) for U in partition.parts)


def _tuple_proportional(e, partition, N):
    m = len(e)
    for U in partition.parts:
        if Fraction(sum(1 for v in e if v in U), m) != Fraction(len(U), N):
            return False
    return True
