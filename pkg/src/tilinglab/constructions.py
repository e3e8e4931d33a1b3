"""Generators for the extremal host constructions and for blow-ups.

Each host generator returns a :class:`Construction` holding the graph, the
named vertex sets and an independent edge predicate, so tests can re-derive
the edge set from the parameters alone.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product

from .core import Digraph, KGraph, complete_partite
from .errors import InputError
from .solver import FOUND, INCONCLUSIVE, NONE

SQRT2_MINUS_1 = math.sqrt(2) - 1


@dataclass(frozen=True)
class ConstructionSpec:
    kind: str
    params: dict = field(default_factory=dict)

    def to_json(self):
        out = {}
        for key, val in self.params.items():
            if isinstance(val, Fraction):
                val = str(val)
            elif isinstance(val, tuple):
                val = list(val)
            out[key] = val
        return {"construction": self.kind, "params": out}


@dataclass(frozen=True)
class Construction:
    graph: KGraph
    spec: ConstructionSpec
    sets: dict = field(default_factory=dict)   # name -> sorted vertex list
    special: int = None                         # distinguished vertex, if any

    def to_json(self):
        out = self.spec.to_json()
        out["sets"] = {k: list(v) for k, v in self.sets.items()}
        out["n"] = self.graph.n
        out["k"] = self.graph.k
        out["edges"] = self.graph.e
        if self.special is not None:
            out["special"] = self.special
        return out


def _ceil_alpha_n(n):
    """ceil((sqrt2 - 1) n) computed exactly: the least a with (a + n)^2 >= 2 n^2."""
    a = math.isqrt(2 * n * n) - n
    while (a + n) ** 2 < 2 * n * n:
        a += 1
    while a > 0 and (a - 1 + n) ** 2 >= 2 * n * n:
        a -= 1
    return a


# --- cover barrier -------------------------------------------------------

def cover_barrier_sets(n, k):
    if k < 3:
        raise InputError("the cover barrier needs k >= 3")
    a = _ceil_alpha_n(n)
    b = n - 2 * a - (k - 2)
    if n < k + 4 or b < 0:
        raise InputError(f"n={n} too small for the cover barrier with k={k}")
    A1 = list(range(0, a))
    A2 = list(range(a, 2 * a))
    B = list(range(2 * a, 2 * a + b))
    T = list(range(2 * a + b, n))
    return A1, A2, B, T


def cover_barrier_predicate(n, k):
    A1, A2, B, T = cover_barrier_sets(n, k)
    A1s, A2s, Bs, Ts = set(A1), set(A2), set(B), set(T)
    v = T[0]
    Tp = Ts - {v}

    def is_edge(S):
        S = set(S)
        inT = S & Ts
        if len(inT) <= k - 4:
            return True
        rest = S - Ts
        if inT == Ts:
            return len(rest & A1s) == 1 and len(rest & A2s) == 1
        if inT == Tp and len(rest) == 3:
            return any(rest & Ai and rest <= Ai | Bs for Ai in (A1s, A2s))
        return False
    return is_edge


def cover_barrier(n: int, k: int = 3) -> Construction:
    """Host with no hom-lift edge using the distinguished vertex v once."""
    A1, A2, B, T = cover_barrier_sets(n, k)
    v = T[0]
    Tp = tuple(T[1:])
    edges = set()
    for a1 in A1:
        for a2 in A2:
            edges.add(tuple(sorted(T + [a1, a2])))
    for Ai in (A1, A2):
        pool = sorted(Ai + B)
        Aset = set(Ai)
        for trip in combinations(pool, 3):
            if Aset.intersection(trip):
                edges.add(tuple(sorted(Tp + trip)))
    if k >= 4:
        Tset = set(T)
        for S in combinations(range(n), k):
            if len(Tset.intersection(S)) <= k - 4:
                edges.add(S)
    G = KGraph(k, n, frozenset(edges))
    spec = ConstructionSpec("cover-barrier", {"n": n, "k": k})
    return Construction(G, spec, {"A1": A1, "A2": A2, "B": B, "T": T}, v)


# --- space barrier -------------------------------------------------------

def space_barrier_size(n, i, beta, part_sizes):
    beta = Fraction(beta)
    return math.floor(beta * sum(sorted(part_sizes)[:i]) * n) - 1


def space_barrier(n: int, k: int, i: int, beta, part_sizes) -> Construction:
    """All k-sets with at least i vertices in A, |A| = floor(beta (m_1+..+m_i) n) - 1."""
    parts = sorted(int(x) for x in part_sizes)
    beta = Fraction(beta)
    m = sum(parts)
    if not parts or parts[0] < 1:
        raise InputError("part sizes must be positive")
    if not 1 <= i <= min(k, len(parts)):
        raise InputError(f"i must lie in 1..{min(k, len(parts))}")
    if not 0 <= beta <= Fraction(1, m):
        raise InputError(f"beta must lie in [0, 1/{m}]")
    size = space_barrier_size(n, i, beta, parts)
    if size < 0 or size > n:
        raise InputError(f"|A| = {size} is not a valid set size for n={n}")
    A = list(range(size))
    edges = frozenset(S for S in combinations(range(n), k) if S[i - 1] < size) if i <= k else frozenset()
    G = KGraph(k, n, edges)
    spec = ConstructionSpec("space-barrier", {"n": n, "k": k, "i": i, "beta": beta,
                                              "parts": tuple(parts)})
    return Construction(G, spec, {"A": A, "rest": list(range(size, n))})


# --- divisibility barrier ------------------------------------------------

def divisibility_barrier(n: int, k: int = 2) -> Construction:
    """Disjoint cliques on A and B with |A| = floor(n/2) + 1."""
    if n < 2 * k:
        raise InputError("the divisibility barrier needs n >= 2k")
    a = n // 2 + 1
    A, B = list(range(a)), list(range(a, n))
    edges = set(combinations(A, k)) | set(combinations(B, k))
    G = KGraph(k, n, frozenset(edges))
    return Construction(G, ConstructionSpec("divisibility-barrier", {"n": n, "k": k}),
                        {"A": A, "B": B})


# --- bottlegraphs ----------------------------------------------------------

def downspin_sizes(ell, b):
    if ell < 2 or b < 2:
        raise InputError("downspin needs ell >= 2 and b >= 2")
    return [b + 1, b - 1] + [b] * (ell - 2)


def downspin_bottlegraph(ell: int, b: int, k: int = 2) -> Construction:
    sizes = downspin_sizes(ell, b)
    if k > ell:
        raise InputError("k exceeds the number of parts")
    G = complete_partite(sizes, k)
    return Construction(G, ConstructionSpec("downspin", {"ell": ell, "b": b, "k": k}),
                        _part_sets(sizes))


def complete_partite_host(sizes, k=None) -> Construction:
    sizes = [int(x) for x in sizes]
    if not sizes or min(sizes) < 1:
        raise InputError("part sizes must be positive")
    k = len(sizes) if k is None else k
    if not 1 <= k <= len(sizes):
        raise InputError("k must lie in 1..number of parts")
    G = complete_partite(sizes, k)
    return Construction(G, ConstructionSpec("complete-partite", {"parts": tuple(sizes), "k": k}),
                        _part_sets(sizes))


def _part_sets(sizes):
    out, start = {}, 0
    for j, s in enumerate(sizes):
        out[f"P{j}"] = list(range(start, start + s))
        start += s
    return out


# --- blow-ups -------------------------------------------------------------

def rooted_parts(r, b, X=()):
    """Part sizes for R*(b; X): roots stay singletons, the rest get b copies."""
    X = set(X)
    if any(not 0 <= x < r for x in X):
        raise InputError("root outside V(R)")
    if b < 1:
        raise InputError("b must be positive")
    parts, start = [], 0
    for v in range(r):
        size = 1 if v in X else b
        parts.append(tuple(range(start, start + size)))
        start += size
    return parts


def blow_up(R, parts=None, b=None, X=()) -> Digraph:
    """R*(parts): each vertex becomes a part; edges are the part-respecting
    tuples with equal entries wherever the edge of R repeats a vertex.

    ``parts`` lists one vertex sequence per vertex of R (or give ``b`` and
    roots ``X`` for the rooted form).
    """
    if parts is None:
        if b is None:
            raise InputError("give parts or b")
        parts = rooted_parts(R.n, b, X)
    parts = [tuple(p) for p in parts]
    if len(parts) != R.n:
        raise InputError(f"{len(parts)} parts for {R.n} vertices")
    flat = [v for p in parts for v in p]
    if any(not p for p in parts) or len(set(flat)) != len(flat):
        raise InputError("parts must be non-empty and disjoint")
    n = max(flat) + 1 if flat else 0
    edges = set()
    for e in R.edges:
        distinct = sorted(set(e))
        for choice in product(*(parts[u] for u in distinct)):
            pick = dict(zip(distinct, choice))
            edges.add(tuple(pick[u] for u in e))
    return Digraph(R.m, n, frozenset(edges))


@dataclass
class BlowupSearch:
    outcome: str
    embedding: dict = None      # blow-up vertex -> host vertex
    nodes: int = 0

    def to_json(self):
        emb = None if self.embedding is None else {str(k): v for k, v in sorted(self.embedding.items())}
        return {"outcome": self.outcome, "embedding": emb, "nodes": self.nodes}


def find_rooted_blowup(H, R, X=(), b=2, budget=10**6) -> BlowupSearch:
    """Injective homomorphism of R*(b; X) into H that fixes each root x of X
    (a vertex of R) at the host vertex x.
    """
    X = sorted(set(X))
    if any(x >= H.n for x in X):
        raise InputError("roots must be host vertices")
    if R.m != H.m:
        raise InputError("uniformity mismatch")
    parts = rooted_parts(R.n, b, X)
    P = blow_up(R, parts)
    host = set(H.edges)
    fixed = {parts[x][0]: x for x in X}
    order = sorted(range(P.n), key=lambda v: (v not in fixed, v))
    pos = {v: i for i, v in enumerate(order)}
    # check each pattern edge when its last vertex (in search order) is placed
    check_at = [[] for _ in range(P.n)]
    for e in P.edges:
        check_at[max(e, key=pos.get)].append(e)
    phi, used = {}, set()
    nodes = [0]

    def ok(v):
        return all(tuple(phi[u] for u in e) in host for e in check_at[v])

    def rec(i):
        if i == len(order):
            return True
        nodes[0] += 1
        if nodes[0] > budget:
            raise _Exhausted
        v = order[i]
        cands = [fixed[v]] if v in fixed else [w for w in range(H.n) if w not in used and w not in X]
        for w in cands:
            if w in used:
                continue
            phi[v] = w
            used.add(w)
            if ok(v) and rec(i + 1):
                return True
            used.discard(w)
            del phi[v]
        return False

    try:
        found = rec(0)
    except _Exhausted:
        return BlowupSearch(INCONCLUSIVE, None, nodes[0])
    if found:
        return BlowupSearch(FOUND, dict(phi), nodes[0])
    return BlowupSearch(NONE, None, nodes[0])


class _Exhausted(Exception):
    pass


# --- dispatch for the CLI -------------------------------------------------

BUILDERS = {
    "cover-barrier": lambda p: cover_barrier(p["n"], p["k"]),
    "space-barrier": lambda p: space_barrier(p["n"], p["k"], p["i"], p["beta"], p["parts"]),
    "divisibility-barrier": lambda p: divisibility_barrier(p["n"], p["k"]),
    "downspin": lambda p: downspin_bottlegraph(p["ell"], p["b"], p.get("k", 2)),
    "complete-partite": lambda p: complete_partite_host(p["parts"], p.get("k")),
}


def build(spec: ConstructionSpec) -> Construction:
    if spec.kind not in BUILDERS:
        raise InputError(f"unknown construction {spec.kind!r}")
    try:
        return BUILDERS[spec.kind](spec.params)
    except KeyError as exc:
        raise InputError(f"{spec.kind} needs parameter {exc.args[0]}") from None
