"""Hypergraphs, directed hypergraphs and the basic operations on them.

Vertices are the integers ``0..n-1``.  Substructures produced by
:func:`induced` or :func:`link_graph` are relabelled densely and carry a
``labels`` tuple mapping each local vertex to its label in the original
structure, so certificates can always be reported in original labels.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from typing import Iterable, Sequence

from .errors import InputError, ResourceLimitError

DEFAULT_CLIQUE_CAP = 10**7


def _identity(n):
    return tuple(range(n))


@dataclass(frozen=True)
class KGraph:
    """A k-uniform hypergraph; edges are stored as sorted k-tuples."""

    k: int
    n: int
    edges: frozenset = frozenset()
    labels: tuple = None

    def __post_init__(self):
        if self.k < 1 or self.n < 0:
            raise InputError(f"bad kgraph header k={self.k} n={self.n}")
        canon = set()
        for e in self.edges:
            t = tuple(sorted(e))
            if len(t) != self.k or len(set(t)) != self.k:
                raise InputError(f"edge {e!r} is not a {self.k}-set")
            if t[0] < 0 or t[-1] >= self.n:
                raise InputError(f"edge {e!r} has a vertex outside 0..{self.n - 1}")
            canon.add(t)
        object.__setattr__(self, "edges", frozenset(canon))
        if self.labels is None:
            object.__setattr__(self, "labels", _identity(self.n))
        elif len(self.labels) != self.n:
            raise InputError("label map length differs from n")
        else:
            object.__setattr__(self, "labels", tuple(self.labels))

    @property
    def e(self):
        return len(self.edges)

    def sorted_edges(self):
        return sorted(self.edges)

    def labeled_edges(self):
        """Edges expressed in original labels."""
        lab = self.labels
        return sorted(tuple(sorted(lab[v] for v in e)) for e in self.edges)

    def has_edge(self, vertices):
        return tuple(sorted(vertices)) in self.edges

    def vertices(self):
        return range(self.n)

    def neighbours(self):
        """Vertex -> set of vertices sharing an edge (the 2-shadow)."""
        nb = [set() for _ in range(self.n)]
        for e in self.edges:
            for u in e:
                nb[u].update(e)
        for u in range(self.n):
            nb[u].discard(u)
        return nb

    def degrees(self):
        deg = [0] * self.n
        for e in self.edges:
            for u in e:
                deg[u] += 1
        return deg


@dataclass(frozen=True)
class Digraph:
    """An m-uniform directed hypergraph.

    Edges are m-tuples that may repeat vertices.
    """

    m: int
    n: int
    edges: frozenset = frozenset()
    labels: tuple = None

    def __post_init__(self):
        if self.m < 1 or self.n < 0:
            raise InputError(f"bad digraph header m={self.m} n={self.n}")
        edges = frozenset(tuple(e) for e in self.edges)
        for e in edges:
            if len(e) != self.m:
                raise InputError(f"edge {e!r} does not have length {self.m}")
            for v in e:
                if not 0 <= v < self.n:
                    raise InputError(f"edge {e!r} has a vertex outside 0..{self.n - 1}")
        object.__setattr__(self, "edges", edges)
        if self.labels is None:
            object.__setattr__(self, "labels", _identity(self.n))
        elif len(self.labels) != self.n:
            raise InputError("label map length differs from n")
        else:
            object.__setattr__(self, "labels", tuple(self.labels))

    @property
    def e(self):
        return len(self.edges)

    def sorted_edges(self):
        return sorted(self.edges)

    def one_to_one_edges(self):
        return [e for e in self.sorted_edges() if len(set(e)) == self.m]

    def vertices(self):
        return range(self.n)

    def index_of(self, label):
        return self.labels.index(label)


@dataclass(frozen=True)
class Partition:
    """Disjoint non-empty parts covering ``ground``."""

    parts: tuple
    ground: frozenset = field(default=None)

    def __post_init__(self):
        parts = tuple(frozenset(p) for p in self.parts)
        seen = set()
        for p in parts:
            if not p:
                raise InputError("partition has an empty part")
            if seen & p:
                raise InputError("partition parts overlap")
            seen |= p
        ground = frozenset(seen) if self.ground is None else frozenset(self.ground)
        if seen != ground:
            raise InputError("partition does not cover its ground set")
        object.__setattr__(self, "parts", parts)
        object.__setattr__(self, "ground", ground)

    def part_of(self, v):
        for i, p in enumerate(self.parts):
            if v in p:
                return i
        raise InputError(f"vertex {v} not in the partition's ground set")


@dataclass(frozen=True)
class Matching:
    edges: tuple

    def vertices(self):
        return frozenset(v for e in self.edges for v in e)

    def validate(self, H: Digraph, perfect=False):
        """Raise InputError unless this is a (perfect) matching of H."""
        seen = set()
        for e in self.edges:
            e = tuple(e)
            if e not in H.edges:
                raise InputError(f"{e} is not an edge")
            if len(set(e)) != len(e):
                raise InputError(f"{e} is not one-to-one")
            if seen.intersection(e):
                raise InputError(f"{e} overlaps an earlier edge")
            seen.update(e)
        if perfect and len(seen) != H.n:
            raise InputError("matching is not perfect")
        return True


@dataclass(frozen=True)
class Tiling:
    """Each embedding is a tuple: tile vertex i -> host vertex."""

    embeddings: tuple

    def vertices(self):
        return frozenset(v for emb in self.embeddings for v in emb)

    def validate(self, F: KGraph, G: KGraph, perfect=False):
        seen = set()
        for emb in self.embeddings:
            if len(emb) != F.n or len(set(emb)) != F.n:
                raise InputError(f"embedding {emb} is not injective on V(F)")
            for f in F.edges:
                if not G.has_edge(emb[w] for w in f):
                    raise InputError(f"embedding {emb} misses the image of {f}")
            if seen.intersection(emb):
                raise InputError(f"embedding {emb} overlaps another copy")
            seen.update(emb)
        if perfect and len(seen) != G.n:
            raise InputError("tiling is not perfect")
        return True


def multiplicity(v, e):
    return sum(1 for x in e if x == v)


def indicator_vector(e, n):
    vec = [0] * n
    for v in e:
        if not 0 <= v < n:
            raise InputError(f"vertex {v} out of range for n={n}")
        vec[v] += 1
    return vec


def induced(H: Digraph, S: Iterable[int]) -> Digraph:
    """Sub-digraph on S (local ids 0..|S|-1, in increasing order of S)."""
    S = sorted(set(S))
    for v in S:
        if not 0 <= v < H.n:
            raise InputError(f"vertex {v} not in V(H)")
    pos = {v: i for i, v in enumerate(S)}
    edges = [tuple(pos[v] for v in e) for e in H.edges if all(v in pos for v in e)]
    return Digraph(H.m, len(S), frozenset(edges), tuple(H.labels[v] for v in S))


def delete(H: Digraph, X: Iterable[int]) -> Digraph:
    X = set(X)
    return induced(H, [v for v in range(H.n) if v not in X])


def min_degree(G: KGraph, d: int) -> int:
    """Minimum number of edges through a d-set; d=0 gives e(G)."""
    if not 0 <= d <= G.k - 1:
        raise InputError(f"d={d} outside 0..{G.k - 1}")
    if d == 0:
        return G.e
    if G.n < d:
        raise InputError("fewer than d vertices")
    counts = Counter()
    for e in G.edges:
        counts.update(combinations(e, d))
    if len(counts) < comb(G.n, d):
        return 0
    return min(counts.values())


def link_graph(G: KGraph, D: Iterable[int]) -> KGraph:
    """The (k-|D|)-graph on V(G) minus D with edge Y iff D+Y is an edge."""
    D = set(D)
    if len(D) >= G.k:
        raise InputError(f"|D|={len(D)} must be smaller than k={G.k}")
    rest = [v for v in range(G.n) if v not in D]
    pos = {v: i for i, v in enumerate(rest)}
    edges = []
    for e in G.edges:
        if D.issubset(e):
            edges.append(tuple(pos[v] for v in e if v not in D))
    return KGraph(G.k - len(D), len(rest), frozenset(edges),
                  tuple(G.labels[v] for v in rest))


class UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            if ra < rb:
                self.parent[rb] = ra
            else:
                self.parent[ra] = rb

    def components(self):
        groups = {}
        for v in range(len(self.parent)):
            groups.setdefault(self.find(v), []).append(v)
        return sorted(groups.values())


def iter_cliques(G: KGraph, size: int, cap: int = DEFAULT_CLIQUE_CAP):
    """Yield all k-uniform cliques on ``size`` vertices as sorted tuples.

    A set is a clique when every k-subset is an edge.  Candidates are kept as
    the set of vertices completing every current (k-1)-subset.
    """
    k = G.k
    if size < k:
        return
    nb = G.neighbours()
    count = 0

    def extend(current, candidates):
        nonlocal count
        if len(current) == size:
            count += 1
            if count > cap:
                raise ResourceLimitError(f"more than {cap} cliques of size {size}", cap)
            yield tuple(current)
            return
        for v in sorted(candidates):
            if v <= (current[-1] if current else -1):
                continue
            if k > 2 and len(current) >= k - 1:
                ok = all(G.has_edge(sub + (v,)) for sub in combinations(current, k - 1))
                if not ok:
                    continue
            current.append(v)
            yield from extend(current, candidates & nb[v])
            current.pop()

    for v in range(G.n):
        yield from extend([v], nb[v] | set())


def clique_connectivity(G: KGraph, ell: int, cap: int = DEFAULT_CLIQUE_CAP):
    """Components of K_ell(G): join every pair inside a k-uniform ell-clique."""
    if ell < G.k:
        raise InputError(f"ell={ell} must be at least k={G.k}")
    uf = UnionFind(G.n)
    for clique in iter_cliques(G, ell, cap):
        first = clique[0]
        for v in clique[1:]:
            uf.union(first, v)
    return uf.components()


def complete_kgraph(n, k=2):
    return KGraph(k, n, frozenset(combinations(range(n), k)))


def cycle_graph(n):
    return KGraph(2, n, frozenset((i, (i + 1) % n) for i in range(n)))


def path_graph(n):
    return KGraph(2, n, frozenset((i, i + 1) for i in range(n - 1)))


def complete_partite(part_sizes: Sequence[int], k=None):
    """Complete multipartite k-graph: every k-set meeting k distinct parts.

    ``k`` defaults to the number of parts.
    """
    parts, start = [], 0
    for size in part_sizes:
        parts.append(range(start, start + size))
        start += size
    k = len(parts) if k is None else k
    edges = set()
    for chosen in combinations(range(len(parts)), k):
        _product_edges(edges, [parts[i] for i in chosen], [])
    return KGraph(k, start, frozenset(edges))


def _product_edges(out, parts, prefix):
    if not parts:
        out.add(tuple(sorted(prefix)))
        return
    for v in parts[0]:
        prefix.append(v)
        _product_edges(out, parts[1:], prefix)
        prefix.pop()


def disjoint_union(*graphs: KGraph) -> KGraph:
    k = graphs[0].k
    edges, offset = set(), 0
    for g in graphs:
        if g.k != k:
            raise InputError("uniformity mismatch")
        edges.update(tuple(v + offset for v in e) for e in g.edges)
        offset += g.n
    return KGraph(k, offset, frozenset(edges))
