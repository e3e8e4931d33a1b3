"""Homomorphism digraphs H(F;G) in plain, ordered and rainbow flavours.

A homomorphism of k-graphs maps every edge of F onto an edge of G.  The
digraph H(F;G) has the tuple (phi(w_1), ..., phi(w_m)) as an edge for every
homomorphism phi, where w_1 < ... < w_m are the tile vertices by label.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product

from .core import Digraph, KGraph
from .errors import InputError, ResourceLimitError

DEFAULT_EDGE_CAP = 10**7
DEFAULT_FISSILE_VERTEX_CAP = 16


@dataclass(frozen=True)
class HomDigraph:
    digraph: Digraph
    tile_order: tuple
    flavor: str  # plain | ordered | rainbow
    tile_edges: tuple = ()
    host_n: int = 0

    @property
    def m(self):
        return self.digraph.m

    @property
    def n(self):
        return self.digraph.n

    @property
    def edges(self):
        return self.digraph.edges


@dataclass(frozen=True)
class GraphFamily:
    """Graphs G_1..G_l on a shared vertex set; colour j is G_{j+1}."""

    graphs: tuple

    def __post_init__(self):
        graphs = tuple(self.graphs)
        if not graphs:
            raise InputError("empty graph family")
        k, n = graphs[0].k, graphs[0].n
        for g in graphs:
            if g.k != k or g.n != n:
                raise InputError("family members must share k and the vertex set")
        object.__setattr__(self, "graphs", graphs)

    @property
    def k(self):
        return self.graphs[0].k

    @property
    def n(self):
        return self.graphs[0].n

    def __len__(self):
        return len(self.graphs)


def _check_pair(F: KGraph, G: KGraph):
    if F.k != G.k:
        raise InputError(f"uniformity mismatch: tile k={F.k}, host k={G.k}")
    if F.n < 1:
        raise InputError("tile must have at least one vertex")


def iter_homomorphisms(F: KGraph, targets, host_n, ordered=False):
    """Yield homomorphisms as tuples phi[w] for w = 0..v(F)-1.

    ``targets`` maps each tile edge (sorted tuple) to the set of host edges it
    may land on.  Tile vertices are assigned in label order; an edge is tested
    once its largest vertex is assigned, and candidates for a vertex are cut
    down to host vertices adjacent to the images of earlier tile neighbours.
    """
    m = F.n
    closing = [[] for _ in range(m)]
    for f in F.sorted_edges():
        closing[f[-1]].append(f)
    nb = {}
    seen_targets = {id(t): t for t in targets.values()}
    for allowed in seen_targets.values():
        for e in allowed:
            for a in e:
                for b in e:
                    if a != b:
                        nb.setdefault(a, set()).add(b)
    earlier = [set() for _ in range(m)]
    for f in F.edges:
        for a in f:
            for b in f:
                if b < a:
                    earlier[a].add(b)
    phi = [0] * m
    all_vertices = range(host_n)

    def rec(w):
        if w == m:
            yield tuple(phi)
            return
        cand = None
        for u in earlier[w]:
            s = nb.get(phi[u], set())
            cand = set(s) if cand is None else cand & s
        if cand is None:
            cand = all_vertices
        else:
            cand = sorted(cand)
        lo = phi[w - 1] if (ordered and w > 0) else -1
        for x in cand:
            if x < lo:
                continue
            phi[w] = x
            ok = True
            for f in closing[w]:
                image = tuple(sorted(phi[a] for a in f))
                if image not in targets[f]:
                    ok = False
                    break
            if ok:
                yield from rec(w + 1)

    yield from rec(0)


def _collect(gen, cap):
    edges = []
    for e in gen:
        edges.append(e)
        if len(edges) > cap:
            raise ResourceLimitError(f"homomorphism digraph exceeds edge cap {cap}", cap)
    return edges


def hom_digraph(F: KGraph, G: KGraph, cap: int = DEFAULT_EDGE_CAP) -> HomDigraph:
    _check_pair(F, G)
    targets = {f: G.edges for f in F.edges}
    edges = _collect(iter_homomorphisms(F, targets, G.n), cap)
    return HomDigraph(Digraph(F.n, G.n, frozenset(edges)), tuple(range(F.n)),
                      "plain", tuple(F.sorted_edges()), G.n)


def ordered_hom_digraph(F: KGraph, G: KGraph, cap: int = DEFAULT_EDGE_CAP) -> HomDigraph:
    """Edges of H(F;G) from maps with phi(u) <= phi(v) whenever u < v."""
    _check_pair(F, G)
    targets = {f: G.edges for f in F.edges}
    edges = _collect(iter_homomorphisms(F, targets, G.n, ordered=True), cap)
    return HomDigraph(Digraph(F.n, G.n, frozenset(edges)), tuple(range(F.n)),
                      "ordered", tuple(F.sorted_edges()), G.n)


def rainbow_digraph(F: KGraph, family: GraphFamily, cap: int = DEFAULT_EDGE_CAP) -> HomDigraph:
    """The (m+h)-digraph on V plus colour vertices n..n+l-1.

    Each edge lists the images of the tile vertices followed by one colour per
    tile edge (tile edges in sorted order); tile edge f may take colour c only
    if its image is an edge of G_c.
    """
    if not isinstance(family, GraphFamily):
        family = GraphFamily(tuple(family))
    if F.k != family.k:
        raise InputError(f"uniformity mismatch: tile k={F.k}, family k={family.k}")
    n = family.n
    tile_edges = F.sorted_edges()
    colours_of = {}
    for j, g in enumerate(family.graphs):
        for e in g.edges:
            colours_of.setdefault(e, []).append(n + j)
    union = frozenset(colours_of)
    targets = {f: union for f in tile_edges}
    edges = []
    for phi in iter_homomorphisms(F, targets, n):
        choices = [colours_of[tuple(sorted(phi[a] for a in f))] for f in tile_edges]
        for colours in product(*choices):
            edges.append(phi + colours)
            if len(edges) > cap:
                raise ResourceLimitError(f"rainbow digraph exceeds edge cap {cap}", cap)
    m = F.n + len(tile_edges)
    return HomDigraph(Digraph(m, n + len(family), frozenset(edges)), tuple(range(F.n)),
                      "rainbow", tuple(tile_edges), n)


def exists_mixed_hom(F: KGraph, G1: KGraph, G2: KGraph):
    """Search for phi and a tile edge f with phi(f) in G1 and the rest in G2.

    Returns ``(True, {"edge": f, "map": phi})`` or ``(False, None)``.
    """
    if not (F.k == G1.k == G2.k):
        raise InputError("uniformity mismatch")
    if G1.n != G2.n:
        raise InputError("G1 and G2 must share a vertex set")
    for f in F.sorted_edges():
        targets = {g: G2.edges for g in F.edges}
        targets[f] = G1.edges
        for phi in iter_homomorphisms(F, targets, G1.n):
            return True, {"edge": f, "map": phi}
    return False, None


# --- fissility -------------------------------------------------------------

def set_partitions(items):
    """All set partitions of a list, blocks in order of first element."""
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        yield [[first]] + part
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]


def _disjoint_choices(n, sizes, used=frozenset()):
    if not sizes:
        yield []
        return
    pool = [v for v in range(n) if v not in used]
    for chosen in combinations(pool, sizes[0]):
        for rest in _disjoint_choices(n, sizes[1:], used | set(chosen)):
            yield [chosen] + rest


def _is_suitable(edges, m, blocks, sets):
    block_of = [0] * m
    for j, blk in enumerate(blocks):
        for p in blk:
            block_of[p] = j
    for pick in product(*sets):
        if tuple(pick[block_of[p]] for p in range(m)) not in edges:
            return False
    return True


def _has_covering_edge(one_to_one, m, blocks, sets, preserving):
    target = frozenset(v for s in sets for v in s)
    if not preserving:
        return any(frozenset(e) == target for e in one_to_one)
    home = [None] * m
    for j, blk in enumerate(blocks):
        for p in blk:
            home[p] = frozenset(sets[j])
    return any(frozenset(e) == target and all(e[p] in home[p] for p in range(m))
               for e in one_to_one)


def is_fissile(H, max_parts=None, preserving=False,
               vertex_cap: int = DEFAULT_FISSILE_VERTEX_CAP):
    """Check fissility by enumerating every suitable tuple.

    A tuple is described by a set partition of the positions 1..m (positions
    sharing a block share a set) together with disjoint vertex sets whose sizes
    equal the block sizes.  With ``preserving`` the covering edge must also
    send each position into its own set.  Returns ``(True, None)`` or
    ``(False, witness)`` where the witness lists the set at each position.
    """
    H = getattr(H, "digraph", H)
    if H.n > vertex_cap:
        raise ResourceLimitError(
            f"fissility check limited to n <= {vertex_cap} (vertex_cap), got n={H.n}",
            vertex_cap)
    m = H.m
    max_parts = m if max_parts is None else max_parts
    edges = H.edges
    one_to_one = [e for e in H.sorted_edges() if len(set(e)) == m]
    for blocks in set_partitions(range(m)):
        if len(blocks) > max_parts or all(len(b) == 1 for b in blocks):
            continue
        sizes = [len(b) for b in blocks]
        for sets in _disjoint_choices(H.n, sizes):
            if not _is_suitable(edges, m, blocks, sets):
                continue
            if not _has_covering_edge(one_to_one, m, blocks, sets, preserving):
                position_sets = [None] * m
                for blk, s in zip(blocks, sets):
                    for p in blk:
                        position_sets[p] = sorted(s)
                return False, {"tuple": position_sets}
    return True, None


def verify_fissility_witness(H, witness, preserving=False):
    """Re-check a non-fissility witness: the tuple is suitable and uncovered."""
    H = getattr(H, "digraph", H)
    position_sets = [tuple(s) for s in witness["tuple"]]
    m = H.m
    if len(position_sets) != m:
        return False
    distinct = []
    for s in position_sets:
        if s not in distinct:
            distinct.append(s)
    flat = [v for s in distinct for v in s]
    if len(flat) != len(set(flat)) or len(flat) != m:
        return False
    blocks = [[p for p in range(m) if position_sets[p] == s] for s in distinct]
    if any(len(b) != len(s) for b, s in zip(blocks, distinct)):
        return False
    if not _is_suitable(H.edges, m, blocks, distinct):
        return False
    one_to_one = [e for e in H.edges if len(set(e)) == m]
    return not _has_covering_edge(one_to_one, m, blocks, distinct, preserving)
