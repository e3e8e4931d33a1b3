import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from conftest import digraphs
from tilinglab.barriers import is_covered, is_lattice_complete
from tilinglab.constructions import (
    ConstructionSpec,
    _ceil_alpha_n,
    blow_up,
    build,
    complete_partite_host,
    cover_barrier,
    cover_barrier_predicate,
    cover_barrier_sets,
    divisibility_barrier,
    downspin_bottlegraph,
    downspin_sizes,
    find_rooted_blowup,
    rooted_parts,
    space_barrier,
)
from tilinglab.core import Digraph, KGraph, complete_kgraph, complete_partite, min_degree, path_graph
from tilinglab.errors import InputError
from tilinglab.homlift import hom_digraph
from tilinglab.solver import FOUND, INCONCLUSIVE, NONE, exact_perfect_matching, exact_tiling, tiling_of_size

F222 = complete_partite([2, 2, 2])


def once_covered(H):
    """Vertices v with some edge using v exactly once."""
    return {v for e in H.edges for v in e if e.count(v) == 1}


# --- cover barrier ----------------------------------------------------------

@pytest.mark.parametrize("n", range(1, 400, 7))
def test_ceil_alpha_matches_float(n):
    x = (math.sqrt(2) - 1) * n
    assert _ceil_alpha_n(n) == math.ceil(x - 1e-9)


def test_cover_barrier_sizes():
    C = cover_barrier(20, 3)
    sizes = [len(C.sets[s]) for s in ("A1", "A2", "B", "T")]
    assert sizes == [9, 9, 1, 1]
    assert C.special == 19 and C.graph.e == 321


@pytest.mark.parametrize("n,k", [(9, 3), (14, 3), (20, 3), (16, 4), (24, 5)])
def test_cover_barrier_matches_predicate(n, k):
    G = cover_barrier(n, k).graph
    is_edge = cover_barrier_predicate(n, k)
    expect = {S for S in itertools.combinations(range(n), k) if is_edge(S)}
    assert set(G.edges) == expect


def test_cover_barrier_fails_only_at_special_vertex():
    C = cover_barrier(12, 3)
    H = hom_digraph(F222, C.graph)
    assert set(range(12)) - once_covered(H) == set(C.sets["T"])
    cert = is_covered(H)
    assert not cert.holds and cert.witness["vertex"] == C.special


def test_cover_barrier_cone_tile_is_covered():
    # a cone tile can put its singleton part on v
    H = hom_digraph(complete_partite([1, 2, 2]), cover_barrier(12, 3).graph)
    assert is_covered(H).holds


def test_cover_barrier_degree_ratio():
    G = cover_barrier(200, 3).graph
    ratio = min_degree(G, 1) / math.comb(200, 2)
    assert abs(ratio - (6 - 4 * math.sqrt(2))) < 0.05


def test_cover_barrier_errors():
    with pytest.raises(InputError):
        cover_barrier(20, 2)
    with pytest.raises(InputError):
        cover_barrier_sets(6, 3)
    with pytest.raises(InputError):
        cover_barrier_sets(10, 4)


# --- space barrier ----------------------------------------------------------

def test_space_barrier_triangle():
    C = space_barrier(12, 2, 1, Fraction(1, 3), [1, 1, 1])
    assert C.sets["A"] == [0, 1, 2]
    K3 = complete_kgraph(3)
    assert tiling_of_size(K3, C.graph, 1).outcome == FOUND
    assert tiling_of_size(K3, C.graph, 2).outcome == NONE
    assert exact_tiling(K3, C.graph).outcome == NONE


def test_space_barrier_i_equals_k():
    C = space_barrier(12, 2, 2, Fraction(1, 3), [1, 1, 1])
    A = set(C.sets["A"])
    assert C.graph.e > 0 and all(set(e) <= A for e in C.graph.edges)


@pytest.mark.parametrize("n,i,beta,parts", [
    (9, 1, Fraction(1, 3), [1, 1, 1]),
    (12, 2, Fraction(1, 3), [1, 1, 1]),
    (10, 1, Fraction(1, 3), [1, 2]),
    (12, 1, Fraction(1, 4), [1, 1, 2]),
])
def test_space_barrier_tiling_bound(n, i, beta, parts):
    F = complete_partite(parts, 2)
    G = space_barrier(n, 2, i, beta, parts).graph
    t = math.ceil(beta * n)
    assert tiling_of_size(F, G, t).outcome == NONE


@pytest.mark.parametrize("n,k,i", [(9, 2, 1), (9, 3, 2), (10, 3, 1), (8, 4, 3)])
def test_space_barrier_matches_definition(n, k, i):
    parts = [1] * k
    C = space_barrier(n, k, i, Fraction(1, k), parts)
    A = set(C.sets["A"])
    expect = {S for S in itertools.combinations(range(n), k) if len(A & set(S)) >= i}
    assert set(C.graph.edges) == expect


def test_space_barrier_degree_ratio():
    G = space_barrier(300, 2, 1, Fraction(1, 3), [1, 1, 1]).graph
    ratio = G.e / math.comb(300, 2)
    assert abs(ratio - (1 - (1 - Fraction(1, 3)) ** 2)) < 0.05


def test_space_barrier_errors():
    with pytest.raises(InputError):
        space_barrier(12, 2, 3, Fraction(1, 3), [1, 1, 1])
    with pytest.raises(InputError):
        space_barrier(12, 2, 1, Fraction(1, 2), [1, 1, 1])


# --- divisibility barrier ------------------------------------------------------

def test_divisibility_barrier_two_cliques():
    C = divisibility_barrier(8, 2)
    assert (len(C.sets["A"]), len(C.sets["B"])) == (5, 3)
    H = hom_digraph(complete_kgraph(2), C.graph)
    assert exact_perfect_matching(H).outcome == NONE
    cert = is_lattice_complete(H)
    root, v = cert.witness["pair"]
    assert not cert.holds and (root in C.sets["A"]) != (v in C.sets["A"])


def test_divisibility_barrier_3graph():
    C = divisibility_barrier(12, 3)
    assert (len(C.sets["A"]), len(C.sets["B"])) == (7, 5)
    edge = KGraph(3, 3, frozenset({(0, 1, 2)}))
    assert exact_tiling(edge, C.graph).outcome == NONE


def test_divisibility_degree_exponent():
    # the minimum degree ratio is about 2^(1-k)
    G = divisibility_barrier(40, 3).graph
    ratio = min_degree(G, 1) / math.comb(39, 2)
    assert abs(ratio - 2 ** (1 - 3)) < 0.05


# --- downspin -----------------------------------------------------------------

def test_downspin_examples():
    assert downspin_sizes(3, 3) == [4, 2, 3]
    G = downspin_bottlegraph(2, 6).graph
    assert exact_tiling(path_graph(3), G).outcome == FOUND
    G = downspin_bottlegraph(3, 3).graph
    assert exact_tiling(complete_kgraph(3), G).outcome == NONE
    with pytest.raises(InputError):
        downspin_sizes(1, 3)


def test_downspin_kgraph_variant():
    G = downspin_bottlegraph(3, 2, k=3).graph
    assert G.e == 3 * 1 * 2


def test_complete_partite_host():
    C = complete_partite_host([2, 3])
    assert C.graph.e == 6 and C.sets == {"P0": [0, 1], "P1": [2, 3, 4]}


# --- blow-ups ------------------------------------------------------------------

def test_blow_up_examples():
    R = Digraph(2, 2, frozenset({(0, 1)}))
    assert len(blow_up(R, [(0, 1), (2, 3)]).edges) == 4
    loop = Digraph(2, 1, frozenset({(0, 0)}))
    assert blow_up(loop, [(0, 1)]).edges == {(0, 0), (1, 1)}
    assert blow_up(R, b=1).edges == R.edges
    assert rooted_parts(3, 2, X=[1]) == [(0, 1), (2,), (3, 4)]
    with pytest.raises(InputError):
        blow_up(R, [(0,)])


@given(digraphs(max_n=4, max_m=3, max_edges=8), st.integers(1, 3))
def test_blow_up_restricts_to_R(R, b):
    parts = rooted_parts(R.n, b)
    P = blow_up(R, parts)
    reps = [p[-1] for p in parts]
    back = {w: i for i, w in enumerate(reps)}
    restricted = {tuple(back[x] for x in e) for e in P.edges if all(x in back for x in e)}
    assert restricted == set(R.edges)


def test_rooted_blowup_search():
    H = hom_digraph(complete_kgraph(2), complete_kgraph(6))
    R = Digraph(2, 2, frozenset({(0, 1), (1, 0)}))
    res = find_rooted_blowup(H, R, b=2)
    assert res.outcome == FOUND
    P = blow_up(R, b=2)
    assert all(tuple(res.embedding[x] for x in e) in H.edges for e in P.edges)
    empty = Digraph(2, 6, frozenset())
    assert find_rooted_blowup(empty, R, b=2).outcome == NONE
    assert find_rooted_blowup(H, R, b=3, budget=1).outcome == INCONCLUSIVE


def test_rooted_blowup_fixes_roots():
    R = Digraph(2, 2, frozenset({(0, 1), (1, 0)}))
    H = blow_up(R, b=2, X=[0])
    res = find_rooted_blowup(H, R, X=[0], b=2)
    assert res.outcome == FOUND and res.embedding[0] == 0


def test_build_dispatch():
    C = build(ConstructionSpec("divisibility-barrier", {"n": 8, "k": 2}))
    assert C.to_json()["sets"]["A"] == [0, 1, 2, 3, 4]
    with pytest.raises(InputError):
        build(ConstructionSpec("nope", {}))
    with pytest.raises(InputError):
        build(ConstructionSpec("cover-barrier", {"n": 20}))
