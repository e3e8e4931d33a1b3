import random
from fractions import Fraction

import pytest
from hypothesis import given, settings

from conftest import brute_perfect_matchings, digraphs, random_graph
from tilinglab.constructions import divisibility_barrier, downspin_bottlegraph
from tilinglab.core import Digraph, KGraph, Matching, complete_kgraph, complete_partite, cycle_graph, path_graph
from tilinglab.errors import InputError, ResourceLimitError
from tilinglab.homlift import hom_digraph
from tilinglab.lp import FractionalMatching
from tilinglab.solver import (
    FOUND,
    INCONCLUSIVE,
    NONE,
    AbsorptionParams,
    absorption_solve,
    count_perfect_matchings,
    exact_perfect_matching,
    exact_tiling,
    find_absorber,
    greedy_almost_matching,
    tiling_of_size,
)

K2, K3 = complete_kgraph(2), complete_kgraph(3)


def lift(F, G):
    return hom_digraph(F, G).digraph


def test_exact_matching_examples():
    rep = exact_perfect_matching(lift(K2, complete_kgraph(4)))
    assert rep.outcome == FOUND
    rep.matching.validate(lift(K2, complete_kgraph(4)), perfect=True)
    assert exact_perfect_matching(lift(K2, divisibility_barrier(8, 2).graph)).outcome == NONE
    empty = exact_perfect_matching(Digraph(2, 0))
    assert empty.outcome == FOUND and empty.matching.edges == ()


def test_budget_gives_inconclusive():
    H = lift(K2, divisibility_barrier(16, 2).graph)
    rep = exact_perfect_matching(H, budget=3)
    assert rep.outcome == INCONCLUSIVE


def test_count_examples():
    assert count_perfect_matchings(lift(K2, complete_kgraph(6))) == 120
    assert count_perfect_matchings(lift(K2, complete_kgraph(4))) == 12
    assert count_perfect_matchings(Digraph(2, 4)) == 0


def test_tiling_examples():
    assert exact_tiling(K3, complete_kgraph(6)).outcome == FOUND
    assert exact_tiling(K3, cycle_graph(6)).outcome == NONE
    rep = exact_tiling(path_graph(3), complete_partite([7, 5]))
    assert rep.outcome == FOUND
    rep.tiling.validate(path_graph(3), complete_partite([7, 5]), perfect=True)


def test_tiling_of_size():
    assert tiling_of_size(K3, cycle_graph(6), 0).outcome == FOUND
    assert tiling_of_size(K3, cycle_graph(6), 1).outcome == NONE
    G = KGraph(2, 7, K3.edges | {(3, 4), (4, 5), (3, 5)})
    rep = tiling_of_size(K3, G, 2)
    assert rep.outcome == FOUND and len(rep.tiling.embeddings) == 2
    assert tiling_of_size(K3, G, 3).outcome == NONE


def test_greedy_examples():
    H = lift(K2, complete_kgraph(8))
    for strategy, seed in (("max-degree", None), ("lp-rounding", 3)):
        M, left = greedy_almost_matching(H, strategy=strategy, seed=seed)
        M.validate(H)
        assert left == []
    assert greedy_almost_matching(Digraph(2, 4))[1] == [0, 1, 2, 3]
    M, left = greedy_almost_matching(Digraph(2, 4, frozenset({(0, 1)})))
    assert len(left) == 2
    with pytest.raises(InputError):
        greedy_almost_matching(H, strategy="lp-rounding")


def test_absorber_examples():
    H = lift(K2, complete_kgraph(4))
    res = find_absorber(H, (0, 1), 2)
    assert res.outcome == FOUND
    a = res.absorber
    assert a.validate(H)
    assert set(a.M1.edges) == {(0, 1), (2, 3)} and set(a.M2.edges) == {(2, 3)}
    assert a.order == 2
    bad = Digraph(2, 3, frozenset({(1, 2), (2, 1)}))
    assert find_absorber(bad, (0, 1), 2).outcome == NONE
    q0 = find_absorber(H, (0, 1), 0)
    assert q0.outcome == FOUND and q0.absorber.M2.edges == ()
    with pytest.raises(InputError):
        find_absorber(H, (0, 1), 1)


def test_absorption_small_family():
    for t in range(1, 6):
        H = lift(K3, complete_kgraph(3 * t))
        rep = absorption_solve(H, AbsorptionParams(seed=t))
        assert rep.outcome == FOUND
        rep.matching.validate(H, perfect=True)


def test_absorption_is_sound_on_barrier():
    H = lift(K2, divisibility_barrier(8, 2).graph)
    for seed in range(5):
        assert absorption_solve(H, AbsorptionParams(seed=seed)).outcome != FOUND


def test_downspin_cases():
    assert exact_tiling(path_graph(3), downspin_bottlegraph(2, 6).graph).outcome == FOUND
    assert exact_tiling(K3, downspin_bottlegraph(3, 3).graph).outcome == NONE


@settings(max_examples=60)
@given(digraphs(max_n=8, max_m=3, max_edges=14, one_to_one_bias=True))
def test_exact_matching_agrees_with_bruteforce(H):
    brute = brute_perfect_matchings(H)
    rep = exact_perfect_matching(H)
    assert (rep.outcome == FOUND) == bool(brute)
    if rep.outcome == FOUND:
        rep.matching.validate(H, perfect=True)
        weights = {e: Fraction(1) for e in rep.matching.edges}
        fm = FractionalMatching(weights, Fraction(len(weights)))
        assert fm.is_feasible(H) and fm.size == Fraction(H.n, H.m)


@settings(max_examples=40)
@given(digraphs(max_n=8, max_m=2, max_edges=14, one_to_one_bias=True))
def test_count_agrees_with_bruteforce(H):
    # count labelled matchings: each vertex-set class contributes its multiplicity
    mult = {}
    for e in H.edges:
        if len(set(e)) == H.m:
            mult[frozenset(e)] = mult.get(frozenset(e), 0) + 1
    expect = 0
    for pm in brute_perfect_matchings(H):
        prod = 1
        for s in pm:
            prod *= mult[s]
        expect += prod
    assert count_perfect_matchings(H) == expect


def test_tiling_agrees_with_matching_random():
    rng = random.Random(3)
    for _ in range(40):
        F = random_graph(rng, rng.choice([2, 3]), 0.8)
        G = random_graph(rng, F.n * rng.choice([2, 3]), rng.choice([0.4, 0.6, 0.8]))
        a = exact_tiling(F, G).outcome
        b = exact_perfect_matching(lift(F, G)).outcome
        assert a == b
