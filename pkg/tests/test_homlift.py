import itertools

from hypothesis import given, settings, strategies as st

from conftest import kgraphs
from tilinglab.barriers import is_proportional
from tilinglab.core import Digraph, KGraph, Partition, complete_kgraph, cycle_graph, path_graph
from tilinglab.homlift import (
    GraphFamily,
    exists_mixed_hom,
    hom_digraph,
    is_fissile,
    ordered_hom_digraph,
    rainbow_digraph,
    set_partitions,
    verify_fissility_witness,
)


def brute_homs(F, G, ordered=False):
    out = set()
    for phi in itertools.product(range(G.n), repeat=F.n):
        if ordered and any(phi[i] > phi[i + 1] for i in range(F.n - 1)):
            continue
        if all(G.has_edge(phi[w] for w in f) for f in F.edges):
            out.add(phi)
    return out


def brute_rainbow(F, fam):
    n = fam.n
    out = set()
    fedges = F.sorted_edges()
    for phi in itertools.product(range(n), repeat=F.n):
        choices = []
        for f in fedges:
            image = [phi[w] for w in f]
            choices.append([n + j for j, G in enumerate(fam.graphs) if G.has_edge(image)])
        # colours may repeat across tile edges
        for cols in itertools.product(*choices):
            out.add(phi + cols)
    return out


def test_hom_examples():
    assert hom_digraph(complete_kgraph(2), cycle_graph(4)).digraph.e == 8
    assert hom_digraph(complete_kgraph(2), KGraph(2, 5)).digraph.e == 0
    assert hom_digraph(complete_kgraph(3), complete_kgraph(3)).digraph.e == 6


def test_ordered_examples():
    H = ordered_hom_digraph(complete_kgraph(2), path_graph(3))
    assert H.edges == {(0, 1), (1, 2)}
    single = ordered_hom_digraph(KGraph(2, 1), cycle_graph(5))
    assert single.edges == {(v,) for v in range(5)}
    assert ordered_hom_digraph(complete_kgraph(2), KGraph(2, 4)).digraph.e == 0


def test_rainbow_examples():
    fam = GraphFamily((KGraph(2, 2, frozenset({(0, 1)})),))
    H = rainbow_digraph(complete_kgraph(2), fam)
    assert H.m == 3 and H.edges == {(0, 1, 2), (1, 0, 2)}
    assert rainbow_digraph(complete_kgraph(2), GraphFamily((KGraph(2, 2),))).digraph.e == 0
    fam2 = GraphFamily((complete_kgraph(3), complete_kgraph(3)))
    H2 = rainbow_digraph(path_graph(3), fam2)
    # 12 homomorphisms of P3 into K3, each tile edge in either colour
    assert H2.edges == brute_rainbow(path_graph(3), fam2)
    assert H2.digraph.e == 12 * 4


def test_mixed_hom_examples():
    K3 = complete_kgraph(3)
    assert exists_mixed_hom(K3, complete_kgraph(4), complete_kgraph(4))[0]
    ok, wit = exists_mixed_hom(K3, KGraph(2, 3, frozenset({(0, 1)})), K3)
    assert ok and sorted(wit["map"][w] for w in wit["edge"]) == [0, 1]
    assert not exists_mixed_hom(complete_kgraph(2), KGraph(2, 5), complete_kgraph(5))[0]


def test_fissility_examples():
    assert is_fissile(hom_digraph(complete_kgraph(2), cycle_graph(4)))[0]
    bad = Digraph(2, 2, frozenset({(0, 0), (1, 1)}))
    ok, wit = is_fissile(bad)
    assert not ok and wit == {"tuple": [[0, 1], [0, 1]]}
    assert verify_fissility_witness(bad, wit)
    assert is_fissile(Digraph(2, 2, frozenset({(0, 1)})))[0]


def test_set_partitions_bell_numbers():
    assert [sum(1 for _ in set_partitions(range(n))) for n in range(6)] == [1, 1, 2, 5, 15, 52]


@settings(max_examples=40)
@given(kgraphs(max_n=3, k=2, min_n=1), kgraphs(max_n=5, k=2, min_n=1))
def test_hom_digraph_matches_bruteforce(F, G):
    assert hom_digraph(F, G).edges == brute_homs(F, G)
    Ho = ordered_hom_digraph(F, G)
    assert Ho.edges == brute_homs(F, G, ordered=True)
    assert Ho.edges <= hom_digraph(F, G).edges


@settings(max_examples=25)
@given(kgraphs(max_n=3, k=2, min_n=2), st.lists(kgraphs(max_n=4, k=2, min_n=4), min_size=1, max_size=3))
def test_rainbow_matches_bruteforce(F, graphs):
    fam = GraphFamily(tuple(graphs))
    H = rainbow_digraph(F, fam)
    assert H.m == F.n + F.e
    assert H.edges == brute_rainbow(F, fam)


def test_rainbow_is_proportional():
    F = complete_kgraph(2)                      # m = 2, h = 1
    n = 4
    fam = GraphFamily(tuple(complete_kgraph(n) for _ in range(n // 2)))
    H = rainbow_digraph(F, fam)
    U = Partition((frozenset(range(n)), frozenset(range(n, n + len(fam)))))
    assert is_proportional(H, U)


@settings(max_examples=30)
@given(kgraphs(max_n=3, k=2, min_n=1), kgraphs(max_n=5, k=2, min_n=1))
def test_lifts_are_fissile(F, G):
    assert is_fissile(hom_digraph(F, G))[0]
    assert is_fissile(ordered_hom_digraph(F, G))[0]
