import copy
import random

import pytest
from hypothesis import given

from conftest import digraphs, random_graph
from tilinglab.barriers import Certificate, has_space, is_covered, is_lattice_complete
from tilinglab.certificates import verify_certificate
from tilinglab.core import Digraph, Partition, complete_kgraph, cycle_graph, disjoint_union
from tilinglab.errors import InputError
from tilinglab.formats import instance_hash
from tilinglab.homlift import hom_digraph, is_fissile
from tilinglab.solver import exact_perfect_matching, exact_tiling

K2, K3 = complete_kgraph(2), complete_kgraph(3)


def lift(G, F=K2):
    return hom_digraph(F, G).digraph


def fissile_cert(H):
    ok, wit = is_fissile(H)
    return Certificate("fissile", ok, wit or {})


@given(digraphs(max_n=6, max_m=3, max_edges=10))
def test_checker_certificates_verify(H):
    for cert in (has_space(H), is_lattice_complete(H), is_covered(H)):
        assert verify_certificate(H, cert) == (True, "ok")
        assert verify_certificate(H, cert.to_json())[0]


@given(digraphs(max_n=5, max_m=2, max_edges=8))
def test_fissility_certificates_verify(H):
    assert verify_certificate(H, fissile_cert(H))[0]


@given(digraphs(max_n=6, max_m=2, max_edges=10, one_to_one_bias=True))
def test_matching_certificates_verify(H):
    cert = exact_perfect_matching(H).certificate()
    assert verify_certificate(H, cert)[0]


def test_partitioned_div_certificate():
    H = lift(disjoint_union(K3, K3))
    P = Partition([[0, 1, 2], [3, 4, 5]])
    cert = is_lattice_complete(H, P)
    assert verify_certificate(H, cert)[0]


def test_tiling_certificate_needs_tile():
    G = complete_kgraph(6)
    cert = exact_tiling(K3, G).certificate()
    assert verify_certificate(G, cert, tile=K3)[0]
    with pytest.raises(InputError):
        verify_certificate(G, cert)


# --- tampering ------------------------------------------------------------------

def test_tampered_space_weights():
    H = lift(cycle_graph(5))
    cert = has_space(H, rho="1/10")
    assert cert.holds
    bad = copy.deepcopy(cert)
    bad.witness["weights"][0][1] = "1"
    assert not verify_certificate(H, bad)[0]
    bad = copy.deepcopy(cert)
    bad.witness["target"] = "1/100"
    assert not verify_certificate(H, bad)[0]


def test_tampered_space_cover():
    H = Digraph(2, 3, frozenset({(0, 1), (1, 0)}))
    cert = has_space(H)
    assert not cert.holds
    bad = copy.deepcopy(cert)
    bad.witness["cover"] = ["0"] * 3
    bad.witness["size"] = "0"
    assert not verify_certificate(H, bad)[0]


def test_tampered_div():
    H = lift(disjoint_union(K3, K3))
    cert = is_lattice_complete(H)
    assert not cert.holds
    bad = copy.deepcopy(cert)
    bad.witness["dual"] = ["0"] * H.n
    assert not verify_certificate(H, bad)[0]
    good = is_lattice_complete(lift(K3))
    other = lift(complete_kgraph(3))
    bad = copy.deepcopy(good)
    bad.witness["transferrals"][0]["coefficients"][0][1] += 1
    assert not verify_certificate(other, bad)[0]
    bad = copy.deepcopy(good)
    bad.witness["transferrals"].pop()
    assert not verify_certificate(other, bad)[0]


def test_tampered_cov():
    H = lift(complete_kgraph(4))
    cert = is_covered(H)
    bad = copy.deepcopy(cert)
    bad.witness["edges"][0] = [2, 3]
    assert not verify_certificate(H, bad)[0]
    fake = Certificate("cov", False, {"vertex": 0})
    assert not verify_certificate(H, fake)[0]


def test_tampered_fissility():
    H = Digraph(2, 2, frozenset({(0, 0), (1, 1)}))
    cert = fissile_cert(H)
    assert not cert.holds and verify_certificate(H, cert)[0]
    fake = Certificate("fissile", True, {})
    assert not verify_certificate(H, fake)[0]
    H1 = Digraph(2, 2, frozenset({(0, 1)}))
    bad = Certificate("fissile", False, cert.witness)
    assert not verify_certificate(H1, bad)[0]


def test_tampered_matching():
    H = lift(complete_kgraph(4))
    cert = exact_perfect_matching(H).certificate()
    bad = copy.deepcopy(cert)
    bad.witness["edges"][0] = bad.witness["edges"][1]
    assert not verify_certificate(H, bad)[0]
    fake = Certificate("matching", False, {"outcome": "none"})
    assert not verify_certificate(H, fake)[0]
    fake = Certificate("matching", False, {"outcome": "inconclusive"})
    assert not verify_certificate(H, fake)[0]


def test_tampered_tiling():
    G = complete_kgraph(6)
    cert = exact_tiling(K3, G).certificate()
    bad = copy.deepcopy(cert)
    bad.witness["embeddings"][1] = bad.witness["embeddings"][0]
    assert not verify_certificate(G, bad, tile=K3)[0]


def test_instance_hash_binding():
    H = lift(K3)
    cert = is_covered(H)
    cert.instance_hash = instance_hash(H)
    assert verify_certificate(H, cert)[0]
    other = lift(complete_kgraph(4))
    assert verify_certificate(other, cert) == (False, "instance hash mismatch")


def test_malformed_witness():
    H = lift(K3)
    bad = Certificate("space", True, {"rho": "0"})
    ok, reason = verify_certificate(H, bad)
    assert not ok and reason.startswith("malformed")
    with pytest.raises(InputError):
        verify_certificate(H, Certificate("colour", True, {}))
    with pytest.raises(InputError):
        verify_certificate(H, {"holds": True})


def test_random_tampering_never_accepted():
    rng = random.Random(5)
    for _ in range(40):
        G = random_graph(rng, 6, 0.5)
        H = lift(G)
        cert = is_covered(H)
        if not cert.holds or not H.edges:
            continue
        bad = copy.deepcopy(cert)
        v = rng.randrange(H.n)
        e = sorted(H.edges)[rng.randrange(len(H.edges))]
        if e.count(v) == 1:
            continue
        bad.witness["edges"][v] = list(e)
        assert not verify_certificate(H, bad)[0]
