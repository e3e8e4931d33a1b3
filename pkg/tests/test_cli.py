import json
import subprocess
import sys

import pytest

from tilinglab.cli import load_graph, main
from tilinglab.core import Digraph, KGraph
from tilinglab.errors import InputError
from tilinglab.formats import read_instance


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr().out
    return code, out


def run_json(capsys, *argv):
    code, out = run(capsys, *argv)
    return code, json.loads(out)


# --- built-ins -------------------------------------------------------------------

def test_load_graph_builtins():
    assert load_graph("complete:4").e == 6
    assert load_graph("complete:4:3").e == 4
    assert load_graph("cycle:5").e == 5
    assert load_graph("path:3").e == 2
    assert load_graph("kpartite:3:1,1,2").e == 2
    for bad in ("kpartite:3:1,1", "complete:x", "nosuch"):
        with pytest.raises(InputError):
            load_graph(bad)


# --- analyze and certify ------------------------------------------------------------

def test_analyze_bundle_and_certify(capsys, tmp_path):
    code, data = run_json(capsys, "analyze", "--host", "complete:6", "--tile", "complete:3",
                          "--props", "spa,div,cov,fissile", "--rho", "0", "--json",
                          "--cert-dir", tmp_path / "certs")
    assert code == 0
    assert [c["property"] for c in data["certificates"]] == ["space", "div", "cov", "fissile"]
    assert all(c["holds"] for c in data["certificates"])
    code, _ = run(capsys, "hom", "--host", "complete:6", "--tile", "complete:3",
                  "-o", tmp_path / "h.dg")
    assert code == 0
    for prop in ("space", "div", "cov", "fissile"):
        code, res = run_json(capsys, "certify", "--instance", tmp_path / "h.dg",
                             "--cert", tmp_path / "certs" / f"{prop}.json")
        assert code == 0 and res["valid"]


def test_certify_tampered_exits_3(capsys, tmp_path):
    run(capsys, "hom", "--host", "complete:4", "--tile", "complete:2", "-o", tmp_path / "h.dg")
    run(capsys, "analyze", "--instance", tmp_path / "h.dg", "--props", "cov",
        "--cert-dir", tmp_path)
    cert = json.loads((tmp_path / "cov.json").read_text())
    cert["witness"]["edges"][0] = [2, 3]
    (tmp_path / "bad.json").write_text(json.dumps(cert))
    code, res = run_json(capsys, "certify", "--instance", tmp_path / "h.dg",
                         "--cert", tmp_path / "bad.json")
    assert code == 3 and not res["valid"]


def test_analyze_partition_and_failures(capsys):
    code, data = run_json(capsys, "analyze", "--host", "complete:2", "--tile", "complete:2",
                          "--props", "div")
    assert code == 0 and not data["certificates"][0]["holds"]
    code, data = run_json(capsys, "analyze", "--host", "complete:4", "--tile", "complete:2",
                          "--props", "div", "--partition", "0,1/2,3")
    assert data["certificates"][0]["holds"]
    assert main(["analyze", "--host", "complete:4"]) == 2
    assert main(["analyze", "--host", "complete:4", "--tile", "complete:2",
                 "--props", "bogus"]) == 2


def test_hom_formats(capsys, tmp_path):
    code, data = run_json(capsys, "hom", "--host", "cycle:4", "--tile", "complete:2")
    assert code == 0
    code, _ = run(capsys, "hom", "--host", "cycle:4", "--tile", "complete:2",
                  "--format", "json", "-o", tmp_path / "h.json")
    H = read_instance(tmp_path / "h.json")
    assert isinstance(H, Digraph) and len(H.edges) == 8


# --- solve ---------------------------------------------------------------------------

def test_solve_methods(capsys):
    code, data = run_json(capsys, "solve", "--host", "complete:6", "--tile", "complete:3")
    assert code == 0 and data["outcome"] == "found"
    code, data = run_json(capsys, "solve", "--host", "complete:9", "--tile", "complete:3",
                          "--method", "absorb", "--seed", "1")
    assert code == 0 and data["outcome"] == "found"
    code, data = run_json(capsys, "solve", "--host", "complete:6", "--tile", "complete:2",
                          "--method", "greedy", "--seed", "1")
    assert code == 0 and data["certificate"]["seed"] == 1
    assert main(["solve", "--host", "complete:6", "--tile", "complete:2",
                 "--method", "absorb"]) == 2


def test_solve_budget_exit_4(capsys):
    code, data = run_json(capsys, "solve", "--host", "complete:12", "--tile", "complete:3",
                          "--budget", "1")
    assert code == 4 and data["outcome"] == "inconclusive"


def test_solve_none(capsys):
    code, data = run_json(capsys, "solve", "--host", "complete:5", "--tile", "complete:2")
    assert code == 0 and data["outcome"] == "none"


# --- invariants and thresholds ------------------------------------------------------

def test_invariants(capsys):
    code, data = run_json(capsys, "invariants", "--tile", "complete:3")
    assert data["coloring"]["tau"] == "1/3" and data["coloring"]["gcd"] == "inf"
    code, data = run_json(capsys, "invariants", "--tile", "path:3", "--ordered-only")
    assert "coloring" not in data and data["ordered"]["chi_lt"] == 3


def test_thresholds(capsys):
    code, data = run_json(capsys, "thresholds", "--tile", "complete:3")
    assert code == 0 and data["til"]["value"] == "2/3"
    code, data = run_json(capsys, "thresholds", "--tile", "kpartite:3:2,2,2", "--kind", "kpartite")
    assert data["cov_k-2"]["value"]["sym"] == "6-4*sqrt2"
    code, data = run_json(capsys, "thresholds", "--tile", "complete:4:3", "--d", "2")
    assert data["til"]["value"] == "3/4"
    code, data = run_json(capsys, "thresholds", "--tile", "complete:3", "--rainbow")
    assert data["rmix"]["value"] == "1/2"
    code, data = run_json(capsys, "thresholds", "--tile", "complete:3", "--ordered")
    assert data["til"]["value"] == {"lower": "1/2", "upper": "1"}
    code, data = run_json(capsys, "thresholds", "--kind", "matching", "--s", "3")
    assert data["value"] == {"lower": "1/2", "upper": "2/3"}
    code, data = run_json(capsys, "thresholds", "--kind", "connectivity", "--k", "3")
    assert data["value"] == "1/4"
    assert main(["thresholds", "--kind", "graph"]) == 2


# --- construct and pgraph --------------------------------------------------------------

def test_construct_writes_file_and_sidecar(capsys, tmp_path):
    out = tmp_path / "g.kg"
    code, rec = run_json(capsys, "construct", "space-barrier", "--n", 12, "--k", 2, "--i", 1,
                         "--beta", "1/3", "--parts", "1,1,1", "-o", out)
    assert code == 0 and out.exists()
    G = read_instance(out)
    assert isinstance(G, KGraph) and G.n == 12
    side = json.loads((tmp_path / "g.kg.json").read_text())
    assert side["params"]["beta"] == "1/3" and side == rec


def test_construct_input_errors(capsys):
    assert main(["construct", "cover-barrier", "--n", "5"]) == 2
    assert main(["construct", "space-barrier", "--n", "12"]) == 2


def test_pgraph(capsys):
    code, data = run_json(capsys, "pgraph", "--host", "complete:5", "--tile", "complete:2",
                          "--s", 3)
    assert data["edges"] == 10 and data["min_degree"] == 6
    code, data = run_json(capsys, "pgraph", "--host", "complete:5", "--tile", "complete:2",
                          "--s", 2)
    assert data["edges"] == 0
    assert main(["pgraph", "--host", "complete:5", "--tile", "complete:2", "--s", "3",
                 "--mode", "sampled"]) == 2


# --- experiments --------------------------------------------------------------------

def test_experiment_grabbing_complete(capsys):
    code, out = run(capsys, "experiment", "grabbing", "--host", "complete:60", "--s", 12,
                    "--samples", 10000, "--seed", 1)
    lines = out.splitlines()
    assert code == 0 and lines[1].split(",")[6] == "1.0000"


def test_experiment_zero_trials(capsys):
    code, out = run(capsys, "experiment", "sweep", "--tile", "complete:3", "--trials", 0,
                    "--seed", 1)
    assert code == 0 and len(out.splitlines()) == 1
    code, out = run(capsys, "experiment", "grabbing", "--samples", 0, "--seed", 1)
    assert code == 0 and len(out.splitlines()) == 1


def test_experiment_requires_seed(capsys):
    assert main(["experiment", "sweep", "--tile", "complete:3"]) == 2


def test_experiment_deterministic(capsys):
    argv = ["experiment", "sweep", "--tile", "complete:3", "--ns", "9", "--ratios", "2/3",
            "--trials", 3, "--seed", 7, "--checkers", "spa,cov"]
    _, a = run(capsys, *argv)
    _, b = run(capsys, *argv, "--workers", 2)
    assert a == b and len(a.splitlines()) == 2


def test_json_output_deterministic(capsys):
    argv = ["analyze", "--host", "cycle:6", "--tile", "complete:2"]
    assert run(capsys, *argv) == run(capsys, *argv)


# --- process-level exit codes --------------------------------------------------------

def test_unknown_flag_exits_2():
    proc = subprocess.run([sys.executable, "-m", "tilinglab", "analyze", "--bogus"],
                          capture_output=True, text=True)
    assert proc.returncode == 2 and "usage" in proc.stderr


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "tilinglab", "thresholds", "--kind",
                           "connectivity", "--k", "2"], capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["value"] == "1/2"
