"""Command-line interface.

Exit codes: 0 success, 2 invalid input, 3 verification failed, 4 resource
budget exceeded (inconclusive).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from . import constructions as cons
from .barriers import (
    Certificate,
    has_space,
    is_covered,
    is_lattice_complete,
    parse_properties,
    property_graph,
)
from .certificates import verify_certificate
from .core import KGraph, Partition, complete_kgraph, complete_partite, cycle_graph, path_graph
from .errors import InputError, ResourceLimitError
from .experiments import (
    GRABBING_COLUMNS,
    SweepConfig,
    grabbing_check,
    random_host,
    rows_to_csv,
    sweep,
    sweep_columns,
)
from .formats import (
    dumps,
    fraction_str,
    instance_hash,
    parse_fraction,
    read_instance,
    to_json_obj,
    write_instance,
)
from .homlift import GraphFamily, hom_digraph, is_fissile, ordered_hom_digraph, rainbow_digraph
from .invariants import coloring_profile, ordered_profile
from .solver import (
    FOUND,
    INCONCLUSIVE,
    AbsorptionParams,
    absorption_solve,
    SolveReport,
    exact_perfect_matching,
    greedy_almost_matching,
)
from .numbers import Bound
from .thresholds import (
    ThresholdReport,
    connectivity_threshold,
    matching_threshold_bounds,
    threshold_graph_tiling,
    threshold_kpartite,
    threshold_ordered,
    threshold_rainbow,
    threshold_tiling,
)

EXIT_OK, EXIT_INPUT, EXIT_VERIFY, EXIT_BUDGET = 0, 2, 3, 4


# --- helpers ---------------------------------------------------------------

def _ints(text):
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise InputError(f"expected comma separated integers, got {text!r}") from None


def load_graph(spec: str):
    """A file path, or a built-in: complete:n[:k], cycle:n, path:n, kpartite:k:a,b,c."""
    if Path(spec).exists():
        return read_instance(spec)
    head, _, rest = spec.partition(":")
    args = rest.split(":") if rest else []
    try:
        if head == "complete":
            n = int(args[0])
            return complete_kgraph(n, int(args[1]) if len(args) > 1 else 2)
        if head == "cycle":
            return cycle_graph(int(args[0]))
        if head == "path":
            return path_graph(int(args[0]))
        if head == "kpartite":
            k = int(args[0])
            sizes = _ints(args[1])
            if len(sizes) != k:
                raise InputError("kpartite:k:sizes needs k part sizes")
            return complete_partite(sizes, k)
    except (IndexError, ValueError) as exc:
        if isinstance(exc, InputError):
            raise
        raise InputError(f"bad built-in spec {spec!r}") from None
    raise InputError(f"no such file or built-in: {spec!r}")


def _emit(data, out=None, stream=None):
    text = dumps(data)
    if out:
        Path(out).write_text(text)
    else:
        (stream or sys.stdout).write(text)


def _instance_from(args):
    """The digraph to work on: --instance, or the lift of --tile into --host."""
    if getattr(args, "instance", None):
        H = load_graph(args.instance)
        if isinstance(H, KGraph):
            raise InputError("--instance must be a digraph; use --host/--tile for graphs")
        return H
    if not (args.host and args.tile):
        raise InputError("give --instance, or both --host and --tile")
    F, G = load_graph(args.tile), load_graph(args.host)
    if isinstance(G, GraphFamily):
        return rainbow_digraph(F, G).digraph
    if getattr(args, "ordered", False):
        return ordered_hom_digraph(F, G).digraph
    return hom_digraph(F, G).digraph


def _partition(text, n):
    if not text:
        return None
    parts = [_ints(p) for p in text.split("/")]
    return Partition(tuple(parts), frozenset(range(n)))


# --- verbs ------------------------------------------------------------------

def cmd_analyze(args):
    H = _instance_from(args)
    h = instance_hash(H)
    rho = parse_fraction(args.rho)
    certs = []
    for name in args.props.split(","):
        name = name.strip()
        if name in ("spa", "space"):
            c = has_space(H, rho)
        elif name == "div":
            c = is_lattice_complete(H, _partition(args.partition, H.n))
        elif name == "cov":
            c = is_covered(H)
        elif name == "fissile":
            ok, wit = is_fissile(H)
            c = Certificate("fissile", ok, wit or {})
        else:
            raise InputError(f"unknown property {name!r}")
        c.instance_hash = h
        certs.append(c.to_json())
    bundle = {"schema": "tiling-lab/1", "instance_hash": h, "m": H.m, "n": H.n,
              "edges": H.e, "certificates": certs}
    if args.cert_dir:
        d = Path(args.cert_dir)
        d.mkdir(parents=True, exist_ok=True)
        for c in certs:
            (d / f"{c['property']}.json").write_text(dumps(c))
    _emit(bundle, args.output)
    return EXIT_OK


def cmd_hom(args):
    F, G = load_graph(args.tile), load_graph(args.host)
    if isinstance(G, GraphFamily):
        H = rainbow_digraph(F, G)
    elif args.ordered:
        H = ordered_hom_digraph(F, G)
    else:
        H = hom_digraph(F, G)
    if args.output:
        write_instance(H.digraph, args.output, args.format)
        _emit({"flavor": H.flavor, "m": H.m, "n": H.n, "edges": H.digraph.e,
               "instance_hash": instance_hash(H.digraph)})
    else:
        _emit(to_json_obj(H.digraph))
    return EXIT_OK


def cmd_solve(args):
    H = _instance_from(args)
    if args.method in ("absorb", "greedy") and args.seed is None:
        raise InputError(f"--method {args.method} is randomised and requires --seed")
    if args.method == "exact":
        rep = exact_perfect_matching(H, budget=args.budget)
        outcome, M, stats = rep.outcome, rep.matching, rep.stats
    elif args.method == "absorb":
        rep = absorption_solve(H, AbsorptionParams(seed=args.seed, budget=args.budget,
                                                   q=args.q))
        outcome, M, stats = rep.outcome, rep.matching, rep.stats
    else:
        M, left = greedy_almost_matching(H, strategy="lp-rounding", seed=args.seed)
        outcome = FOUND if not left else INCONCLUSIVE
        stats = {"method": "greedy", "leftover": len(left), "seed": args.seed}
    report = SolveReport(outcome, matching=M if outcome == FOUND else None, stats=stats)
    cert = report.certificate()
    cert.instance_hash = instance_hash(H)
    cert.seed = args.seed
    data = {"outcome": outcome, "stats": stats, "certificate": cert.to_json()}
    if args.method == "greedy":
        data["matching"] = [list(e) for e in M.edges]
    _emit(data, args.output)
    return EXIT_BUDGET if outcome == INCONCLUSIVE and args.method != "greedy" else EXIT_OK


def cmd_invariants(args):
    F = load_graph(args.tile)
    data = {"n": F.n, "k": F.k, "edges": F.e}
    if not args.ordered_only:
        data["coloring"] = coloring_profile(F).to_json()
    if args.ordered or args.ordered_only:
        prof = ordered_profile(F, search_crit=args.crit_search,
                               max_part_size=args.max_part_size, b_max=args.b_max)
        data["ordered"] = prof.to_json()
    _emit(data, args.output)
    return EXIT_OK


def _reports(d):
    return {k: v.to_json() for k, v in d.items() if v is not None}


def cmd_thresholds(args):
    if args.kind == "matching":
        _emit(matching_threshold_bounds(args.s).to_json(), args.output)
        return EXIT_OK
    if args.kind == "connectivity":
        _emit(connectivity_threshold(args.k, args.d).to_json(), args.output)
        return EXIT_OK
    if not args.tile:
        raise InputError("--tile is required for this kind")
    F = load_graph(args.tile)
    kind = args.kind or ("graph" if F.k == 2 and args.d == 1 else "tiling")
    if kind == "graph":
        data = _reports(threshold_graph_tiling(F))
    elif kind == "tiling":
        if not 1 <= args.d <= F.k - 1:
            raise InputError(f"d must lie in 1..{F.k - 1}")
        rep = threshold_tiling(F, args.d)
        if rep is None:
            rep = ThresholdReport(f"th_{args.d}(til)", Bound(0, 1),
                                  "no closed form available for this tile", False)
        data = {"til": rep.to_json()}
    elif kind == "kpartite":
        data = _reports(threshold_kpartite(F))
    elif kind == "rainbow":
        data = _reports(threshold_rainbow(F, args.d))
    else:
        prof = ordered_profile(F, search_crit=args.crit_search,
                               max_part_size=args.max_part_size, b_max=args.b_max)
        data = _reports(threshold_ordered(F, prof.crit_bound, prof.limits))
    _emit(data, args.output)
    return EXIT_OK


def cmd_construct(args):
    p = {"n": args.n, "k": args.k, "i": args.i, "ell": args.ell, "b": args.b}
    if args.beta is not None:
        p["beta"] = parse_fraction(args.beta)
    if args.parts is not None:
        p["parts"] = tuple(_ints(args.parts))
    p = {key: val for key, val in p.items() if val is not None}
    if args.kind in ("cover-barrier", "divisibility-barrier") and "k" not in p:
        p["k"] = 3 if args.kind == "cover-barrier" else 2
    c = cons.build(cons.ConstructionSpec(args.kind, p))
    record = c.to_json()
    record["instance_hash"] = instance_hash(c.graph)
    if args.output:
        write_instance(c.graph, args.output, args.format)
        Path(str(args.output) + ".json").write_text(dumps(record))
    _emit(record)
    return EXIT_OK


def cmd_pgraph(args):
    H = _instance_from(args)
    prop = parse_properties(args.props, parse_fraction(args.rho))
    if args.mode == "sampled":
        if args.seed is None:
            raise InputError("sampled mode requires --seed")
        res = property_graph(H, prop, args.s, mode="sampled", seed=args.seed, trials=args.trials)
        data = {"mode": "sampled", "s": args.s, "seed": args.seed, "trials": args.trials,
                "fractions": {str(v): fraction_str(f) for v, f in res.fractions.items()},
                "min_fraction": fraction_str(res.min_fraction)}
        _emit(data, args.output)
        return EXIT_OK
    P = property_graph(H, prop, args.s)
    deg = P.degrees()
    data = {"mode": "exact", "property": prop.name, "s": args.s, "n": P.n, "edges": P.e,
            "min_degree": min(deg) if deg else 0, "graph": to_json_obj(P)}
    _emit(data, args.output)
    return EXIT_OK


def cmd_certify(args):
    inst = load_graph(args.instance)
    tile = load_graph(args.tile) if args.tile else None
    try:
        data = json.loads(Path(args.cert).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read certificate: {exc}") from None
    if "certificate" in data and "property" not in data:
        data = data["certificate"]
    ok, reason = verify_certificate(inst, data, tile=tile)
    _emit({"valid": ok, "reason": reason, "property": data.get("property")})
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_experiment(args):
    if args.seed is None:
        raise InputError("experiments are randomised and require --seed")
    if args.which == "sweep":
        if not args.tile:
            raise InputError("sweep needs --tile")
        cfg = SweepConfig(load_graph(args.tile), _ints(args.ns),
                          [parse_fraction(r) for r in args.ratios.split(",")],
                          args.trials, args.seed,
                          [c for c in args.checkers.split(",") if c] if args.checkers else [],
                          not args.no_solve, args.budget, args.workers)
        rows = sweep(cfg) if args.trials > 0 else []
        text = rows_to_csv(rows, sweep_columns(cfg))
    else:
        import numpy as np

        if args.host:
            G = load_graph(args.host)
        else:
            n = args.n or 60
            delta = math.ceil(parse_fraction(args.min_ratio) * n)
            G = random_host(n, delta, np.random.default_rng(args.seed),
                            density=args.density)
        rows = []
        if args.samples > 0:
            rows = [grabbing_check(G, args.s, args.samples, args.seed, args.keep).to_row()]
        text = rows_to_csv(rows, GRABBING_COLUMNS)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


# --- parser -----------------------------------------------------------------

def _add_instance(p):
    p.add_argument("--instance", help="digraph file (text or JSON)")
    p.add_argument("--host", help="host graph file, family file or built-in")
    p.add_argument("--tile", help="tile graph file or built-in")
    p.add_argument("--ordered", action="store_true", help="use the ordered lift")


def build_parser():
    ap = argparse.ArgumentParser(prog="tilinglab", description="Perfect tiling barrier lab")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="space/div/cov certificates for a lift")
    _add_instance(p)
    p.add_argument("--props", default="spa,div,cov")
    p.add_argument("--rho", default="0")
    p.add_argument("--partition", help="parts as 0,1/2,3 for div(U)")
    p.add_argument("--cert-dir", help="also write one certificate file per property")
    p.add_argument("--json", action="store_true", help="JSON output (the default)")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("hom", help="build the homomorphism digraph")
    p.add_argument("--host", required=True)
    p.add_argument("--tile", required=True)
    p.add_argument("--ordered", action="store_true")
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_hom)

    p = sub.add_parser("solve", help="find a perfect matching of a digraph")
    _add_instance(p)
    p.add_argument("--method", choices=["exact", "absorb", "greedy"], default="exact")
    p.add_argument("--budget", type=int, default=10**7)
    p.add_argument("--seed", type=int)
    p.add_argument("--q", type=int, help="absorber order (default 2m)")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("invariants", help="colouring and ordered invariants of a tile")
    p.add_argument("--tile", required=True)
    p.add_argument("--ordered", action="store_true", help="add the ordered profile")
    p.add_argument("--ordered-only", action="store_true")
    p.add_argument("--crit-search", action="store_true",
                   help="search bottlegraphs for an upper bound on the ordered critical number")
    p.add_argument("--max-part-size", type=int, default=3)
    p.add_argument("--b-max", type=int, default=2)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_invariants)

    p = sub.add_parser("thresholds", help="evaluate threshold formulas")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--kind", choices=["graph", "tiling", "kpartite", "rainbow", "ordered",
                                      "matching", "connectivity"],
                   help="default: graph for 2-graph tiles, tiling otherwise")
    g.add_argument("--ordered", dest="kind", action="store_const", const="ordered")
    g.add_argument("--rainbow", dest="kind", action="store_const", const="rainbow")
    p.add_argument("--tile")
    p.add_argument("--d", type=int, default=1)
    p.add_argument("--s", type=int, default=2)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--crit-search", action="store_true")
    p.add_argument("--max-part-size", type=int, default=3)
    p.add_argument("--b-max", type=int, default=2)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_thresholds)

    p = sub.add_parser("construct", help="generate an extremal construction")
    p.add_argument("kind", choices=sorted(cons.BUILDERS))
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--i", type=int)
    p.add_argument("--beta")
    p.add_argument("--parts")
    p.add_argument("--ell", type=int)
    p.add_argument("--b", type=int)
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("pgraph", help="property graph of a digraph")
    _add_instance(p)
    p.add_argument("--props", default="spa,div,cov")
    p.add_argument("--rho", default="0")
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--mode", choices=["exact", "sampled"], default="exact")
    p.add_argument("--seed", type=int)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_pgraph)

    p = sub.add_parser("certify", help="re-verify a certificate against an instance")
    p.add_argument("--instance", required=True)
    p.add_argument("--cert", required=True)
    p.add_argument("--tile", help="tile for tiling certificates")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("experiment", help="Monte Carlo sweeps (CSV output)")
    p.add_argument("which", choices=["sweep", "grabbing"])
    p.add_argument("--seed", type=int)
    p.add_argument("--tile")
    p.add_argument("--ns", default="9,12,15,18,21")
    p.add_argument("--ratios", default="1/2,3/5,2/3,3/4")
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--checkers", default="")
    p.add_argument("--no-solve", action="store_true")
    p.add_argument("--budget", type=int, default=10**6)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--host", help="grabbing: fixed host instead of a random one")
    p.add_argument("--n", type=int)
    p.add_argument("--min-ratio", default="4/5")
    p.add_argument("--density", type=float)
    p.add_argument("--s", type=int, default=12)
    p.add_argument("--samples", type=int, default=10**4)
    p.add_argument("--keep", type=float, default=0.7,
                   help="retain delta_1 >= keep * (s - 1)")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_experiment)
    return ap


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ResourceLimitError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
