"""Independent re-verification of certificates against an instance.

Nothing here calls the checker that produced the certificate, except for
``holds=True`` fissility and ``none`` search outcomes, which have no compact
witness and are re-derived from scratch.
"""

from __future__ import annotations

from fractions import Fraction

from .barriers import Certificate, _as_digraph
from .core import KGraph, Matching, Tiling
from .errors import InputError
from .formats import instance_hash, parse_fraction
from .homlift import is_fissile, verify_fissility_witness
from .lattice import check_combination, transferral, verify_separating_vector
from .lp import FractionalCover, FractionalMatching


def _check_space(H, cert):
    w = cert.witness
    rho = parse_fraction(w.get("rho", "0"))
    target = (1 - rho) * Fraction(H.n, H.m)
    if parse_fraction(w["target"]) != target:
        return False, "target does not match rho"
    if cert.holds:
        weights = {tuple(e): parse_fraction(x) for e, x in w["weights"]}
        fm = FractionalMatching(weights, parse_fraction(w["size"]))
        if not fm.is_feasible(H):
            return False, "fractional matching infeasible or size wrong"
        return (fm.size >= target, "matching too small" if fm.size < target else "ok")
    cover = tuple(parse_fraction(x) for x in w["cover"])
    fc = FractionalCover(cover, parse_fraction(w["size"]))
    if not fc.is_feasible(H):
        return False, "fractional cover infeasible or size wrong"
    return (fc.size < target, "cover does not beat the target" if fc.size >= target else "ok")


def _check_div(H, cert):
    w = cert.witness
    parts = w.get("parts") or ([list(range(H.n))] if H.n else [])
    flat = sorted(v for p in parts for v in p)
    if flat != list(range(H.n)):
        return False, "parts do not partition V(H)"
    if not cert.holds:
        root, v = w["pair"]
        if not any(root in p and v in p for p in parts):
            return False, "failing pair lies in different parts"
        return (verify_separating_vector(H, w["dual"], transferral(H.n, v, root)),
                "dual vector does not separate")
    got = {}
    for item in w["transferrals"]:
        root, v = item["pair"]
        coeffs = {tuple(e): int(c) for e, c in item["coefficients"]}
        if not check_combination(H, coeffs, transferral(H.n, v, root)):
            return False, f"combination for {root},{v} is wrong"
        got.setdefault(root, set()).add(v)
    for p in parts:
        root = min(p)
        if set(p) - {root} - got.get(root, set()):
            return False, f"missing transferrals in part rooted at {root}"
    return True, "ok"


def _check_cov(H, cert):
    w = cert.witness
    if not cert.holds:
        v = w["vertex"]
        bad = any(e.count(v) == 1 for e in H.edges)
        return (not bad, "vertex is covered once by some edge")
    edges = w["edges"]
    if len(edges) != H.n:
        return False, "one edge per vertex expected"
    for v, e in enumerate(edges):
        e = tuple(e)
        if e not in H.edges or e.count(v) != 1:
            return False, f"edge for vertex {v} invalid"
    return True, "ok"


def _check_fissile(H, cert):
    if cert.holds:
        return is_fissile(H)[0], "re-run found a suitable tuple without a covering edge"
    return verify_fissility_witness(H, cert.witness), "witness tuple is not a counterexample"


def _check_matching(H, cert):
    from .solver import NONE, exact_perfect_matching

    w = cert.witness
    if cert.holds:
        try:
            Matching(tuple(tuple(e) for e in w["edges"])).validate(H, perfect=True)
        except InputError as exc:
            return False, str(exc)
        return True, "ok"
    if w.get("outcome") != NONE:
        return False, "only exhaustive 'none' outcomes can be certified"
    return exact_perfect_matching(H).outcome == NONE, "a perfect matching exists"


def _check_tiling(F, G, cert):
    from .solver import NONE, exact_tiling

    w = cert.witness
    if cert.holds:
        try:
            Tiling(tuple(tuple(t) for t in w["embeddings"])).validate(F, G, perfect=True)
        except InputError as exc:
            return False, str(exc)
        return True, "ok"
    if w.get("outcome") != NONE:
        return False, "only exhaustive 'none' outcomes can be certified"
    return exact_tiling(F, G).outcome == NONE, "a perfect tiling exists"


def verify_certificate(instance, cert, tile: KGraph = None):
    """Return (valid, reason).  ``instance`` is a digraph (or a host graph
    together with ``tile`` for tiling certificates)."""
    if not isinstance(cert, Certificate):
        cert = Certificate.from_json(cert)
    if cert.instance_hash is not None:
        if instance_hash(_as_digraph(instance)) != cert.instance_hash:
            return False, "instance hash mismatch"
    try:
        if cert.property == "tiling":
            if tile is None:
                raise InputError("tiling certificates need the tile")
            return _check_tiling(tile, instance, cert)
        H = _as_digraph(instance)
        if isinstance(H, KGraph):
            raise InputError("this certificate needs a digraph instance")
        checks = {"space": _check_space, "div": _check_div, "cov": _check_cov,
                  "fissile": _check_fissile, "matching": _check_matching}
        if cert.property not in checks:
            raise InputError(f"unknown certificate property {cert.property!r}")
        ok, reason = checks[cert.property](H, cert)
        return bool(ok), "ok" if ok else reason
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        if isinstance(exc, InputError):
            raise
        return False, f"malformed witness: {exc!r}"
