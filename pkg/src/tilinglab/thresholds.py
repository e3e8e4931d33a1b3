"""Closed-form minimum degree thresholds evaluated from tile invariants.

Every value is an exact :class:`~tilinglab.numbers.Bound`; point values have
equal ends.  Reports carry an ``applicable`` flag: when False the value is
what the quoted formula gives outside the regime where it is a theorem, and
must not be read as one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

import numpy as np

from .core import KGraph
from .errors import InputError
from .invariants import (
    INF,
    coloring_profile,
    component_orders,
    crit_from,
    has_bridge,
    interval_chromatic,
    is_ordered_cone,
)
from .numbers import COVER_CONSTANT, Bound, Surd, bound_max

ZERO = Fraction(0)
HALF = Fraction(1, 2)


@dataclass
class ThresholdReport:
    quantity: str
    value: Bound
    provenance: str
    applicable: bool = True
    conditions: dict = field(default_factory=dict)

    def __post_init__(self):
        self.value = Bound.of(self.value)
        if self.value.lo < 0 or self.value.hi > 1:
            raise ValueError(f"{self.quantity} outside [0, 1]")

    def to_json(self):
        return {"quantity": self.quantity, "value": self.value.to_json(),
                "provenance": self.provenance, "applicable": self.applicable,
                "conditions": self.conditions}


def _one_minus_inv(x):
    return 1 - 1 / Fraction(x)


def _gcd_json(g):
    return "inf" if g == INF else g


# --- graphs ------------------------------------------------------------------

def threshold_graph_tiling(F: KGraph) -> dict:
    """th_1 for perfect F-tilings of graphs and its space/div/cov parts."""
    if F.k != 2:
        raise InputError("graph tiling thresholds need a 2-graph tile")
    p = coloring_profile(F)
    chi, g = p.chi, p.gcd
    cond = {"chi": chi, "gcd": _gcd_json(g), "chi_crit": str(crit_from(chi, p.tau))}
    if chi < 2:
        zero = ThresholdReport("th_1(til)", ZERO, "edgeless tile: every host is tileable",
                               True, cond)
        return {"spa": ThresholdReport("th_1(spa)", ZERO, "edgeless tile", True, cond),
                "div": ThresholdReport("th_1(div)", ZERO, "edgeless tile", True, cond),
                "cov": ThresholdReport("th_1(cov)", ZERO, "edgeless tile", True, cond),
                "til": zero}
    space = ThresholdReport("th_1(spa)", _one_minus_inv(crit_from(chi, p.tau)),
                            "Komlos: 1 - 1/chi_crit", True, cond)
    if chi >= 3:
        if g == 1:
            div = ThresholdReport("th_1(div)", _one_minus_inv(chi - 1),
                                  "gcd = 1: 1 - 1/(chi - 1)", True, cond)
            cov = ThresholdReport("th_1(cov)", _one_minus_inv(chi - 1),
                                  "gcd = 1: 1 - 1/(chi - 1)", True, cond)
        else:
            div = ThresholdReport("th_1(div)", _one_minus_inv(chi),
                                  "gcd >= 2 (infinite gcd included): 1 - 1/chi", True, cond)
            cov = ThresholdReport("th_1(cov)", Bound(ZERO, _one_minus_inv(chi - 1)),
                                  "exact value stated only for gcd = 1; upper bound 1 - 1/(chi - 1)",
                                  False, cond)
        til_prov = "Kuhn-Osthus: max of the three parts"
    else:
        orders = component_orders(F)
        cg = 0
        for o in orders:
            cg = math.gcd(cg, o)
        cond["component_gcd"] = cg
        div = ThresholdReport("th_1(div)", ZERO if cg == 1 else HALF,
                              "bipartite tile: 0 if component orders have gcd 1, else 1/2",
                              True, cond)
        cov = ThresholdReport("th_1(cov)", Bound(ZERO, HALF),
                              "bipartite tile: cover threshold not stated; bounded by 1/2",
                              False, cond)
        til_prov = "max of the three parts (bipartite tile)"
    til_value = bound_max(space.value, div.value, cov.value)
    til = ThresholdReport("th_1(til)", til_value, til_prov,
                          chi >= 3 and g == 1 or til_value.is_exact, cond)
    return {"spa": space, "div": div, "cov": cov, "til": til}


# --- complete k-partite k-graphs ------------------------------------------

def complete_partite_parts(F: KGraph):
    """Part sizes if F is a complete k-partite k-graph, else None."""
    if F.n == 0:
        return None
    p = coloring_profile(F)
    if p.chi != F.k:
        return None
    for sizes in p.class_sizes:
        if F.e == math.prod(sizes):
            return list(sizes)
    return None


def threshold_kpartite(F: KGraph) -> dict:
    """Codegree and (k-2)-degree reports for complete k-partite k-graphs."""
    k = F.k
    parts = complete_partite_parts(F)
    if parts is None or k < 3:
        cond = {"complete_k_partite": parts is not None, "k": k}
        nan = Bound(ZERO, Fraction(1))
        return {"til_k-1": ThresholdReport(f"th_{k - 1}(til)", nan,
                                           "needs a complete k-partite k-graph, k >= 3", False, cond)}
    p = coloring_profile(F)
    m = F.n
    tau1, tau2 = Fraction(parts[0], m), Fraction(parts[1], m)
    cone = 1 in parts
    ok = p.gcd == 1
    cond = {"k": k, "parts": parts, "gcd": _gcd_json(p.gcd), "tau": str(p.tau),
            "tau1": str(tau1), "tau2": str(tau2), "cone": cone}
    out = {}
    out["spa_k-1"] = ThresholdReport(f"th_{k - 1}(spa)", p.tau, "Mycroft: tau", ok, cond)
    out["div_k-1"] = ThresholdReport(f"th_{k - 1}(div)", ZERO, "codegree divisibility", ok, cond)
    out["cov_k-1"] = ThresholdReport(f"th_{k - 1}(cov)", ZERO, "k-partite tile", ok, cond)
    out["til_k-1"] = ThresholdReport(f"th_{k - 1}(til)", p.tau, "Mycroft: tau(F)", ok, cond)
    spa = max(1 - (1 - tau1) ** 2, (tau1 + tau2) ** 2)
    div = Fraction(1, 4) if k == 3 else ZERO
    cov = Surd(0) if cone else COVER_CONSTANT
    out["spa_k-2"] = ThresholdReport(f"th_{k - 2}(spa)", spa,
                                     "max{1-(1-tau1)^2, (tau1+tau2)^2}", ok, cond)
    out["div_k-2"] = ThresholdReport(f"th_{k - 2}(div)", div, "1/4 if k = 3 else 0", ok, cond)
    out["cov_k-2"] = ThresholdReport(f"th_{k - 2}(cov)", cov,
                                     "0 for cones, else 2(sqrt2-1)^2", ok or not cone, cond)
    out["til_k-2"] = ThresholdReport(f"th_{k - 2}(til)", bound_max(spa, div, cov),
                                     "max of the three (k-2)-degree parts", ok, cond)
    return out


def is_tetrahedron(F: KGraph):
    return F.k == 3 and F.n == 4 and F.e == 4


def known_constants(F: KGraph, d: int):
    """Literature values recorded as constants (not derived here)."""
    if is_tetrahedron(F) and d == 2:
        return {
            "til": ThresholdReport("th_2(til)", Fraction(3, 4),
                                   "known constant for the tetrahedron (Keevash-Mycroft, Lo-Markstrom)"),
            "rmix": ThresholdReport("th_2(rmix)", Bound(ZERO, Fraction(2, 3)),
                                    "codegree > 2n/3 puts every edge in a tetrahedron", False),
            "rtil": ThresholdReport("th_2(rtil)", Fraction(3, 4),
                                    "max of tiling and mixed thresholds"),
        }
    if F.n == F.k and F.e == 1 and F.k >= 3 and d == F.k - 1:
        return {"til": ThresholdReport(f"th_{d}(til)", HALF,
                                       "perfect matching codegree threshold (Rodl-Rucinski-Szemeredi)")}
    return {}


# --- rainbow -------------------------------------------------------------

def threshold_tiling(F: KGraph, d: int):
    """Best available report for th_d(til_F), or None."""
    if F.k == 2 and d == 1:
        return threshold_graph_tiling(F)["til"]
    known = known_constants(F, d)
    if "til" in known:
        return known["til"]
    parts = complete_partite_parts(F) if F.k >= 3 else None
    if parts is not None:
        rep = threshold_kpartite(F)
        key = "til_k-1" if d == F.k - 1 else ("til_k-2" if d == F.k - 2 else None)
        if key is not None:
            return rep[key]
    return None


def threshold_rainbow(F: KGraph, d: int = 1) -> dict:
    """rtil = max(til, rmix) with the mixed threshold where it is known."""
    if not 1 <= d <= F.k - 1:
        raise InputError(f"d must lie in 1..{F.k - 1}")
    til = threshold_tiling(F, d)
    til_value = til.value if til is not None else Bound(ZERO, Fraction(1))
    cond = {"d": d, "k": F.k}
    if F.n == F.k and F.e == 1:
        rmix = ThresholdReport(f"th_{d}(rmix)", Bound(ZERO, til_value.hi),
                               "single edge: two colours of tiling degree share an edge", False, cond)
        rtil = ThresholdReport(f"th_{d}(rtil)", til_value,
                               "single edge: rainbow threshold equals the tiling threshold",
                               til is not None and til.applicable, cond)
        return {"til": til, "rmix": rmix, "rtil": rtil}
    known = known_constants(F, d)
    if "rtil" in known:
        return {"til": known["til"], "rmix": known["rmix"], "rtil": known["rtil"]}
    if F.k == 2 and d == 1:
        p = coloring_profile(F)
        bridge = has_bridge(F)
        cond.update(chi=p.chi, bridge=bridge)
        if p.chi == 2 and bridge:
            rmix = ThresholdReport("th_1(rmix)", ZERO, "bipartite tile with a bridge", True, cond)
        elif not bridge and p.chi >= 2:
            rmix = ThresholdReport("th_1(rmix)", max(_one_minus_inv(p.chi - 1), HALF),
                                   "bridgeless: max{1 - 1/(chi - 1), 1/2}", True, cond)
        else:
            # chi >= 3 with a bridge: rtil = til, so rmix is at most til
            rmix = ThresholdReport("th_1(rmix)", Bound(ZERO, til_value.hi),
                                   "chi >= 3 with a bridge: only bounded by th_1(til)", False, cond)
            rtil = ThresholdReport("th_1(rtil)", til_value,
                                   "Montgomery-Muyesser-Pehova: equals th_1(til) for chi >= 3",
                                   til.applicable, cond)
            return {"til": til, "rmix": rmix, "rtil": rtil}
        rtil = ThresholdReport("th_1(rtil)", til_value.max(rmix.value),
                               "max{th_1(til), th_1(rmix)}", til.applicable, cond)
        return {"til": til, "rmix": rmix, "rtil": rtil}
    if d == F.k - 1 and complete_partite_parts(F) is not None:
        rmix = ThresholdReport(f"th_{d}(rmix)", ZERO, "k-partite tile, codegree", True, cond)
        rtil = ThresholdReport(f"th_{d}(rtil)", til_value, "max{th(til), th(rmix)}",
                               til.applicable, cond)
        return {"til": til, "rmix": rmix, "rtil": rtil}
    rmix = ThresholdReport(f"th_{d}(rmix)", Bound(ZERO, Fraction(1)), "unknown", False, cond)
    rtil = ThresholdReport(f"th_{d}(rtil)", Bound(til_value.lo, Fraction(1)),
                           "at least th(til); mixed threshold unknown", False, cond)
    return {"til": til, "rmix": rmix, "rtil": rtil}


# --- ordered graphs -----------------------------------------------------

def threshold_ordered(F: KGraph, crit_upper=None, limits=None) -> dict:
    """Freschi-Treglown value as an interval over the unknown chi^<_crit.

    chi^<_crit lies in [chi^< - 1, crit_upper] (crit_upper None means no
    bottlegraph was found, so no finite upper bound is known).
    """
    if F.k != 2:
        raise InputError("ordered thresholds need an ordered 2-graph")
    r, _ = interval_chromatic(F)
    cond = {"chi_lt": r, "crit_upper": None if crit_upper is None else str(crit_upper),
            "limits": limits or {}}
    if r < 3:
        return {"til": ThresholdReport("th_1(otil)", Bound(ZERO, Fraction(1)),
                                       "needs interval chromatic number >= 3", False, cond)}
    cone = is_ordered_cone(F)[0]
    cond["ordered_cone"] = cone
    lo_crit = Fraction(r - 1)
    hi_val = Fraction(1) if crit_upper is None else _one_minus_inv(crit_upper)
    if cone:
        value = Bound(_one_minus_inv(lo_crit), max(hi_val, _one_minus_inv(lo_crit)))
        prov = "ordered cone: 1 - 1/chi^<_crit in both branches"
    else:
        base = _one_minus_inv(r)
        value = Bound(base, max(base, hi_val))
        prov = "not an ordered cone: 1 - 1/max{chi^<, chi^<_crit}"
    out = {"til": ThresholdReport("th_1(otil)", value, "Freschi-Treglown; " + prov, True, cond)}
    crit_known_below = crit_upper is not None and crit_upper < r
    out["spa"] = ThresholdReport("th_1(ospa)", Bound(ZERO, hi_val),
                                 "upper bound 1 - 1/chi^<_crit", False, cond)
    out["div"] = ThresholdReport("th_1(odiv)",
                                 Bound(ZERO, _one_minus_inv(r - 1) if crit_known_below
                                       else _one_minus_inv(r)),
                                 "upper bound from flexibility", False, cond)
    out["cov"] = ThresholdReport("th_1(ocov)",
                                 Bound(ZERO, _one_minus_inv(r - 1) if cone else _one_minus_inv(r)),
                                 "upper bound: ordered cones need less", False, cond)
    return out


# --- matchings and connectivity -----------------------------------------

def matching_threshold_bounds(s: int) -> ThresholdReport:
    if s < 2:
        raise InputError("s must be at least 2")
    lo, hi = HALF, _one_minus_inv(s)
    return ThresholdReport("th_1(mat_s)", Bound(lo, hi),
                           "lower bound 1/2; Daykin-Haggkvist upper bound 1 - 1/s",
                           True, {"s": s, "exact": lo == hi})


def connectivity_threshold(k: int, d: int = 1) -> ThresholdReport:
    """th_d(con_F) for k-partite k-graphs F (pass k directly or a tile)."""
    if isinstance(k, KGraph):
        k = k.k
    if k < 2:
        raise InputError("k must be at least 2")
    if not 1 <= d <= k - 1:
        raise InputError(f"d must lie in 1..{k - 1}")
    if d == 1:
        return ThresholdReport("th_1(con)", Fraction(1, 2 ** (k - 1)),
                               "Kruskal-Katona: 2^(1-k)", True, {"k": k})
    return ThresholdReport(f"th_{d}(con)", ZERO, "any two vertices share an edge", True,
                           {"k": k, "d": d})


# --- the optimisation fact ---------------------------------------------

def fact_grid_max(step=1e-3, chunk=16):
    """Maximise d1+d2+d3 over a grid subject to
    d1 + D <= (1 - max{sqrt(d2 + d3/2), D})^2 with D = d1 + d2 + d3 <= 1.

    Returns (best_sum, best_point); every grid point is evaluated.
    """
    steps = int(round(1 / step))
    grid = np.arange(steps + 1) * step
    d2, d3 = np.meshgrid(grid, grid, indexing="ij")
    inner = np.sqrt(d2 + d3 / 2)
    base = d2 + d3
    best, arg = -1.0, None
    for start in range(0, steps + 1, chunk):
        d1 = grid[start:start + chunk][:, None, None]
        total = d1 + base[None]
        rhs = (1 - np.maximum(inner[None], total)) ** 2
        ok = (total <= 1) & (d1 + total <= rhs + 1e-12)
        if not ok.any():
            continue
        vals = np.where(ok, total, -1.0)
        idx = np.unravel_index(np.argmax(vals), vals.shape)
        if vals[idx] > best:
            best = float(vals[idx])
            arg = (float(grid[start + idx[0]]), float(grid[idx[1]]), float(grid[idx[2]]))
    return best, arg
