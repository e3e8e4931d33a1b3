"""Integer lattice generated by edge indicator vectors.

Generators are inserted one at a time into an echelon basis using extended
gcd row operations, then reduced to Hermite normal form.  Every basis vector
remembers its expression as an integer combination of edges, which gives
coefficient extraction for free.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .core import Digraph, indicator_vector
from .errors import InputError


def xgcd(a, b):
    """Return (g, x, y) with a*x + b*y = g = gcd(a, b) >= 0."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def _combine(s, a, t, b):
    """Integer combination s*a + t*b of sparse coefficient dicts."""
    out = {}
    for key, val in a.items():
        out[key] = out.get(key, 0) + s * val
    for key, val in b.items():
        out[key] = out.get(key, 0) + t * val
    return {key: val for key, val in out.items() if val}


@dataclass
class LatticeBasis:
    """Echelon basis of L(H): row i has leading entry ``rows[i][pivots[i]] > 0``.

    ``combos[i]`` maps edge index -> integer coefficient, and ``edges`` is the
    edge list those indices refer to.
    """

    n: int
    rows: list
    pivots: list
    combos: list
    edges: list

    @property
    def rank(self):
        return len(self.rows)

    def determinant_of_pivots(self):
        det = 1
        for r, p in zip(self.rows, self.pivots):
            det *= r[p]
        return det


def _build(n, gens):
    """gens: list of (vector, combo). Returns echelon rows keyed by pivot column."""
    by_pivot = {}
    for vec, combo in gens:
        vec = list(vec)
        col = 0
        while col < n:
            if vec[col] == 0:
                col += 1
                continue
            if col not in by_pivot:
                if vec[col] < 0:
                    vec = [-x for x in vec]
                    combo = {k: -v for k, v in combo.items()}
                by_pivot[col] = (vec, combo)
                break
            prow, pcombo = by_pivot[col]
            a, b = prow[col], vec[col]
            g, x, y = xgcd(a, b)
            # [x y; -b/g a/g] is unimodular
            new_p = [x * p + y * q for p, q in zip(prow, vec)]
            rest = [(-b // g) * p + (a // g) * q for p, q in zip(prow, vec)]
            by_pivot[col] = (new_p, _combine(x, pcombo, y, combo))
            combo = _combine(-b // g, pcombo, a // g, combo)
            vec = rest
            col += 1
    return by_pivot


def lattice_basis(H: Digraph) -> LatticeBasis:
    edges = H.sorted_edges()
    gens = [(indicator_vector(e, H.n), {i: 1}) for i, e in enumerate(edges)]
    by_pivot = _build(H.n, gens)
    cols = sorted(by_pivot)
    rows = [by_pivot[c][0] for c in cols]
    combos = [by_pivot[c][1] for c in cols]
    # reduce entries above each pivot into [0, pivot)
    for i, c in enumerate(cols):
        piv = rows[i][c]
        for j in range(i):
            q = rows[j][c] // piv
            if q:
                rows[j] = [x - q * y for x, y in zip(rows[j], rows[i])]
                combos[j] = _combine(1, combos[j], -q, combos[i])
    return LatticeBasis(H.n, [tuple(r) for r in rows], cols, combos, edges)


def reduce_vector(B: LatticeBasis, b):
    """Subtract basis rows from b in pivot order.

    Returns (remainder, coefficients over basis rows).  b is in the lattice iff
    the remainder is zero.
    """
    if len(b) != B.n:
        raise InputError(f"vector has length {len(b)}, lattice dimension is {B.n}")
    rem = list(b)
    coeffs = [0] * B.rank
    for i, (row, col) in enumerate(zip(B.rows, B.pivots)):
        if rem[col] == 0:
            continue
        q, r = divmod(rem[col], row[col])
        if r:
            return rem, None
        coeffs[i] = q
        rem = [x - q * y for x, y in zip(rem, row)]
    return rem, coeffs


def in_lattice(B: LatticeBasis, b) -> bool:
    rem, coeffs = reduce_vector(B, b)
    return coeffs is not None and not any(rem)


def coefficients_from_basis(B: LatticeBasis, b):
    """Integer coefficients {edge: c_e} with b = sum c_e 1_e, or None."""
    rem, coeffs = reduce_vector(B, b)
    if coeffs is None or any(rem):
        return None
    total = {}
    for q, combo in zip(coeffs, B.combos):
        if q:
            total = _combine(1, total, q, combo)
    return {B.edges[i]: c for i, c in sorted(total.items())}


def express_in_lattice(H: Digraph, b):
    """Return {edge: integer} with b = sum c_e 1_e, or None when infeasible."""
    return coefficients_from_basis(lattice_basis(H), b)


def check_combination(H: Digraph, coeffs, b):
    vec = [0] * H.n
    for e, c in coeffs.items():
        if tuple(e) not in H.edges:
            return False
        for v in e:
            vec[v] += c
    return vec == list(b)


def _solve_pivot_system(B: LatticeBasis, rhs):
    """Find y supported on pivot columns with rows[i] . y = rhs[i] (exact)."""
    r = B.rank
    y = [Fraction(0)] * B.n
    for i in reversed(range(r)):
        row, col = B.rows[i], B.pivots[i]
        acc = Fraction(rhs[i])
        for j in range(i + 1, r):
            acc -= row[B.pivots[j]] * y[B.pivots[j]]
        y[col] = acc / row[col]
    return y


def separating_vector(B: LatticeBasis, b):
    """A rational y with y.1_e integral for all generators and y.b not integral.

    Exists exactly when b is not in the lattice; returns None otherwise.
    """
    if in_lattice(B, b):
        return None
    r = B.rank
    # rational coordinates of b in the echelon basis, if b lies in the Q-span
    lam = [Fraction(0)] * r
    rem = [Fraction(x) for x in b]
    for i, (row, col) in enumerate(zip(B.rows, B.pivots)):
        lam[i] = rem[col] / row[col]
        rem = [x - lam[i] * y for x, y in zip(rem, row)]
    if not any(rem):
        i = next(i for i in range(r) if lam[i].denominator != 1)
        rhs = [1 if j == i else 0 for j in range(r)]
        return _solve_pivot_system(B, rhs)
    pivset = set(B.pivots)
    for free in range(B.n):
        if free in pivset:
            continue
        rhs = [-row[free] for row in B.rows]
        y = _solve_pivot_system(B, rhs)
        y[free] = Fraction(1)
        dot = sum((yi * bi for yi, bi in zip(y, b)), Fraction(0))
        if dot:
            return [yi / (2 * dot) for yi in y]
    raise AssertionError("no separating vector found for a vector outside the span")


def verify_separating_vector(H: Digraph, y, b):
    y = [Fraction(v) for v in y]
    for e in H.edges:
        if sum((y[v] for v in e), Fraction(0)).denominator != 1:
            return False
    return sum((yi * bi for yi, bi in zip(y, b)), Fraction(0)).denominator != 1


def transferral(n, v, u):
    vec = [0] * n
    vec[v] += 1
    vec[u] -= 1
    return vec
