"""Exact numbers of the form a + b*sqrt(2) and closed intervals of them."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from math import sqrt


def _frac(x):
    return x if isinstance(x, Fraction) else Fraction(x)


def _sign(a: Fraction, b: Fraction):
    """Sign of a + b*sqrt2, decided exactly."""
    if b == 0:
        return (a > 0) - (a < 0)
    if a == 0:
        return (b > 0) - (b < 0)
    if a > 0 and b > 0:
        return 1
    if a < 0 and b < 0:
        return -1
    # opposite signs: compare a^2 with 2 b^2
    lhs, rhs = a * a, 2 * b * b
    if a > 0:
        return 1 if lhs > rhs else -1
    return 1 if rhs > lhs else -1


@total_ordering
@dataclass(frozen=True)
class Surd:
    """a + b*sqrt(2) with rational a, b."""

    a: Fraction
    b: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "a", _frac(self.a))
        object.__setattr__(self, "b", _frac(self.b))

    @staticmethod
    def of(x):
        return x if isinstance(x, Surd) else Surd(_frac(x))

    def __add__(self, other):
        o = Surd.of(other)
        return Surd(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return Surd(-self.a, -self.b)

    def __sub__(self, other):
        return self + (-Surd.of(other))

    def __rsub__(self, other):
        return Surd.of(other) - self

    def __mul__(self, other):
        o = Surd.of(other)
        return Surd(self.a * o.a + 2 * self.b * o.b, self.a * o.b + self.b * o.a)

    __rmul__ = __mul__

    def __eq__(self, other):
        try:
            o = Surd.of(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self.a == o.a and self.b == o.b

    def __hash__(self):
        return hash((self.a, self.b))

    def __lt__(self, other):
        o = Surd.of(other)
        return _sign(self.a - o.a, self.b - o.b) < 0

    def __float__(self):
        return float(self.a) + float(self.b) * sqrt(2)

    @property
    def is_rational(self):
        return self.b == 0

    def symbol(self):
        def fs(x):
            return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
        if self.b == 0:
            return fs(self.a)
        sgn = "-" if self.b < 0 else "+"
        coef = abs(self.b)
        term = "sqrt2" if coef == 1 else f"{fs(coef)}*sqrt2"
        if self.a == 0:
            return ("-" if self.b < 0 else "") + term
        return f"{fs(self.a)}{sgn}{term}"

    def to_json(self):
        """Rationals as "p/q"; irrationals as {"sym", "approx"}."""
        if self.b == 0:
            return self.symbol()
        return {"sym": self.symbol(), "approx": round(float(self), 8)}


SQRT2 = Surd(0, 1)
# 2 (sqrt2 - 1)^2 = 6 - 4 sqrt2
COVER_CONSTANT = Surd(6, -4)


def value(x):
    return Surd.of(x)


@dataclass(frozen=True)
class Bound:
    """Closed interval [lo, hi] of exact numbers; lo == hi means exact."""

    lo: Surd
    hi: Surd

    def __post_init__(self):
        object.__setattr__(self, "lo", Surd.of(self.lo))
        object.__setattr__(self, "hi", Surd.of(self.hi))
        if self.hi < self.lo:
            raise ValueError("lower bound exceeds upper bound")

    @staticmethod
    def exact(x):
        return Bound(x, x)

    @staticmethod
    def of(x):
        return x if isinstance(x, Bound) else Bound.exact(x)

    @property
    def is_exact(self):
        return self.lo == self.hi

    def max(self, other):
        o = Bound.of(other)
        return Bound(max(self.lo, o.lo), max(self.hi, o.hi))

    def __eq__(self, other):
        if isinstance(other, Bound):
            return self.lo == other.lo and self.hi == other.hi
        try:
            return self.is_exact and self.lo == Surd.of(other)
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        return hash((self.lo, self.hi))

    def to_json(self):
        if self.is_exact:
            return self.lo.to_json()
        return {"lower": self.lo.to_json(), "upper": self.hi.to_json()}


def bound_max(*bounds):
    out = Bound.of(bounds[0])
    for b in bounds[1:]:
        out = out.max(b)
    return out
