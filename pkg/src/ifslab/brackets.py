"""Enclosing intervals for every computed scalar.

Every numerical quantity in this package is reported as a closed interval
[lo, hi] guaranteed to contain the true value, or flagged as +infinity.
We do not use directed-rounding interval arithmetic: operations run in
double precision and every result is widened by an explicit slack of a
few ulps, plus whatever truncation/mesh term the caller documents.  The
quantities involved are smooth and target tolerances are >= 1e-9, so
this is ample.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

_EPS = 2.0 ** -52


def _pad(lo: float, hi: float) -> tuple[float, float]:
    """Widen an interval by 4 ulps of its magnitude to absorb rounding."""
    m = max(abs(lo), abs(hi))
    p = 4.0 * _EPS * m
    return lo - p, hi + p


@dataclass(frozen=True)
class Bracket:
    """Closed interval [lo, hi], optionally flagged as the value +infinity.

    Infinite brackets carry no finite endpoints (lo = hi = inf).
    """

    lo: float
    hi: float
    infinite: bool = False

    def __post_init__(self):
        if self.infinite:
            object.__setattr__(self, "lo", math.inf)
            object.__setattr__(self, "hi", math.inf)
        elif not (self.lo <= self.hi):
            raise ValueError(f"bracket endpoints out of order: [{self.lo}, {self.hi}]")

    # -- constructors ------------------------------------------------------

    @staticmethod
    def point(x: float) -> "Bracket":
        return Bracket(float(x), float(x))

    @staticmethod
    def pos_inf() -> "Bracket":
        return Bracket(math.inf, math.inf, infinite=True)

    # -- queries -----------------------------------------------------------

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def mid(self) -> float:
        return 0.5 * (self.lo + self.hi)

    def contains(self, x: float) -> bool:
        if self.infinite:
            return math.isinf(x) and x > 0
        return self.lo <= x <= self.hi

    def straddles_zero(self) -> bool:
        return (not self.infinite) and self.lo <= 0.0 <= self.hi

    def overlaps(self, other: "Bracket") -> bool:
        if self.infinite or other.infinite:
            return self.infinite and other.infinite
        return self.lo <= other.hi and other.lo <= self.hi

    # -- arithmetic (finite, with ulp padding) -----------------------------

    def _require_finite(self, op: str):
        if self.infinite:
            raise ValueError(f"cannot apply {op} to an infinite bracket")

    def widen(self, slack: float) -> "Bracket":
        self._require_finite("widen")
        if slack < 0:
            raise ValueError("slack must be nonnegative")
        return Bracket(self.lo - slack, self.hi + slack)

    def __add__(self, other) -> "Bracket":
        if isinstance(other, Bracket):
            if self.infinite or other.infinite:
                return Bracket.pos_inf()
            return Bracket(*_pad(self.lo + other.lo, self.hi + other.hi))
        self._require_finite("add")
        return Bracket(*_pad(self.lo + float(other), self.hi + float(other)))

    __radd__ = __add__

    def __sub__(self, other) -> "Bracket":
        if isinstance(other, Bracket):
            other._require_finite("sub")
            self._require_finite("sub")
            return Bracket(*_pad(self.lo - other.hi, self.hi - other.lo))
        self._require_finite("sub")
        return Bracket(*_pad(self.lo - float(other), self.hi - float(other)))

    def scale(self, k: float) -> "Bracket":
        """Multiply by a nonnegative scalar."""
        if k < 0:
            raise ValueError("scale factor must be nonnegative")
        if self.infinite:
            return Bracket.pos_inf() if k > 0 else Bracket.point(0.0)
        return Bracket(*_pad(self.lo * k, self.hi * k))

    def mul(self, other: "Bracket") -> "Bracket":
        """Product of nonnegative brackets."""
        if self.infinite or other.infinite:
            return Bracket.pos_inf()
        if self.lo < 0 or other.lo < 0:
            raise ValueError("mul is defined for nonnegative brackets only")
        return Bracket(*_pad(self.lo * other.lo, self.hi * other.hi))

    def div(self, other: "Bracket") -> "Bracket":
        """Quotient of nonnegative brackets; divisor must be positive."""
        self._require_finite("div")
        other._require_finite("div")
        if other.lo <= 0:
            raise ValueError("divisor bracket must be strictly positive")
        return Bracket(*_pad(self.lo / other.hi, self.hi / other.lo))

    def pow(self, t: float) -> "Bracket":
        """x^t for a nonnegative bracket and real t."""
        if self.infinite:
            return Bracket.pos_inf() if t > 0 else Bracket.point(1.0)
        if self.lo < 0:
            raise ValueError("pow is defined for nonnegative brackets only")
        if t == 0.0:
            return Bracket.point(1.0)
        a, b = self.lo ** t, self.hi ** t
        if t < 0:
            if self.lo == 0.0:
                raise ValueError("negative power of a bracket touching zero")
            a, b = b, a
        return Bracket(*_pad(a, b))

    def log(self) -> "Bracket":
        if self.infinite:
            return Bracket.pos_inf()
        if self.lo <= 0:
            raise ValueError("log of a bracket touching zero or below")
        return Bracket(*_pad(math.log(self.lo), math.log(self.hi)))

    def exp(self) -> "Bracket":
        if self.infinite:
            return Bracket.pos_inf()
        return Bracket(*_pad(math.exp(self.lo), math.exp(self.hi)))

    def union(self, other: "Bracket") -> "Bracket":
        if self.infinite or other.infinite:
            return Bracket.pos_inf()
        return Bracket(min(self.lo, other.lo), max(self.hi, other.hi))

    def intersect(self, other: "Bracket") -> "Bracket":
        """Intersection; raises if the brackets are disjoint."""
        self._require_finite("intersect")
        other._require_finite("intersect")
        lo, hi = max(self.lo, other.lo), min(self.hi, other.hi)
        if lo > hi:
            raise ValueError("brackets are disjoint")
        return Bracket(lo, hi)

    def __repr__(self):
        if self.infinite:
            return "Bracket(+inf)"
        return f"Bracket({self.lo!r}, {self.hi!r})"


def bracket_sum(brackets) -> Bracket:
    """Sum a sequence of brackets, widening by a per-term rounding slack."""
    brackets = list(brackets)
    lo = hi = 0.0
    for b in brackets:
        if b.infinite:
            return Bracket.pos_inf()
        lo += b.lo
        hi += b.hi
    slack = 4.0 * _EPS * max(abs(lo), abs(hi)) * max(1, len(brackets))
    return Bracket(lo - slack, hi + slack)
