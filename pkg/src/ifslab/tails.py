"""Analytic tail models for infinite alphabets.

A tail model prescribes contraction ratios c_i for all letters beyond the
explicitly listed generators.  Two families are supported:

  power-log :  c_i = scale * i^(-power) * (ln i)^(-log_power)
  geometric :  c_i = scale * q^i

Both admit closed-form control of the letter series  S(t) = sum_{i>=m} c_i^t:
the geometric case is an exact geometric series; the power-log case is a
partial sum plus an integral-test sandwich

    int_{M+1}^inf f  <=  sum_{i>M} f(i)  <=  int_M^inf f,

with f(x) = x^(-a) (ln x)^(-b), a = t*power, b = t*log_power.  The integral
has the closed forms M^(1-a)/(a-1) (b = 0) and (ln M)^(1-b)/(b-1) (a = 1),
and otherwise equals (a-1)^(b-1) * Gamma(1-b, (a-1) ln M), evaluated by
mpmath at 30 significant digits and budgeted a 1e-12 relative slack.

Divergence is decided exactly: the series diverges iff a < 1, or a = 1 and
b <= 1.  The scale is carried as a bracket so that normalized tails (where
the exact scale is defined implicitly by a series identity) stay honest.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import mpmath
import numpy as np

from .brackets import Bracket
from .errors import UnsupportedExponentError

# Relative tolerance for deciding whether an exponent sits exactly on the
# convergence boundary a = 1.  Exponent products hit the boundary only when
# the caller passes t = theta, so ties this loose are intentional.
_BOUNDARY_RTOL = 1e-12

# Horizon of the explicit partial sum before the integral-test remainder.
DEFAULT_PARTIAL_TERMS = 200_000

_GAMMA_SLACK = 1e-12  # relative slack on mpmath incomplete-gamma values


@dataclass(frozen=True)
class PowerLogTail:
    """c_i = scale * i^(-power) * (ln i)^(-log_power) for i >= start."""

    start: int
    scale: Bracket
    power: float
    log_power: float = 0.0

    def __post_init__(self):
        if self.start < 1:
            raise ValueError("tail start must be >= 1")
        if self.log_power < 0:
            raise ValueError("log_power must be >= 0")
        if self.log_power > 0 and self.start < 2:
            raise ValueError("log factors need start >= 2 (ln 1 = 0)")
        if self.power <= 0:
            raise ValueError("power must be positive")
        if not (self.scale.lo > 0):
            raise ValueError("tail scale must be strictly positive")


@dataclass(frozen=True)
class GeometricTail:
    """c_i = scale * q^i for i >= start."""

    start: int
    scale: float
    q: float

    def __post_init__(self):
        if self.start < 1:
            raise ValueError("tail start must be >= 1")
        if not (0.0 < self.q < 1.0):
            raise ValueError("q must lie in (0, 1)")
        if not self.scale > 0:
            raise ValueError("tail scale must be strictly positive")


TailModel = PowerLogTail | GeometricTail


def finiteness_abscissa(tail: TailModel) -> float:
    """Convergence abscissa of t |-> sum c_i^t (exact per model)."""
    if isinstance(tail, GeometricTail):
        return 0.0
    return 1.0 / tail.power


def converges_at(tail: TailModel, t: float) -> bool:
    """Whether sum_{i>=start} c_i^t is finite, decided analytically."""
    if t <= 0:
        return False
    if isinstance(tail, GeometricTail):
        return True
    a = t * tail.power
    b = t * tail.log_power
    if abs(a - 1.0) <= _BOUNDARY_RTOL:
        return b > 1.0 + _BOUNDARY_RTOL
    return a > 1.0


def ratio(tail: TailModel, i: int) -> Bracket:
    """Bracket for the single ratio c_i."""
    if i < tail.start:
        raise ValueError(f"tail letter {i} precedes tail start {tail.start}")
    if isinstance(tail, GeometricTail):
        return Bracket.point(tail.scale * tail.q ** i)
    base = i ** (-tail.power) * math.log(i) ** (-tail.log_power)
    return tail.scale.scale(base)


def ratios(tail: TailModel, idx: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """(lo, hi) ratio arrays for a vector of tail letter indices."""
    idx = np.asarray(idx, dtype=float)
    if isinstance(tail, GeometricTail):
        v = tail.scale * tail.q ** idx
        return v, v.copy()
    base = np.exp(-tail.power * np.log(idx)
                  - tail.log_power * np.log(np.log(idx)))
    return tail.scale.lo * base, tail.scale.hi * base


def log_ratios_mid(tail: TailModel, idx: np.ndarray) -> np.ndarray:
    """log c_i at the scale midpoint, vectorized (used by metrics)."""
    idx = np.asarray(idx, dtype=float)
    if isinstance(tail, GeometricTail):
        return math.log(tail.scale) + np.log(tail.q) * idx
    return (math.log(tail.scale.mid) - tail.power * np.log(idx)
            - tail.log_power * np.log(np.log(idx)))


def sup_ratio(tail: TailModel) -> Bracket:
    """Bracket for sup_i c_i (the ratios are decreasing in i)."""
    return ratio(tail, tail.start)


@lru_cache(maxsize=16)
def _log_arrays(start: int, horizon: int) -> tuple[np.ndarray, np.ndarray]:
    i = np.arange(start, horizon + 1, dtype=float)
    logi = np.log(i)
    # start may be 1 (log_power 0 only); keep log log finite but unused then
    loglogi = np.log(np.maximum(logi, 1e-300))
    return logi, loglogi


@lru_cache(maxsize=4096)
def _powerlog_partial(start: int, power: float, log_power: float,
                      t: float, horizon: int) -> tuple[float, float]:
    """(partial sum of i^(-a)(ln i)^(-b) over [start, horizon], rounding slack)."""
    logi, loglogi = _log_arrays(start, horizon)
    a = t * power
    b = t * log_power
    terms = np.exp(-a * logi - b * loglogi)
    s = float(np.sum(terms))
    slack = 8.0 * 2.0 ** -52 * s * max(1, math.ceil(math.log2(terms.size + 1)))
    return s, slack


def _powerlog_integral(a: float, b: float, x: float) -> Bracket:
    """Bracket for int_x^inf u^(-a) (ln u)^(-b) du (convergent cases only)."""
    lx = math.log(x)
    if b == 0.0:
        v = x ** (1.0 - a) / (a - 1.0)
        return Bracket.point(v).widen(4.0 * 2.0 ** -52 * v)
    if abs(a - 1.0) <= _BOUNDARY_RTOL:
        v = lx ** (1.0 - b) / (b - 1.0)
        return Bracket.point(v).widen(4.0 * 2.0 ** -52 * v)
    c = a - 1.0
    with mpmath.workdps(30):
        v = float(mpmath.mpf(c) ** (b - 1.0) * mpmath.gammainc(1.0 - b, c * lx))
    return Bracket(v * (1.0 - _GAMMA_SLACK), v * (1.0 + _GAMMA_SLACK))


def tail_sum(tail: TailModel, t: float, start: int | None = None,
             partial_terms: int = DEFAULT_PARTIAL_TERMS) -> Bracket:
    """Bracket for sum_{i >= start} c_i^t, or an infinite bracket.

    ``start`` defaults to the model's own start; it may not precede it.
    """
    if t <= 0:
        raise UnsupportedExponentError(f"tail sums require t > 0, got {t}")
    m = tail.start if start is None else int(start)
    if m < tail.start:
        raise ValueError(f"summation start {m} precedes tail start {tail.start}")

    if isinstance(tail, GeometricTail):
        qt = tail.q ** t
        v = tail.scale ** t * qt ** m / (1.0 - qt)
        return Bracket.point(v).widen(8.0 * 2.0 ** -52 * v)

    if not converges_at(tail, t):
        return Bracket.pos_inf()

    a = t * tail.power
    b = t * tail.log_power
    horizon = max(m, partial_terms)
    psum, pslack = _powerlog_partial(m, tail.power, tail.log_power, t, horizon)
    upper_int = _powerlog_integral(a, b, float(horizon))
    lower_int = _powerlog_integral(a, b, float(horizon + 1))
    base = Bracket(psum + lower_int.lo, psum + upper_int.hi).widen(pslack)
    return tail.scale.pow(t).mul(base)
