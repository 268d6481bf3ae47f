"""Hausdorff dimension of the limit set via the Bowen characterization.

The dimension equals inf{t >= 0 : P(t) <= 0}; when the pressure has a
zero, the zero is the dimension, and P(2) <= 0 pins the search to
[theta, 2].  Irregular systems (P(theta) < 0) attain the infimum at theta
itself, no root exists, and h = theta is returned directly.

Finite subsystems F of an infinite system satisfy
h = sup{h_F : F finite}; truncation scans F_k = {1..k} exhibit the
monotone convergence and are computed from exact Moran equations
sum r_i^t = 1 when the letters are similarities.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .brackets import Bracket
from .errors import (BudgetExceededError, UndeterminedSignError,
                     UnknownLetterError)
from . import tails
from .pressure import (DEFAULT_WORD_BUDGET, finiteness_parameter, pressure,
                       pressure_at_theta)
from .systems import Similarity, ValidatedSystem


@dataclass(frozen=True)
class DimensionResult:
    h: Bracket
    method: str  # BowenRoot | BowenInfimum | SubsystemSup
    iterations: int


def _pressure_cached(system: ValidatedSystem, tol: float, budget: int):
    cache: dict[float, Bracket] = {}

    def fetch(t: float, tol_override: float | None = None) -> Bracket:
        key = t
        if key not in cache or tol_override is not None:
            try:
                cache[key] = pressure(system, t, tol=tol_override or tol,
                                      budget=budget)
            except BudgetExceededError as exc:
                cache[key] = exc.bracket
        return cache[key]

    return fetch


def bowen_dimension(system: ValidatedSystem, tol: float = 1e-9,
                    pressure_tol: float | None = None,
                    budget: int = DEFAULT_WORD_BUDGET) -> DimensionResult:
    """Bracket of width < tol around the Bowen dimension.

    Bisects the sign of the pressure bracket over [max(theta, 0), 2]; the
    strict decrease of P on [theta, inf) makes the crossing unique for
    regular systems.  Irregular systems return h = theta directly
    (method BowenInfimum).  A pressure bracket that straddles zero too
    widely to decide a sign raises UndeterminedSignError after three
    pressure-tolerance refinement rounds.
    """
    ptol = pressure_tol if pressure_tol is not None else min(tol, 1e-9)
    theta = finiteness_parameter(system)
    pf = _pressure_cached(system, ptol, budget)
    iterations = 0

    p_th = pressure_at_theta(system, tol=ptol, budget=budget)
    if not p_th.infinite:
        if p_th.hi < 0.0:
            # inf{t : P(t) <= 0} = theta: P jumps from +inf to a negative value
            return DimensionResult(theta, "BowenInfimum", 0)
        if p_th.straddles_zero():
            if p_th.width < tol:
                return DimensionResult(theta, "BowenRoot", 0)
            raise UndeterminedSignError(
                f"P(theta) bracket [{p_th.lo:.3g}, {p_th.hi:.3g}] straddles 0 "
                "and is too wide to separate the critically regular case")

    lo_t = max(theta.hi, 0.0)
    hi_t = 2.0
    while hi_t - lo_t >= tol:
        iterations += 1
        m = 0.5 * (lo_t + hi_t)
        p = pf(m)
        if p.infinite or p.lo > 0.0:
            lo_t = m
            continue
        if p.hi < 0.0:
            hi_t = m
            continue
        # Bracket straddles zero at m: P(m) is within bracket width of the
        # root.  Probe both sides; if the signs resolve we are done.
        d = 0.49 * tol
        resolved = False
        for attempt in range(3):
            pl = pf(max(m - d, lo_t), tol_override=ptol / 4 ** attempt)
            pr = pf(min(m + d, hi_t), tol_override=ptol / 4 ** attempt)
            left_pos = pl.infinite or pl.lo > 0.0
            right_neg = (not pr.infinite) and pr.hi < 0.0
            if left_pos and right_neg:
                lo_t, hi_t = m - d, m + d
                resolved = True
                break
        if resolved:
            break
        raise UndeterminedSignError(
            f"pressure bracket [{p.lo:.3g}, {p.hi:.3g}] at t = {m:.12g} "
            "straddles 0 wider than the bisection can resolve")

    h = Bracket(max(lo_t, theta.lo, 0.0), min(hi_t, 2.0))
    return DimensionResult(h, "BowenRoot", iterations)


# ---------------------------------------------------------------------------
# Finite subsystems
# ---------------------------------------------------------------------------

def _subsystem_ratio_arrays(system: ValidatedSystem, letters):
    lo, hi = [], []
    any_poly = False
    for i in letters:
        if i < 1:
            raise UnknownLetterError(f"letter {i} out of range")
        if i <= system.n_explicit:
            b = system.letter_norms[i - 1]
            any_poly = any_poly or not isinstance(system.generators[i - 1],
                                                  Similarity)
        elif system.tail is not None:
            b = tails.ratio(system.tail, i)
        else:
            raise UnknownLetterError(
                f"letter {i} beyond finite alphabet of size {system.n_explicit}")
        lo.append(b.lo)
        hi.append(b.hi)
    return np.asarray(lo), np.asarray(hi), any_poly


def _decreasing_root(g, lo: float, hi: float) -> float | None:
    """Root of a strictly decreasing g with g(lo) > 0, or None if g(hi) > 0."""
    if g(hi) > 0.0:
        return None
    if g(lo) <= 0.0:
        return lo
    return float(brentq(g, lo, hi, xtol=1e-13, rtol=8.9e-16))


def finite_subsystem_dimension(system: ValidatedSystem, letters,
                               tol: float = 1e-9) -> DimensionResult:
    """Bowen root of the pressure of the subsystem on the given letters.

    Singletons have a one-point limit set; dimension 0 is returned with a
    warning rather than an error.
    """
    letters = sorted(set(int(i) for i in letters))
    if not letters:
        raise ValueError("subsystem letter set is empty")
    if len(letters) == 1:
        warnings.warn("singleton subsystem: limit set is one point, h = 0",
                      stacklevel=2)
        return DimensionResult(Bracket.point(0.0), "SubsystemSup", 0)

    lo_r, hi_r, any_poly = _subsystem_ratio_arrays(system, letters)
    log_k = math.log(system.distortion_k) if any_poly else 0.0

    def g_hi(t):
        return math.log(float(np.sum(hi_r ** t)))

    def g_lo(t):
        return math.log(float(np.sum(lo_r ** t))) - t * log_k

    root_hi = _decreasing_root(g_hi, 0.0, 2.0)
    root_lo = _decreasing_root(g_lo, 0.0, 2.0)
    if root_hi is None:
        raise ValueError(
            "subsystem ratio sum exceeds 1 at t = 2; the letters cannot "
            "satisfy the open set condition on a planar seed")
    if root_lo is None:
        root_lo = 2.0
    lo_t = min(root_hi, root_lo)
    hi_t = max(root_hi, root_lo)
    pad = 1e-12 * max(1.0, hi_t)
    h = Bracket(max(lo_t - pad, 0.0), min(hi_t + pad, 2.0))
    return DimensionResult(h, "SubsystemSup", 0)


def subsystem_sup_scan(system: ValidatedSystem, sizes,
                       tol: float = 1e-9) -> list[DimensionResult]:
    """h for the truncations F_k = {1..k}, k in sizes (nondecreasing in k)."""
    out = []
    for k in sizes:
        out.append(finite_subsystem_dimension(system, range(1, int(k) + 1), tol))
    return out
