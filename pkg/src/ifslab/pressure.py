"""Topological pressure and the regularity classification.

Level sums over words of length n,

    S_n(t) = sum_{|w| = n} ||phi_w'||^t,

determine the pressure P(t) = lim (1/n) log S_n(t) = inf_n (1/n) log S_n(t),
nonincreasing in t, strictly decreasing, continuous and convex on
[theta, inf), with P(2) <= 0 for planar systems.

For similarity systems (tails included) word norms are exact products, so
S_n = S_1^n and P(t) = log S_1(t) exactly.  For polynomial systems we
enumerate words, sampling the composed derivative on the seed boundary:
the sample max is a lower bound for each word norm and a uniform
Lipschitz mesh factor gives the upper.  The inf characterization makes
every computed level an upper bound on P; bounded distortion gives
superadditivity of log(K^-t S_n), hence (1/n)(log S_n - t log K) is a
lower bound at every level.

The finiteness parameter theta is the convergence abscissa of the letter
series, exact per tail model.  The regularity class is decided from the
bracket of P(theta): infinite (cofinitely regular), positive (strongly
regular, not cofinitely), negative (irregular), a zero-straddling bracket
narrower than the tolerance (critically regular), anything wider is
reported Undetermined rather than guessed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum importIntEnum

import numpy as np

from .brackets import Bracket, bracket_sum
from .errors import (BudgetExceededError, NonsimilarityInfiniteAlphabetError)
from . import tails
from .systems import ValidatedSystem

DEFAULT_WORD_BUDGET = 20_000_000
DEFAULT_WORD_SAMPLES = 256


class RegularityClass(IntEnum):
    COFINITELY_REGULAR = 1
    STRONGLY_REGULAR_NON_COFINITE = 2
    CRITICALLY_REGULAR = 3
    IRREGULAR = 4
    UNDETERMINED = 5

    def __str__(self):
        return _CLASS_NAMES[self]


_CLASS_NAMES = {
    RegularityClass.COFINITELY_REGULAR: "CofinitelyRegular",
    RegularityClass.STRONGLY_REGULAR_NON_COFINITE: "StronglyRegularNonCofinite",
    RegularityClass.CRITICALLY_REGULAR: "CriticallyRegular",
    RegularityClass.IRREGULAR: "Irregular",
    RegularityClass.UNDETERMINED: "Undetermined",
}

CLASS_BY_NAME = {v: k for k, v in _CLASS_NAMES.items()}


@dataclass(frozen=True)
class RegularityReport:
    theta: Bracket
    pressure_at_theta: Bracket
    regularity: RegularityClass
    evidence: str

    @property
    def class_name(self) -> str:
        return str(self.regularity)


# ---------------------------------------------------------------------------
# Level sums
# ---------------------------------------------------------------------------

def _letter_sum(system: ValidatedSystem, t: float) -> Bracket:
    """Bracket (or +inf) for S_1(t) = sum over all letters of ||phi_i'||^t."""
    explicit = bracket_sum(b.pow(t) for b in system.letter_norms)
    if system.infinite:
        if t <= 0.0:
            return Bracket.pos_inf()
        tail = tails.tail_sum(system.tail, t)
        return explicit + tail
    return explicit


def _enumerate_level(system: ValidatedSystem, t: float, n: int,
                     samples: int, budget: int) -> Bracket:
    """(1/n) log S_n(t) for a finite system via word enumeration.

    Word derivative moduli are sampled on the seed boundary (maximum
    modulus puts the sup there); log|phi_w'| is Lipschitz with constant
    ``log_lipschitz`` uniformly in w, which converts the sample mesh into
    a rigorous upper factor.
    """
    gens = system.generators
    m = len(gens)
    if m ** n > budget:
        raise BudgetExceededError(
            f"{m}^{n} words exceed the word budget {budget}")
    zb = system.space.boundary_points(samples)
    halfgap = system.space.boundary_mesh_halfgap(samples)
    sum_lo = 0.0
    stack = [(0, zb, np.zeros(zb.shape[0]))]
    while stack:
        depth, z, ld = stack.pop()
        if depth == n:
            sum_lo += math.exp(t * float(np.max(ld)))
            continue
        for g in gens:
            dz = np.abs(g.deriv(z))
            stack.append((depth + 1, g.apply(z), ld + np.log(dz)))
    log_slack = t * system.log_lipschitz * halfgap
    lo = math.log(sum_lo) / n
    return Bracket(lo, lo + log_slack / n).widen(16.0 * 2.0 ** -52 * max(abs(lo), 1.0))


def pressure_level(system: ValidatedSystem, t: float, n: int,
                   samples: int = DEFAULT_WORD_SAMPLES,
                   budget: int = DEFAULT_WORD_BUDGET) -> Bracket:
    """Bracket (or +inf) for (1/n) log S_n(t).

    Similarity systems (similarity tails included) are multiplicative:
    S_n = S_1^n exactly, so every level equals log S_1(t).  Infinite
    alphabets with polynomial generators are supported at n = 1 only.
    """
    if t < 0:
        raise ValueError("pressure levels require t >= 0")
    if n < 1:
        raise ValueError("level n must be >= 1")
    if system.is_similarity or n == 1:
        s1 = _letter_sum(system, t)
        if s1.infinite:
            return Bracket.pos_inf()
        return s1.log()
    if system.infinite:
        raise NonsimilarityInfiniteAlphabetError(
            "level sums beyond n=1 need similarity tails; this system has "
            "polynomial generators and an infinite alphabet")
    return _enumerate_level(system, t, n, samples, budget)


# ---------------------------------------------------------------------------
# Pressure
# ---------------------------------------------------------------------------

def pressure(system: ValidatedSystem, t: float, tol: float = 1e-9,
             samples: int = DEFAULT_WORD_SAMPLES,
             budget: int = DEFAULT_WORD_BUDGET) -> Bracket:
    """Bracket (or +inf) for the pressure P(t).

    Exact (up to rounding slack) for similarity systems.  Polynomial
    systems tighten levels n = 1, 2, 4, ... until the bracket is narrower
    than ``tol`` or the word budget is hit, in which case
    BudgetExceededError carries the best bracket computed so far.
    """
    if t < 0:
        raise ValueError("pressure requires t >= 0")

    if system.is_similarity:
        s1 = _letter_sum(system, t)
        if s1.infinite:
            return Bracket.pos_inf()
        return s1.log()

    log_k = math.log(system.distortion_k)
    if not system.infinite and t == 0.0:
        return Bracket.point(math.log(system.n_explicit))

    if system.infinite:
        s1 = _letter_sum(system, t)
        if s1.infinite:
            return Bracket.pos_inf()
        level1 = s1.log()
        best = Bracket(level1.lo - t * log_k, level1.hi)
        if best.width <= tol:
            return best
        raise BudgetExceededError(
            "infinite alphabet with polynomial generators: only the n=1 "
            f"distortion sandwich is available (width {best.width:.3g} > tol)",
            bracket=best)

    best_lo, best_hi = -math.inf, math.inf
    n = 1
    while True:
        level = pressure_level(system, t, n, samples=samples, budget=budget)
        best_hi = min(best_hi, level.hi)
        best_lo = max(best_lo, level.lo - t * log_k / n)
        best = Bracket(min(best_lo, best_hi), best_hi)
        if best.width <= tol:
            return best
        n *= 2
        if system.n_explicit ** n > budget:
            raise BudgetExceededError(
                f"pressure bracket width {best.width:.3g} > tol {tol} and the "
                f"next level ({system.n_explicit}^{n} words) exceeds the budget",
                bracket=best)


def finiteness_parameter(system: ValidatedSystem, tol: float = 1e-9) -> Bracket:
    """Bracket for theta = inf{t >= 0 : S_1(t) < inf}.

    Finite alphabets give [0, 0].  Tail models make the abscissa exact, so
    the bracket is a point regardless of ``tol``.
    """
    if not system.infinite:
        return Bracket.point(0.0)
    return Bracket.point(tails.finiteness_abscissa(system.tail))


def pressure_at_theta(system: ValidatedSystem, tol: float = 1e-9,
                      budget: int = DEFAULT_WORD_BUDGET) -> Bracket:
    """P evaluated at the finiteness parameter (the classification pivot).

    The tail models decide the boundary behavior exactly: if the letter
    series diverges at theta the value is +inf; otherwise the boundary
    series has a closed-form bracket and P(theta) is evaluated directly.
    """
    theta = finiteness_parameter(system, tol)
    if not system.infinite:
        return Bracket.point(math.log(system.n_explicit))
    th = theta.mid
    if th <= 0.0 or not tails.converges_at(system.tail, th):
        return Bracket.pos_inf()
    try:
        return pressure(system, th, tol=tol, budget=budget)
    except BudgetExceededError as exc:
        return exc.bracket


def classify(system: ValidatedSystem, tol: float = 1e-9,
             budget: int = DEFAULT_WORD_BUDGET) -> RegularityReport:
    """Regularity class from theta and the bracket of P(theta)."""
    theta = finiteness_parameter(system, tol)

    if not system.infinite:
        p0 = Bracket.point(math.log(system.n_explicit))
        return RegularityReport(
            theta=theta,
            pressure_at_theta=p0,
            regularity=RegularityClass.STRONGLY_REGULAR_NON_COFINITE,
            evidence=(f"FiniteRegular: finite alphabet of {system.n_explicit} "
                      f"letters; P(0) = log {system.n_explicit} > 0 and P is "
                      "finite everywhere, so the system is strongly regular"),
        )

    p_theta = pressure_at_theta(system, tol=tol, budget=budget)
    if p_theta.infinite:
        return RegularityReport(
            theta=theta, pressure_at_theta=p_theta,
            regularity=RegularityClass.COFINITELY_REGULAR,
            evidence=(f"letter series diverges at theta = {theta.mid:.12g}; "
                      "pressure is infinite at the finiteness parameter"),
        )
    if p_theta.lo > 0.0:
        return RegularityReport(
            theta=theta, pressure_at_theta=p_theta,
            regularity=RegularityClass.STRONGLY_REGULAR_NON_COFINITE,
            evidence=(f"0 < P(theta) in [{p_theta.lo:.6g}, {p_theta.hi:.6g}] "
                      "< inf"),
        )
    if p_theta.hi < 0.0:
        return RegularityReport(
            theta=theta, pressure_at_theta=p_theta,
            regularity=RegularityClass.IRREGULAR,
            evidence=(f"P(theta) in [{p_theta.lo:.6g}, {p_theta.hi:.6g}] < 0; "
                      "P has no zero"),
        )
    if p_theta.width < tol:
        return RegularityReport(
            theta=theta, pressure_at_theta=p_theta,
            regularity=RegularityClass.CRITICALLY_REGULAR,
            evidence=(f"P(theta) bracket [{p_theta.lo:.3g}, {p_theta.hi:.3g}] "
                      f"straddles 0 with width {p_theta.width:.3g} < tol {tol}"),
        )
    return RegularityReport(
        theta=theta, pressure_at_theta=p_theta,
        regularity=RegularityClass.UNDETERMINED,
        evidence=(f"P(theta) bracket [{p_theta.lo:.6g}, {p_theta.hi:.6g}] "
                  f"straddles 0 with width {p_theta.width:.3g} >= tol {tol}"),
    )
