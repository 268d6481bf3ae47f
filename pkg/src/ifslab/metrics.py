"""Pointwise-convergence metrics and the lambda-topology check.

Finite alphabets compare generator by generator in C^1:

    rho(Phi, Psi) = sum_i ( ||phi_i - psi_i|| + ||phi_i' - psi_i'|| ).

Infinite alphabets use the weighted product metric

    rho_inf(Phi, Psi) = sum_i 2^-i min{1, ||phi_i - psi_i|| + ||phi_i' - psi_i'||},

with the tail beyond the truncation index contributing at most 2^-N.
Tail letters carry ratios but no placement maps, so their map-difference
term is bracketed by |c_i - c_i'| times a placement factor range taken
over all admissible centers in the seed.

Lambda-convergence of a sequence to a limit demands pointwise convergence
plus a uniform bound C on |log||phi_i'|| - log||(phi_i^n)'|||, over every
letter i and all large n.  A finite scan can only certify violations; a
pass is evidence under the documented operational rule: the last three
rho_inf values sit below 1e-4 nonincreasing, and the per-letter deviation
sup saturates as the scanned letter horizon doubles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .brackets import Bracket, bracket_sum
from .errors import AlphabetMismatchError, EmptySequenceError
from . import tails
from .systems import (DEFAULT_BOUNDARY_SAMPLES, Generator, ValidatedSystem,
                      poly_sup_modulus, _dcoeffs)

RHO_CONVERGENCE_THRESHOLD = 1e-4
DEFAULT_TRUNCATION = 512
DEFAULT_LETTERS_CHECKED = 10_000


@dataclass(frozen=True)
class LambdaReport:
    pointwise_distances: list[float]
    log_norm_deviation: list[float]
    witness_c: float | None
    verdict: str  # ConvergesLambda | PointwiseOnly | Diverges | Inconclusive
    detail: str = ""


def _diff_coeffs(a: Generator, b: Generator) -> tuple[complex, ...]:
    ca, cb = a.coeffs(), b.coeffs()
    n = max(len(ca), len(cb))
    ca = ca + (0j,) * (n - len(ca))
    cb = cb + (0j,) * (n - len(cb))
    return tuple(x - y for x, y in zip(ca, cb))


def _generator_distance(a: Generator, b: Generator, space,
                        samples: int) -> Bracket:
    """Bracket for ||phi - psi|| + ||phi' - psi'|| over the seed."""
    d = _diff_coeffs(a, b)
    sup0 = poly_sup_modulus(d, space, samples)
    sup1 = poly_sup_modulus(_dcoeffs(d), space, samples)
    return sup0 + sup1


def rho_distance(phi: ValidatedSystem, psi: ValidatedSystem,
                 samples: int = DEFAULT_BOUNDARY_SAMPLES) -> Bracket:
    """Pointwise metric for two finite systems on the same seed."""
    if phi.space != psi.space:
        raise AlphabetMismatchError("systems live on different seed spaces")
    if phi.infinite or psi.infinite:
        raise AlphabetMismatchError("rho is the finite-alphabet metric; "
                                    "use rho_infty_distance")
    if phi.n_explicit != psi.n_explicit:
        raise AlphabetMismatchError(
            f"alphabet sizes differ: {phi.n_explicit} vs {psi.n_explicit}")
    return bracket_sum(
        _generator_distance(a, b, phi.space, samples)
        for a, b in zip(phi.generators, psi.generators))


def _tail_letter_distance(phi: ValidatedSystem, psi: ValidatedSystem,
                          i: int) -> Bracket:
    c_a = tails.ratio(phi.tail, i)
    c_b = tails.ratio(psi.tail, i)
    dc = max(abs(c_a.lo - c_b.hi), abs(c_a.hi - c_b.lo))
    dc_lo = max(0.0, max(c_a.lo - c_b.hi, c_b.lo - c_a.hi))
    # derivative part is exactly |c - c'|; map part is |c - c'| * sup|z - w|
    # for an unknown placement center w in the seed
    rho_min, rho_max = phi.space.farthest_point_range()
    return Bracket(dc_lo * (1.0 + rho_min), dc * (1.0 + rho_max))


def rho_infty_distance(phi: ValidatedSystem, psi: ValidatedSystem,
                       samples: int = DEFAULT_BOUNDARY_SAMPLES,
                       truncation: int = DEFAULT_TRUNCATION) -> Bracket:
    """Weighted pointwise metric, tails truncated at ``truncation`` letters."""
    if phi.space != psi.space:
        raise AlphabetMismatchError("systems live on different seed spaces")
    if phi.infinite != psi.infinite:
        raise AlphabetMismatchError("cannot mix finite and infinite alphabets")
    lo = 0.0
    hi = 0.0
    n_max = truncation if phi.infinite else max(phi.n_explicit, psi.n_explicit)
    for i in range(1, n_max + 1):
        w = 2.0 ** -i
        if w * 1.0 + hi == hi:  # remaining weights cannot move the sum
            break
        in_a = i <= phi.n_explicit
        in_b = i <= psi.n_explicit
        if in_a and in_b:
            d = _generator_distance(phi.generators[i - 1], psi.generators[i - 1],
                                    phi.space, samples)
        elif not in_a and not in_b:
            d = _tail_letter_distance(phi, psi, i)
        else:
            if (in_a and i > psi.n_explicit and psi.tail is None) or \
               (in_b and i > phi.n_explicit and phi.tail is None):
                raise AlphabetMismatchError(f"letter {i} exists in one system only")
            # explicit letter vs tail letter: compare what is comparable,
            # the derivative norms; placement mismatch maxes the map term
            na = phi.letter_norm(i)
            nb = psi.letter_norm(i)
            dd = abs(na.mid - nb.mid)
            d = Bracket(min(dd, 1.0), 1.0)
        lo += w * min(d.lo, 1.0)
        hi += w * min(d.hi, 1.0)
    if phi.infinite:
        hi += 2.0 ** -truncation
    return Bracket(lo, hi).widen(8.0 * 2.0 ** -52 * max(hi, 1.0))


def _deviation_sup(system: ValidatedSystem, limit: ValidatedSystem,
                   letters: int) -> tuple[float, float]:
    """(sup over letters <= L, sup over letters <= L/2) of
    |log||phi_i'|| - log||(phi_i^n)'|||, midpoints."""
    half = max(1, letters // 2)
    devs_explicit = []
    n_exp = min(system.n_explicit, limit.n_explicit, letters)
    for i in range(1, n_exp + 1):
        devs_explicit.append(abs(math.log(system.letter_norm(i).mid)
                                 - math.log(limit.letter_norm(i).mid)))
    sup_half = max(devs_explicit[:half], default=0.0)
    sup_full = max(devs_explicit, default=0.0)
    if system.tail is not None and limit.tail is not None:
        start = max(system.tail.start, limit.tail.start)
        if start <= letters:
            idx = np.arange(start, letters + 1)
            d = np.abs(tails.log_ratios_mid(system.tail, idx)
                       - tails.log_ratios_mid(limit.tail, idx))
            sup_full = max(sup_full, float(np.max(d)))
            half_mask = idx <= half
            if np.any(half_mask):
                sup_half = max(sup_half, float(np.max(d[half_mask])))
    return sup_full, sup_half


def lambda_convergence_check(sequence, limit: ValidatedSystem,
                             letters_checked: int = DEFAULT_LETTERS_CHECKED,
                             samples: int = DEFAULT_BOUNDARY_SAMPLES,
                             truncation: int = DEFAULT_TRUNCATION,
                             rho_threshold: float = RHO_CONVERGENCE_THRESHOLD
                             ) -> LambdaReport:
    """Classify the convergence mode of a system sequence toward a limit.

    Verdicts:
      ConvergesLambda   rho_inf rule passes and the deviation sup saturates
                        in the letter horizon; witness_c is the max deviation.
      PointwiseOnly     rho_inf rule passes but deviations keep growing as
                        more letters are scanned (no uniform C can exist).
      Diverges          the rho_inf rule fails.
      Inconclusive      growth evidence is mixed at this letter horizon.
    """
    sequence = list(sequence)
    if not sequence:
        raise EmptySequenceError("need at least one system in the sequence")

    infinite = limit.infinite
    dist = []
    for sysn in sequence:
        if infinite:
            d = rho_infty_distance(sysn, limit, samples=samples,
                                   truncation=truncation)
        else:
            d = rho_distance(sysn, limit, samples=samples)
        dist.append(d.hi)

    devs, grows = [], []
    for sysn in sequence:
        full, half = _deviation_sup(sysn, limit, letters_checked)
        devs.append(full)
        margin = max(1e-9, 0.01 * full)
        grows.append(full > half + margin)

    last = dist[-3:]
    pointwise_ok = (len(dist) >= 3 and all(v <= rho_threshold for v in last)
                    and all(last[k + 1] <= last[k] for k in range(len(last) - 1)))

    if not pointwise_ok:
        return LambdaReport(dist, devs, None, "Diverges",
                            "rho_inf values do not settle below "
                            f"{rho_threshold} nonincreasing")
    tail_growth = grows[-3:]
    if not any(tail_growth):
        c = max(devs) + 1e-12
        return LambdaReport(dist, devs, c, "ConvergesLambda",
                            f"deviation sup saturated at letter horizon "
                            f"{letters_checked}; witness C = {c:.6g}")
    if all(tail_growth):
        return LambdaReport(dist, devs, None, "PointwiseOnly",
                            "per-letter log-norm deviations keep growing "
                            "with the letter horizon: no uniform C")
    return LambdaReport(dist, devs, None, "Inconclusive",
                        "deviation growth is mixed at this letter horizon; "
                        "increase letters_checked")


def theta_local_constancy_check(records):
    """True iff all theta brackets in the sweep records pairwise overlap.

    A violation certifies the family is not lambda-continuous (the
    finiteness parameter would have to be locally constant).  Returns
    (ok, violating_pair_of_indices_or_None).
    """
    thetas = [r.theta for r in records]
    if len(thetas) < 2:
        return True, None
    los = np.array([b.lo for b in thetas])
    his = np.array([b.hi for b in thetas])
    i = int(np.argmax(los))
    j = int(np.argmin(his))
    if los[i] <= his[j]:
        return True, None
    return False, (i, j)
