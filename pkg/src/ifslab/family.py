"""Analytic parameter families: sweeps, type classification, phase loci.

Three family shapes are supported:

  ExampleFamilyV    two similarity generators with ratios 4a(1/2 +/- g)^2
                    anchored at fixed points z1, z2, plus a normalized
                    power-log tail: theta = 1 for every parameter and
                    P(g, 1) = log(1 + 8a|g|^2) in closed form.  The locus
                    P(g, theta) = 0 degenerates to the single point g = 0.
  ScalingFamily     phi_i composed with psi_g(x) = g(x - x0) + x0, either
                    on every letter or on a finite subset; similarity
                    ratios scale exactly by |g|.
  GridFamily        explicit per-parameter system specs.

A sweep records (theta, P(theta), class, h) per grid point; the multiset
of observed classes maps onto the eight family types:

  I   all CFR, h constant        II   all CFR, h nonconstant
  III all FSR, h constant        IV   all FSR, h nonconstant
  V   FSR and CR, no IR/CFR      VI   all CR
  VII FSR, CR and IR, no CFR     VIII all IR

Anything else, any Undetermined sample, or too few samples to test
constancy, yields Undetermined: the trichotomies are exact but sampling
is not.  Verdicts are conditional on lambda-continuity of the family,
which is spot-checked through the local constancy of theta.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np

from .brackets import Bracket
from .errors import (BudgetExceededError, EmptyRecordsError, IfsLabError,
                     OutOfDomainError, PathTooShortError,
                     ThetaNotConstantError)
from . import tails
from .pressure import (DEFAULT_WORD_BUDGET, RegularityClass, classify,
                       finiteness_parameter, pressure)
from .dimension import bowen_dimension
from .geometry import Disk
from .systems import Polynomial, Similarity, SystemSpec, validate_system
from .tails import GeometricTail, PowerLogTail

SWEEP_BOUNDARY_SAMPLES = 1024


# ---------------------------------------------------------------------------
# Parameter domains
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SegmentDomain:
    lo: float
    hi: float

    def contains(self, g: complex) -> bool:
        return (abs(g.imag) <= 1e-12
                and self.lo - 1e-12 <= g.real <= self.hi + 1e-12)


@dataclass(frozen=True)
class DiskDomain:
    center: complex
    radius: float

    def contains(self, g: complex) -> bool:
        return abs(g - self.center) <= self.radius + 1e-12


@dataclass(frozen=True)
class RectDomain:
    lower_left: complex
    upper_right: complex

    def contains(self, g: complex) -> bool:
        return (self.lower_left.real - 1e-12 <= g.real <= self.upper_right.real + 1e-12
                and self.lower_left.imag - 1e-12 <= g.imag <= self.upper_right.imag + 1e-12)


# ---------------------------------------------------------------------------
# Family specs
# ---------------------------------------------------------------------------

@lru_cache(maxsize=32)
def _normalized_powerlog_scale(a: float, a3: float) -> Bracket:
    """Bracket for a3 * kappa, where kappa normalizes
    sum_{i>=3} kappa / (i ln^2 i) = (1 - 2a) / a3."""
    target = (1.0 - 2.0 * a) / a3
    unit = PowerLogTail(start=3, scale=Bracket.point(1.0), power=1.0,
                        log_power=2.0)
    s = tails.tail_sum(unit, 1.0)
    kappa = Bracket.point(target).div(s)
    return kappa.scale(a3)


@dataclass(frozen=True)
class ExampleFamilyV:
    """Two-similarity family with a critically regular point at g = 0."""

    a: float
    a3: float
    z1: complex
    z2: complex
    z3: complex
    radius: float

    def __post_init__(self):
        if not (0.0 < self.a < 0.5):
            raise ValueError("a must lie in (0, 1/2)")
        if not (0.0 < self.a3 < 1.0):
            raise ValueError("a3 must lie in (0, 1)")
        if len({self.z1, self.z2, self.z3}) != 3:
            raise ValueError("fixed points z1, z2, z3 must be distinct")

    @property
    def domain(self) -> DiskDomain:
        return DiskDomain(0j, self.radius)

    def tail_scale(self) -> Bracket:
        return _normalized_powerlog_scale(self.a, self.a3)


@dataclass(frozen=True)
class ScalingFamily:
    """phi_i o psi_g on the chosen letters, psi_g(x) = g(x - x0) + x0."""

    base: SystemSpec
    center: complex
    letters: tuple[int, ...] | str  # explicit letter subset or "all"
    domain: SegmentDomain | DiskDomain | RectDomain

    def __post_init__(self):
        if self.letters != "all":
            ls = tuple(sorted(set(int(i) for i in self.letters)))
            if any(i < 1 or i > self.base.n_explicit for i in ls):
                raise ValueError("scaled letters must be explicit generators")
            object.__setattr__(self, "letters", ls)


@dataclass(frozen=True)
class GridFamily:
    """User-supplied per-parameter system table."""

    points: tuple[complex, ...]
    systems: tuple[SystemSpec, ...]

    def __post_init__(self):
        if len(self.points) != len(self.systems):
            raise ValueError("points and systems must align")


FamilySpec = ExampleFamilyV | ScalingFamily | GridFamily


def _scale_generator(gen, gamma: complex, x0: complex):
    if isinstance(gen, Similarity):
        return Similarity(gen.a * gamma, gen.a * x0 * (1.0 - gamma) + gen.b)
    # polynomial composed with the affine map gamma*z + (1-gamma)*x0
    p = np.polynomial.Polynomial(np.asarray(gen.coefficients, dtype=complex))
    aff = np.polynomial.Polynomial([x0 * (1.0 - gamma), gamma])
    comp = p(aff)
    return Polynomial(tuple(comp.coef.tolist()))


def _scale_tail(tail, gamma: complex):
    if tail is None:
        return None
    m = abs(gamma)
    if isinstance(tail, PowerLogTail):
        return replace(tail, scale=tail.scale.scale(m))
    return replace(tail, scale=tail.scale * m)


def instantiate(family: FamilySpec, gamma: complex) -> SystemSpec:
    """Concrete system spec for the given parameter (not yet validated)."""
    gamma = complex(gamma)

    if isinstance(family, ExampleFamilyV):
        if not family.domain.contains(gamma):
            raise OutOfDomainError(f"|{gamma}| exceeds family radius {family.radius}")
        a1 = 4.0 * family.a * (0.5 + gamma) ** 2
        a2 = 4.0 * family.a * (0.5 - gamma) ** 2
        gens = (Similarity(a1, family.z1 * (1.0 - a1)),
                Similarity(a2, family.z2 * (1.0 - a2)))
        tail = PowerLogTail(start=3, scale=family.tail_scale(), power=1.0,
                            log_power=2.0)
        return SystemSpec(space=Disk(0j, 1.0), generators=gens, tail=tail,
                          osc_declared=True)

    if isinstance(family, ScalingFamily):
        if not family.domain.contains(gamma):
            raise OutOfDomainError(f"{gamma} outside the declared domain")
        scale_all = family.letters == "all"
        chosen = (set(range(1, family.base.n_explicit + 1)) if scale_all
                  else set(family.letters))
        gens = tuple(
            _scale_generator(g, gamma, family.center) if (k + 1) in chosen else g
            for k, g in enumerate(family.base.generators))
        tail = _scale_tail(family.base.tail, gamma) if scale_all else family.base.tail
        return SystemSpec(space=family.base.space, generators=gens, tail=tail,
                          osc_declared=family.base.osc_declared)

    for p, spec in zip(family.points, family.systems):
        if abs(p - gamma) <= 1e-12:
            return spec
    raise OutOfDomainError(f"{gamma} is not a grid point of this family")


# ---------------------------------------------------------------------------
# Sweeps
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SweepRecord:
    gamma: complex
    theta: Bracket | None
    pressure_at_theta: Bracket | None
    regularity: RegularityClass | None
    h: Bracket | None
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.error is None


def _sweep_point(family: FamilySpec, gamma: complex, tol: float,
                 budget: int, boundary_samples: int) -> SweepRecord:
    try:
        spec = instantiate(family, gamma)
        system = validate_system(spec, boundary_samples=boundary_samples)
        report = classify(system, tol=tol, budget=budget)
        dim = bowen_dimension(system, tol=tol, budget=budget)
        return SweepRecord(gamma=gamma, theta=report.theta,
                           pressure_at_theta=report.pressure_at_theta,
                           regularity=report.regularity, h=dim.h)
    except IfsLabError as exc:
        return SweepRecord(gamma=gamma, theta=None, pressure_at_theta=None,
                           regularity=None, h=None, error=str(exc))


def sweep(family: FamilySpec, grid, tol: float = 1e-7,
          budget: int = DEFAULT_WORD_BUDGET,
          boundary_samples: int = SWEEP_BOUNDARY_SAMPLES,
          threads: int | None = None) -> list[SweepRecord]:
    """Per-parameter (theta, P(theta), class, h) records, in grid order.

    Per-point failures are recorded in-band and the sweep continues.
    """
    grid = [complex(g) for g in grid]
    if threads and threads > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(
                lambda g: _sweep_point(family, g, tol, budget, boundary_samples),
                grid))
    return [_sweep_point(family, g, tol, budget, boundary_samples) for g in grid]


# ---------------------------------------------------------------------------
# Family classification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FamilyVerdict:
    family_type: str  # "I" .. "VIII" or "Undetermined"
    counts: dict
    h_constant: bool
    h_value: Bracket | None
    cr_locus: tuple = ()
    detail: str = ""


_R = RegularityClass


def classify_family(records, tol: float = 1e-7) -> FamilyVerdict:
    """Map the observed class multiset onto the eight family types.

    h counts as constant when max h.hi - min h.lo < 3 tol.  Families whose
    type hinges on constancy (I/II, III/IV) need at least two samples.
    """
    good = [r for r in records if r.ok]
    if not good:
        raise EmptyRecordsError("no error-free sweep records")
    counts = {}
    for r in good:
        counts[str(r.regularity)] = counts.get(str(r.regularity), 0) + 1

    present = {r.regularity for r in good}
    h_lo = min(r.h.lo for r in good)
    h_hi = max(r.h.hi for r in good)
    h_const = (h_hi - h_lo) < 3.0 * tol
    h_val = Bracket(h_lo, h_hi) if h_const else None

    def verdict(t, detail=""):
        return FamilyVerdict(t, counts, h_const, h_val, (), detail)

    if _R.UNDETERMINED in present:
        return verdict("Undetermined", "undetermined samples at decision boundaries")

    cfr = _R.COFINITELY_REGULAR in present
    fsr = _R.STRONGLY_REGULAR_NON_COFINITE in present
    cr = _R.CRITICALLY_REGULAR in present
    ir = _R.IRREGULAR in present

    if present == {_R.COFINITELY_REGULAR}:
        if len(good) < 2:
            return verdict("Undetermined", "single sample: h constancy untestable")
        return verdict("I" if h_const else "II")
    if present == {_R.STRONGLY_REGULAR_NON_COFINITE}:
        if len(good) < 2:
            return verdict("Undetermined", "single sample: h constancy untestable")
        return verdict("III" if h_const else "IV")
    if fsr and cr and not ir and not cfr:
        return verdict("V")
    if present == {_R.CRITICALLY_REGULAR}:
        return verdict("VI")
    if fsr and cr and ir and not cfr:
        return verdict("VII")
    if present == {_R.IRREGULAR}:
        return verdict("VIII")
    return verdict("Undetermined",
                   f"class combination {sorted(str(c) for c in present)} "
                   "matches no single type")


# ---------------------------------------------------------------------------
# Critically regular locus
# ---------------------------------------------------------------------------

def _theta_and_pressure(family, gamma, tol, budget, boundary_samples):
    system = validate_system(instantiate(family, gamma),
                             boundary_samples=boundary_samples)
    th = finiteness_parameter(system)
    return system, th


def _pressure_at(family, gamma, t, tol, budget, boundary_samples):
    system = validate_system(instantiate(family, gamma),
                             boundary_samples=boundary_samples)
    try:
        return pressure(system, t, tol=tol, budget=budget)
    except BudgetExceededError as exc:
        return exc.bracket


def _bracket_sign(p: Bracket) -> int:
    if p.infinite or p.lo > 0:
        return 1
    if p.hi < 0:
        return -1
    return 0


def _refine_crossing(family, g_lo, g_hi, t, tol, budget, samples,
                     max_iter: int = 200) -> complex:
    """Bisect a sign change of gamma -> P(gamma, t) along a segment until the
    pressure bracket straddles zero (vertices must contain the locus)."""
    s_lo = _bracket_sign(_pressure_at(family, g_lo, t, tol, budget, samples))
    if s_lo == 0:
        return g_lo
    for _ in range(max_iter):
        mid = 0.5 * (g_lo + g_hi)
        s_mid = _bracket_sign(_pressure_at(family, mid, t, tol, budget, samples))
        if s_mid == 0:
            return mid
        if s_mid == s_lo:
            g_lo = mid
        else:
            g_hi = mid
        if abs(g_hi - g_lo) < 1e-15 * max(1.0, abs(g_hi)):
            return 0.5 * (g_lo + g_hi)
    return 0.5 * (g_lo + g_hi)


def cr_locus(family: FamilySpec, mesh, tol: float = 1e-7,
             budget: int = DEFAULT_WORD_BUDGET,
             boundary_samples: int = SWEEP_BOUNDARY_SAMPLES) -> list[list[complex]]:
    """Zero set of gamma -> P(gamma, theta) on a mesh, as polylines.

    ``mesh`` is a 1-D array of real parameters (segment scan) or a pair
    (re_points, im_points) spanning a rectangular grid.  The finiteness
    parameter must be constant across the mesh; a varying theta certifies
    the family is not lambda-continuous and the locus is undefined.

    Sign changes between neighbors are refined by bisection until the
    pressure bracket at the emitted vertex straddles zero; grid points
    whose own bracket already straddles zero (isolated zeros, e.g. a
    tangential minimum) are emitted as single-point polylines.
    """
    if isinstance(mesh, tuple) and len(mesh) == 2:
        re_pts = np.asarray(mesh[0], dtype=float)
        im_pts = np.asarray(mesh[1], dtype=float)
        points = [[re + 1j * im for re in re_pts] for im in im_pts]
        flat = [g for row in points for g in row]
    else:
        seg = np.asarray(mesh, dtype=float)
        points = None
        flat = [complex(g) for g in seg]

    thetas = []
    for g in flat:
        _, th = _theta_and_pressure(family, g, tol, budget, boundary_samples)
        thetas.append(th)
    lo = max(th.lo for th in thetas)
    hi = min(th.hi for th in thetas)
    if lo > hi:
        i = int(np.argmax([th.lo for th in thetas]))
        j = int(np.argmin([th.hi for th in thetas]))
        raise ThetaNotConstantError(
            f"theta varies across the mesh ({thetas[i].lo:.6g} vs "
            f"{thetas[j].hi:.6g}): family is not lambda-continuous",
            violating_pair=(flat[i], flat[j]))
    t_star = 0.5 * (lo + hi)

    pvals = {g: _pressure_at(family, g, t_star, tol, budget, boundary_samples)
             for g in flat}

    polylines: list[list[complex]] = []
    for g in flat:
        p = pvals[g]
        if not p.infinite and p.straddles_zero():
            polylines.append([g])

    if points is None:
        for a, b in zip(flat[:-1], flat[1:]):
            sa, sb = _bracket_sign(pvals[a]), _bracket_sign(pvals[b])
            if sa != 0 and sb != 0 and sa != sb:
                polylines.append([_refine_crossing(family, a, b, t_star, tol,
                                                   budget, boundary_samples)])
        return polylines

    # rectangular mesh: marching squares on the midpoint sign field
    mid = {g: (math.inf if pvals[g].infinite else pvals[g].mid) for g in flat}
    for r in range(len(points) - 1):
        for c in range(len(points[0]) - 1):
            corners = [points[r][c], points[r][c + 1],
                       points[r + 1][c + 1], points[r + 1][c]]
            vals = [mid[g] for g in corners]
            cuts = []
            for k in range(4):
                a, b = corners[k], corners[(k + 1) % 4]
                va, vb = vals[k], vals[(k + 1) % 4]
                if not (math.isfinite(va) and math.isfinite(vb)):
                    continue
                if (va > 0) != (vb > 0):
                    s = va / (va - vb)
                    cuts.append(a + s * (b - a))
            if len(cuts) >= 2:
                polylines.append(cuts[:2])
    return polylines


# ---------------------------------------------------------------------------
# Smoothness probe
# ---------------------------------------------------------------------------

def smoothness_probe(records, tol: float = 1e-7,
                     jump_factor: float = 10.0) -> list[float]:
    """Suspected non-analyticity points of s -> h(s) along a real path.

    Flags (a) plateau ends, where h leaves the constant-theta plateau and
    starts rising (the type-VII transition signature), and (b) points
    whose second divided difference jumps by more than ``jump_factor``
    relative to its neighbors.
    """
    good = [r for r in records if r.ok]
    if len(good) < 5:
        raise PathTooShortError("need at least five error-free records")
    good = sorted(good, key=lambda r: r.gamma.real)
    gam = np.array([r.gamma.real for r in good])
    if np.max(np.abs([r.gamma.imag for r in good])) > 1e-12:
        raise ValueError("smoothness probe requires a real parameter path")
    steps = np.diff(gam)
    delta = float(np.mean(steps))
    if np.max(np.abs(steps - delta)) > 1e-9 * max(1.0, abs(delta)):
        raise ValueError("smoothness probe requires a uniform step")

    h = np.array([r.h.mid for r in good])
    widths = np.array([r.h.width for r in good])
    theta = float(np.median([r.theta.mid for r in good]))

    flags: list[float] = []

    plateau_tol = max(3.0 * tol, 2.0 * float(np.max(widths)))
    on_plateau = np.abs(h - theta) <= plateau_tol
    for j in range(len(good) - 1):
        if on_plateau[j] and not on_plateau[j + 1]:
            flags.append(float(gam[j]))

    d2 = (h[2:] - 2.0 * h[1:-1] + h[:-2]) / delta ** 2
    floor = max(4.0 * float(np.max(widths)) / delta ** 2, 1e-12)
    for j in range(1, len(d2) - 1):
        neighbors = max(abs(d2[j - 1]), abs(d2[j + 1]), floor)
        if abs(d2[j]) > jump_factor * neighbors:
            flags.append(float(gam[j + 1]))

    return sorted(set(flags))
