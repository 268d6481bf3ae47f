"""System model: generators, system specs, and validation.

A system is a countable family of injective holomorphic contractions of a
seed space X (disk or rectangle).  Explicit generators are exact
similarities z -> a z + b or polynomial maps; an optional analytic tail
model supplies contraction ratios for the letters beyond the explicit
ones, making the alphabet all of N.

Derivative sup-norms drive everything downstream.  |phi'| is the modulus
of a holomorphic function, so its max over X sits on the boundary
(maximum modulus principle); we sample the boundary and widen by a
rigorous second-order mesh term derived from coefficient bounds on the
higher derivatives.  Similarities are exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import cKDTree

from .brackets import Bracket, bracket_sum
from .errors import SystemValidationError, UnknownLetterError
from .geometry import Disk, Rectangle, SeedSpace
from . import tails
from .tails import TailModel

DEFAULT_BOUNDARY_SAMPLES = 4096


# ---------------------------------------------------------------------------
# Generators
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Similarity:
    """z -> a*z + b with 0 < |a| < 1."""

    a: complex
    b: complex

    def apply(self, z):
        return self.a * z + self.b

    def deriv(self, z):
        return self.a * np.ones_like(np.asarray(z))

    def coeffs(self) -> tuple[complex, ...]:
        return (self.b, self.a)


@dataclass(frozen=True)
class Polynomial:
    """Holomorphic polynomial c0 + c1 z + ... + cd z^d (ascending powers)."""

    coefficients: tuple[complex, ...]

    def __post_init__(self):
        cs = tuple(complex(c) for c in self.coefficients)
        while len(cs) > 1 and cs[-1] == 0:
            cs = cs[:-1]
        object.__setattr__(self, "coefficients", cs)

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def apply(self, z):
        return _horner(self.coefficients, z)

    def deriv(self, z):
        return _horner(_dcoeffs(self.coefficients), z)

    def coeffs(self) -> tuple[complex, ...]:
        return self.coefficients


Generator = Similarity | Polynomial


def _horner(coeffs, z):
    z = np.asarray(z)
    out = np.full_like(z, coeffs[-1], dtype=complex)
    for c in reversed(coeffs[:-1]):
        out = out * z + c
    return out


def _dcoeffs(coeffs) -> tuple[complex, ...]:
    if len(coeffs) == 1:
        return (0j,)
    return tuple(k * c for k, c in enumerate(coeffs))[1:] or (0j,)


def _coeff_bound(coeffs, rmax: float) -> float:
    """sup over |z| <= rmax of |p(z)| via the triangle inequality."""
    return float(sum(abs(c) * rmax ** k for k, c in enumerate(coeffs)))


def _zmax(space: SeedSpace) -> float:
    """max |z| over the seed space (for coefficient bounds)."""
    if isinstance(space, Disk):
        return abs(space.center) + space.radius
    return float(np.max(np.abs(space.corners())))


# ---------------------------------------------------------------------------
# Sup norms of polynomials over the seed space
# ---------------------------------------------------------------------------

def poly_sup_modulus(coeffs, space: SeedSpace,
                     samples: int = DEFAULT_BOUNDARY_SAMPLES) -> Bracket:
    """Bracket for sup_X |p|, p holomorphic polynomial.

    Degree <= 1 is exact: |a z + b| is convex, so the sup over a disk is
    |a c + b| + |a| r and over a rectangle the max over the corners.
    Higher degrees use boundary samples plus the second-order mesh bound
    max over a segment <= max(endpoints) + (gap^2/8) * sup|p''| along it.
    """
    cs = tuple(complex(c) for c in coeffs)
    while len(cs) > 1 and cs[-1] == 0:
        cs = cs[:-1]
    if len(cs) <= 2:
        b = cs[0]
        a = cs[1] if len(cs) == 2 else 0j
        if isinstance(space, Disk):
            v = abs(a * space.center + b) + abs(a) * space.radius
        else:
            v = float(np.max(np.abs(a * space.corners() + b)))
        return Bracket.point(v).widen(8.0 * 2.0 ** -52 * max(v, 1.0))

    zb = space.boundary_points(samples)
    vals = np.abs(_horner(cs, zb))
    m = float(np.max(vals))
    gap = 2.0 * space.boundary_mesh_halfgap(samples)
    rmax = _zmax(space)
    d2 = _dcoeffs(_dcoeffs(cs))
    d1 = _dcoeffs(cs)
    # along the boundary parametrization z(s) with |z'| <= 1 per arclength,
    # (d/ds)^2 p = p'' z'^2 + p' z'' ; disks have |z''| = 1/r, edges z'' = 0
    curv = 1.0 / space.radius if isinstance(space, Disk) else 0.0
    h2 = _coeff_bound(d2, rmax) + _coeff_bound(d1, rmax) * curv
    slack = (gap ** 2 / 8.0) * h2
    return Bracket(m, m + slack).widen(8.0 * 2.0 ** -52 * max(m, 1.0))


def poly_inf_modulus(coeffs, space: SeedSpace,
                     samples: int = DEFAULT_BOUNDARY_SAMPLES) -> Bracket:
    """Bracket for inf_X |p| assuming p has no zero in X (minimum modulus:
    the inf then sits on the boundary)."""
    cs = tuple(complex(c) for c in coeffs)
    if len(cs) <= 2 and (len(cs) == 1 or cs[1] == 0):
        v = abs(cs[0])
        return Bracket.point(v)
    zb = space.boundary_points(samples)
    vals = np.abs(_horner(cs, zb))
    m = float(np.min(vals))
    gap = 2.0 * space.boundary_mesh_halfgap(samples)
    rmax = _zmax(space)
    d2 = _dcoeffs(_dcoeffs(cs))
    d1 = _dcoeffs(cs)
    curv = 1.0 / space.radius if isinstance(space, Disk) else 0.0
    h2 = _coeff_bound(d2, rmax) + _coeff_bound(d1, rmax) * curv
    slack = (gap ** 2 / 8.0) * h2
    return Bracket(max(m - slack, 0.0), m)


def derivative_sup_norm(gen: Generator, space: SeedSpace,
                        samples: int = DEFAULT_BOUNDARY_SAMPLES) -> Bracket:
    """Bracket containing sup_X |phi'|.  Exact for similarities."""
    if isinstance(gen, Similarity):
        return Bracket.point(abs(gen.a))
    return poly_sup_modulus(_dcoeffs(gen.coefficients), space, samples)


def derivative_inf_norm(gen: Generator, space: SeedSpace,
                        samples: int = DEFAULT_BOUNDARY_SAMPLES) -> Bracket:
    if isinstance(gen, Similarity):
        return Bracket.point(abs(gen.a))
    return poly_inf_modulus(_dcoeffs(gen.coefficients), space, samples)


# ---------------------------------------------------------------------------
# System spec and validation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SystemSpec:
    space: SeedSpace
    generators: tuple[Generator, ...]
    tail: TailModel | None = None
    osc_declared: bool = True

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))

    @property
    def n_explicit(self) -> int:
        return len(self.generators)

    @property
    def infinite(self) -> bool:
        return self.tail is not None


@dataclass(frozen=True)
class ValidatedSystem:
    """A system spec annotated with certified norm data.

    letter_norms[i]   bracket for sup_X |phi_i'| of explicit letter i+1
    letter_infs[i]    bracket for inf_X |phi_i'|
    contraction_ratio bracket containing sup over all letters of the norms
    distortion_k      bounded distortion constant K >= 1 (1 for similarities)
    log_lipschitz     Lipschitz bound for z -> log|phi_w'(z)|, uniform in w
    separation        min distance between boundary-sample images per pair
    """

    spec: SystemSpec
    letter_norms: tuple[Bracket, ...]
    letter_infs: tuple[Bracket, ...]
    contraction_ratio: Bracket
    distortion_k: float
    log_lipschitz: float
    separation: dict = field(compare=False, hash=False, default=None)

    @property
    def space(self) -> SeedSpace:
        return self.spec.space

    @property
    def generators(self) -> tuple[Generator, ...]:
        return self.spec.generators

    @property
    def tail(self) -> TailModel | None:
        return self.spec.tail

    @property
    def n_explicit(self) -> int:
        return self.spec.n_explicit

    @property
    def infinite(self) -> bool:
        return self.spec.infinite

    @property
    def is_similarity(self) -> bool:
        return all(isinstance(g, Similarity) for g in self.spec.generators)

    def letter_norm(self, i: int) -> Bracket:
        """Norm bracket for letter i (1-based; tail letters allowed)."""
        if i < 1:
            raise UnknownLetterError(f"letter {i} out of range")
        if i <= self.n_explicit:
            return self.letter_norms[i - 1]
        if self.tail is None:
            raise UnknownLetterError(
                f"letter {i} beyond finite alphabet of size {self.n_explicit}")
        return tails.ratio(self.tail, i)


def _image_samples(gen: Generator, space: SeedSpace, samples: int) -> np.ndarray:
    return gen.apply(space.boundary_points(samples))


def _winding_number(curve: np.ndarray, w: complex) -> float:
    rel = curve - w
    ang = np.angle(rel)
    d = np.diff(np.concatenate([ang, ang[:1]]))
    d = (d + np.pi) % (2.0 * np.pi) - np.pi
    return float(np.sum(d) / (2.0 * np.pi))


def validate_system(spec: SystemSpec,
                    boundary_samples: int = DEFAULT_BOUNDARY_SAMPLES) -> ValidatedSystem:
    """Check contraction / self-mapping / heuristic separation and annotate.

    Raises SystemValidationError carrying the full list of violations.
    Separation is evidence, not proof: images of boundary samples under
    distinct generators must not interleave; the open set condition itself
    is declared by the caller (``osc_declared``).
    """
    errors = []
    space = spec.space

    total_letters = spec.n_explicit + (math.inf if spec.infinite else 0)
    if total_letters < 2:
        errors.append("EmptyAlphabet: need at least two letters")
    if spec.infinite and spec.tail.start != spec.n_explicit + 1:
        errors.append(
            f"tail start {spec.tail.start} != explicit letter count + 1 "
            f"({spec.n_explicit + 1}); the alphabet must be all of N")

    norms, infs = [], []
    images = []
    for k, gen in enumerate(spec.generators, start=1):
        if isinstance(gen, Similarity):
            r = abs(gen.a)
            if not (0.0 < r < 1.0):
                errors.append(f"ContractionViolation: letter {k} has |a| = {r}")
                continue
            norms.append(Bracket.point(r))
            infs.append(Bracket.point(r))
            img = _image_samples(gen, space, boundary_samples)
            if not bool(np.all(space.contains(img, pad=1e-12))):
                errors.append(f"SelfMapViolation: letter {k} image escapes the seed")
            images.append(img)
        else:
            sup = derivative_sup_norm(gen, space, boundary_samples)
            inf = derivative_inf_norm(gen, space, boundary_samples)
            if sup.hi >= 1.0:
                errors.append(
                    f"ContractionViolation: letter {k} derivative bound {sup.hi:.6g} >= 1")
                continue
            if inf.lo <= 0.0:
                errors.append(
                    f"ContractionViolation: letter {k} derivative modulus not "
                    f"bounded away from 0 (min bound {inf.lo:.3g}); injectivity "
                    "evidence fails")
                continue
            img = _image_samples(gen, space, boundary_samples)
            if not bool(np.all(space.contains(img, pad=0.0))):
                errors.append(f"SelfMapViolation: letter {k} image escapes the seed")
            w = complex(gen.apply(np.asarray(space.center)))
            wind = _winding_number(img, w)
            if abs(wind - 1.0) > 0.1:
                errors.append(
                    f"letter {k}: boundary image winding {wind:.3f} != 1; "
                    "injectivity evidence fails")
            norms.append(sup)
            infs.append(inf)
            images.append(img)

    if spec.infinite:
        top = tails.sup_ratio(spec.tail)
        if top.hi >= 1.0:
            errors.append(
                f"ContractionViolation: first tail ratio bound {top.hi:.6g} >= 1")

    if errors:
        raise SystemValidationError(errors)

    ratio = norms[0]
    for b in norms[1:]:
        ratio = ratio.union(b)
    if spec.infinite:
        ratio = ratio.union(tails.sup_ratio(spec.tail))
    if ratio.hi >= 1.0:
        raise SystemValidationError(
            [f"ContractionViolation: system contraction ratio bound {ratio.hi} >= 1"])

    separation = {}
    for i in range(len(images)):
        for j in range(i + 1, len(images)):
            tree = cKDTree(np.column_stack([images[i].real, images[i].imag]))
            d, _ = tree.query(np.column_stack([images[j].real, images[j].imag]), k=1)
            separation[(i + 1, j + 1)] = float(np.min(d))

    # distortion: K = exp(Lbar * diam X) with Lbar >= Lip(log|phi_w'|) for
    # every word w; Lbar = max_i sup|phi_i''| / inf|phi_i'| / (1 - s)
    s_hi = ratio.hi
    lam = 0.0
    for gen, inf in zip(spec.generators, infs):
        if isinstance(gen, Similarity):
            continue
        d2 = _dcoeffs(_dcoeffs(gen.coefficients))
        lam = max(lam, _coeff_bound(d2, _zmax(space)) / inf.lo)
    log_lip = lam / (1.0 - s_hi)
    k_const = math.exp(log_lip * space.diameter)

    return ValidatedSystem(
        spec=spec,
        letter_norms=tuple(norms),
        letter_infs=tuple(infs),
        contraction_ratio=ratio,
        distortion_k=k_const,
        log_lipschitz=log_lip,
        separation=separation,
    )


def word_norm(system: ValidatedSystem, word) -> Bracket:
    """Bracket for the sup-norm of the derivative of phi_word.

    Exact for similarity systems (the derivative is a constant product).
    Otherwise the product of per-letter sup-norms is an upper bound and
    the product divided by K^(|word|-1) a lower bound.
    """
    word = tuple(int(i) for i in word)
    if len(word) == 0:
        return Bracket.point(1.0)
    parts = [system.letter_norm(i) for i in word]
    hi = 1.0
    lo = 1.0
    for b in parts:
        hi *= b.hi
        lo *= b.lo
    if system.distortion_k > 1.0:
        lo /= system.distortion_k ** (len(word) - 1)
    out = Bracket(lo, hi)
    return out.widen(8.0 * 2.0 ** -52 * max(hi, 1.0) * len(word))
