"""Seed spaces: closed disks and closed axis-aligned rectangles in C.

Both shapes equal the closure of their interior and admit interior cones
at every boundary point, so they satisfy the standing geometric
assumptions without further checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Disk:
    center: complex
    radius: float

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("disk radius must be positive")

    @property
    def diameter(self) -> float:
        return 2.0 * self.radius

    def bbox(self) -> tuple[float, float, float, float]:
        c, r = self.center, self.radius
        return (c.real - r, c.real + r, c.imag - r, c.imag + r)

    def contains(self, z, pad: float = 0.0):
        return np.abs(np.asarray(z) - self.center) <= self.radius + pad

    def boundary_points(self, n: int) -> np.ndarray:
        th = np.linspace(0.0, 2.0 * np.pi, n, endpoint=False)
        return self.center + self.radius * np.exp(1j * th)

    def boundary_mesh_halfgap(self, n: int) -> float:
        # chord spacing <= arc spacing
        return math.pi * self.radius / n

    def interior_grid(self, n: int) -> np.ndarray:
        x0, x1, y0, y1 = self.bbox()
        xs = np.linspace(x0, x1, n)
        ys = np.linspace(y0, y1, n)
        zz = xs[None, :] + 1j * ys[:, None]
        zz = zz.ravel()
        return zz[self.contains(zz)]

    def farthest_point_range(self) -> tuple[float, float]:
        """Range of sup_{z in X} |z - w| over all possible w in X."""
        return (self.radius, 2.0 * self.radius)


@dataclass(frozen=True)
class Rectangle:
    lower_left: complex
    upper_right: complex

    def __post_init__(self):
        if not (self.upper_right.real > self.lower_left.real
                and self.upper_right.imag > self.lower_left.imag):
            raise ValueError("rectangle must have positive width and height")

    @property
    def width(self) -> float:
        return self.upper_right.real - self.lower_left.real

    @property
    def height(self) -> float:
        return self.upper_right.imag - self.lower_left.imag

    @property
    def center(self) -> complex:
        return 0.5 * (self.lower_left + self.upper_right)

    @property
    def diameter(self) -> float:
        return math.hypot(self.width, self.height)

    def bbox(self) -> tuple[float, float, float, float]:
        return (self.lower_left.real, self.upper_right.real,
                self.lower_left.imag, self.upper_right.imag)

    def contains(self, z, pad: float = 0.0):
        z = np.asarray(z)
        x0, x1, y0, y1 = self.bbox()
        return ((z.real >= x0 - pad) & (z.real <= x1 + pad)
                & (z.imag >= y0 - pad) & (z.imag <= y1 + pad))

    def corners(self) -> np.ndarray:
        x0, x1, y0, y1 = self.bbox()
        return np.array([x0 + 1j * y0, x1 + 1j * y0, x1 + 1j * y1, x0 + 1j * y1])

    def boundary_points(self, n: int) -> np.ndarray:
        """n points along the perimeter, corners always included."""
        cs = self.corners()
        per_edge = max(1, n // 4)
        pts = []
        for k in range(4):
            a, b = cs[k], cs[(k + 1) % 4]
            t = np.linspace(0.0, 1.0, per_edge, endpoint=False)
            pts.append(a + t * (b - a))
        return np.concatenate(pts)

    def boundary_mesh_halfgap(self, n: int) -> float:
        per_edge = max(1, n // 4)
        return 0.5 * max(self.width, self.height) / per_edge

    def interior_grid(self, n: int) -> np.ndarray:
        x0, x1, y0, y1 = self.bbox()
        xs = np.linspace(x0, x1, n)
        ys = np.linspace(y0, y1, n)
        return (xs[None, :] + 1j * ys[:, None]).ravel()

    def farthest_point_range(self) -> tuple[float, float]:
        return (0.5 * self.diameter, self.diameter)


SeedSpace = Disk | Rectangle
