"""John-domain presets with analytic inner/outer curve constants.

Every preset carries a distinguished center point, a pair ``0 < alpha <=
beta`` bounding how fast curves to the center may approach the boundary, and
a concentric reference ball used for interior averages.  The reference-ball
radius is ``alpha^2/beta`` capped by the exact distance from the center to
the complement of the rasterized region, so the ball never leaks outside the
domain at any resolution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from .errors import InputError, ParameterError, ResolutionError
from .grid import Ball, DyadicGrid, DyadicMask, GridFunction, Polygon, rasterize_shape
from .operators import riesz_potential


@dataclass(frozen=True)
class BallDomain:
    radius: float
    center: tuple[float, float] = (0.5, 0.5)


@dataclass(frozen=True)
class SquareDomain:
    side: float
    center: tuple[float, float] = (0.5, 0.5)


@dataclass(frozen=True)
class PolygonDomain:
    vertices: tuple[tuple[float, float], ...]


@dataclass(frozen=True)
class PuncturedBallDomain:
    """Ball with the single cell containing its center removed."""

    radius: float
    center: tuple[float, float] = (0.5, 0.5)


DomainPreset = BallDomain | SquareDomain | PolygonDomain | PuncturedBallDomain


def domain_label(preset: DomainPreset) -> str:
    if isinstance(preset, BallDomain):
        return f"ball(radius={preset.radius!r})"
    if isinstance(preset, SquareDomain):
        return f"square(side={preset.side!r})"
    if isinstance(preset, PolygonDomain):
        return f"polygon(vertices={len(preset.vertices)})"
    if isinstance(preset, PuncturedBallDomain):
        return f"punctured_ball(radius={preset.radius!r})"
    raise ParameterError(f"unknown domain preset {preset!r}")


@dataclass(frozen=True, eq=False)
class Domain:
    """Rasterized region with its curve constants and reference ball."""

    grid: DyadicGrid
    mask: DyadicMask
    john_center: tuple[float, float]
    alpha: float
    beta: float
    ref_radius: float
    label: str

    @property
    def level(self) -> int:
        return self.grid.level

    def diameter(self) -> float:
        """Largest distance between occupied cell centers (hull-accelerated)."""
        i, j = np.nonzero(self.mask.bits)
        if i.size == 0:
            return 0.0
        h = self.grid.cell_width
        pts = np.column_stack(((i + 0.5) * h, (j + 0.5) * h))
        if pts.shape[0] > 3:
            try:
                pts = pts[ConvexHull(pts).vertices]
            except QhullError:
                pass  # degenerate (collinear) masks: fall through to pairwise
        d2 = ((pts[:, None, :] - pts[None, :, :]) ** 2).sum(axis=2)
        return float(np.sqrt(d2.max()))

    def to_json(self) -> dict:
        return {
            "preset": self.label,
            "level": self.level,
            "alpha": self.alpha,
            "beta": self.beta,
            "john_center": [self.john_center[0], self.john_center[1]],
            "ref_ball_radius": self.ref_radius,
        }


def _cell_of(grid: DyadicGrid, point: tuple[float, float]) -> tuple[int, int]:
    n = grid.n
    i = min(int(point[0] * n), n - 1)
    j = min(int(point[1] * n), n - 1)
    return i, j


def _distance_to_complement(grid: DyadicGrid, mask: DyadicMask, point: tuple[float, float]) -> float:
    """Exact distance from a point to the closed complement of the mask region.

    The complement is the union of the unoccupied cells and everything outside
    the unit square.
    """
    x, y = point
    border = max(min(x, 1.0 - x, y, 1.0 - y), 0.0)
    comp_i, comp_j = np.nonzero(~mask.bits)
    if comp_i.size == 0:
        return border
    h = grid.cell_width
    dx = np.maximum(np.maximum(comp_i * h - x, x - (comp_i + 1) * h), 0.0)
    dy = np.maximum(np.maximum(comp_j * h - y, y - (comp_j + 1) * h), 0.0)
    return float(min(border, np.sqrt(dx * dx + dy * dy).min()))


def _polygon_centroid(vertices: np.ndarray) -> tuple[float, float]:
    x, y = vertices[:, 0], vertices[:, 1]
    xn, yn = np.roll(x, -1), np.roll(y, -1)
    cross = x * yn - xn * y
    area2 = cross.sum()
    if area2 == 0.0:
        raise ParameterError("polygon has zero area")
    cx = ((x + xn) * cross).sum() / (3.0 * area2)
    cy = ((y + yn) * cross).sum() / (3.0 * area2)
    return float(cx), float(cy)


def _require_convex(vertices: np.ndarray) -> None:
    m = vertices.shape[0]
    sign = 0.0
    for k in range(m):
        a, b, c = vertices[k], vertices[(k + 1) % m], vertices[(k + 2) % m]
        cross = (b[0] - a[0]) * (c[1] - b[1]) - (b[1] - a[1]) * (c[0] - b[0])
        if cross != 0.0:
            if sign != 0.0 and np.sign(cross) != sign:
                raise ParameterError("polygon preset must be convex")
            sign = np.sign(cross)
    if sign == 0.0:
        raise ParameterError("polygon preset must be convex")


def make_domain(preset: DomainPreset, grid: DyadicGrid) -> Domain:
    """Rasterize a preset and attach its analytic constants.

    Curve constants: ball -> (R, R); square -> (a/2, a*sqrt(2)/2); convex
    polygon about its centroid -> (inradius^2/circumradius, circumradius),
    a conservative pair; punctured ball -> same as the ball (one removed
    cell cannot change path-width proportions at grid scale), with the
    center moved one cell in +x so it sits on an occupied cell.
    """
    label = domain_label(preset)
    if isinstance(preset, (BallDomain, PuncturedBallDomain)):
        r = float(preset.radius)
        if not (r > 0.0 and math.isfinite(r)):
            raise ParameterError(f"ball radius must be positive, got {preset.radius!r}")
        mask = rasterize_shape(grid, Ball(preset.center, r))
        alpha = beta = r
        center = (float(preset.center[0]), float(preset.center[1]))
        if isinstance(preset, PuncturedBallDomain):
            ci, cj = _cell_of(grid, center)
            bits = mask.bits.copy()
            if not bits[ci, cj]:
                raise ResolutionError("puncture cell is not inside the ball at this level")
            bits[ci, cj] = False
            mask = DyadicMask(grid, bits)
            h = grid.cell_width
            center = ((ci + 1 + 0.5) * h, (cj + 0.5) * h)
    elif isinstance(preset, SquareDomain):
        a = float(preset.side)
        if not (a > 0.0 and math.isfinite(a)):
            raise ParameterError(f"square side must be positive, got {preset.side!r}")
        cx, cy = preset.center
        verts = (
            (cx - a / 2, cy - a / 2),
            (cx + a / 2, cy - a / 2),
            (cx + a / 2, cy + a / 2),
            (cx - a / 2, cy + a / 2),
        )
        mask = rasterize_shape(grid, Polygon(verts))
        alpha, beta = a / 2.0, a * math.sqrt(2.0) / 2.0
        center = (float(cx), float(cy))
    elif isinstance(preset, PolygonDomain):
        verts = np.asarray(preset.vertices, dtype=np.float64)
        if verts.ndim != 2 or verts.shape[0] < 3 or verts.shape[1] != 2:
            raise ParameterError("polygon preset needs at least 3 (x, y) vertices")
        _require_convex(verts)
        mask = rasterize_shape(grid, Polygon(tuple(map(tuple, verts))))
        center = _polygon_centroid(verts)
        circ = float(np.hypot(verts[:, 0] - center[0], verts[:, 1] - center[1]).max())
        edges = np.roll(verts, -1, axis=0) - verts
        rel = np.asarray(center) - verts
        lengths = np.hypot(edges[:, 0], edges[:, 1])
        if np.any(lengths == 0.0):
            raise ParameterError("polygon preset has a repeated vertex")
        inr = float((np.abs(edges[:, 0] * rel[:, 1] - edges[:, 1] * rel[:, 0]) / lengths).min())
        alpha, beta = inr * inr / circ, circ
    else:
        raise ParameterError(f"unknown domain preset {preset!r}")

    if mask.is_empty:
        raise ResolutionError(f"{label} rasterizes to an empty mask at level {grid.level}")
    ji, jj = _cell_of(grid, center)
    if not mask.bits[ji, jj]:
        raise ResolutionError(f"{label}: center cell ({ji}, {jj}) is not occupied at level {grid.level}")
    ref_radius = min(alpha * alpha / beta, _distance_to_complement(grid, mask, center))
    return Domain(grid, mask, center, alpha, beta, ref_radius, label)


def reference_average(u: GridFunction, domain: Domain) -> float:
    """Arithmetic mean of ``u`` over cells whose center lies in the reference ball."""
    if u.grid.level != domain.grid.level:
        raise InputError("function and domain live on different grid levels")
    x, y = u.grid.centers()
    d2 = (x - domain.john_center[0]) ** 2 + (y - domain.john_center[1]) ** 2
    sel = d2 < domain.ref_radius**2
    if not sel.any():
        raise ResolutionError(
            f"reference ball of radius {domain.ref_radius} contains no cell center "
            f"at level {domain.grid.level}"
        )
    return float(u.values[sel].mean())


def representation_ratio(u: GridFunction, domain: Domain) -> float:
    """Empirical constant of the pointwise bound ``|u - u_B| <= c * I1(|grad u|)``.

    Returns the max over domain cells of ``|u(x) - u_B|`` divided by the
    Riesz potential of the gradient magnitude (zero-extended off the domain).
    Constant inputs give exactly 0; a vanishing potential against a genuine
    deviation reports ``inf`` to flag the degenerate input.
    """
    if u.gradmag is None:
        raise InputError("representation ratio needs a function with a gradient magnitude")
    if u.grid.level != domain.grid.level:
        raise InputError("function and domain live on different grid levels")
    ub = reference_average(u, domain)
    dom = domain.mask.bits
    num = np.abs(u.values - ub)
    tol = 1e-12 * (1.0 + float(np.abs(u.values[dom]).max()))
    active = dom & (num > tol)
    if not active.any():
        return 0.0
    pot = np.maximum(riesz_potential(GridFunction(u.grid, u.gradmag), domain.mask).values, 0.0)
    if np.any(pot[active] == 0.0):
        return math.inf
    return float((num[active] / pot[active]).max())
