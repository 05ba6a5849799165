"""Fractional maximal operator, Riesz potential, and the pointwise split bound.

All operators treat the input as extended by zero outside the given domain
mask and evaluate at every cell center of the grid.  Radii live on a fixed
dyadic lattice so that results are reproducible and the geometric-series
constant of the split bound applies verbatim to the discrete sums.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np
from scipy.signal import fftconvolve

from .choquet import power_integral
from .content import ContentParams
from .errors import InputError, ParameterError
from .grid import GridFunction, DyadicMask

#: Integral of 1/|z| over one unit-width cell centered at the origin.
#: Scales linearly with the cell width.
RIESZ_SELF_FACTOR = 4.0 * math.log(1.0 + math.sqrt(2.0))


@dataclass(frozen=True)
class MaximalParams:
    """Exponent ``kappa`` of the fractional maximal operator, in ``[0, 1)``."""

    kappa: float = 0.0

    def __post_init__(self) -> None:
        if not (0.0 <= self.kappa < 1.0 and np.isfinite(self.kappa)):
            raise ParameterError(f"kappa must lie in [0, 1), got {self.kappa!r}")

    def radii(self, level: int) -> np.ndarray:
        """Dyadic radius lattice: sqrt(2)*2^(k-level-1) for k = 0 .. level+1.

        The smallest radius is the circumradius of one cell (its open ball
        contains exactly the centered cell), the largest is sqrt(2), the
        circumradius of the whole square.
        """
        return np.array(
            [math.sqrt(2.0) * 2.0 ** (k - level - 1) for k in range(level + 2)]
        )


def _zero_extended(f: GridFunction, domain: DyadicMask | None, absolute: bool) -> np.ndarray:
    if domain is not None and domain.grid.level != f.grid.level:
        raise InputError("domain mask and function live on different grid levels")
    g = np.abs(f.values) if absolute else f.values
    if domain is not None:
        g = np.where(domain.bits, g, 0.0)
    return g


def _ball_thresholds(level: int) -> list[float]:
    """Squared center-distance thresholds, in cell-width units, per radius index.

    Cell ``(di, dj)`` lies in the open ball of radius index ``k`` iff
    ``di^2 + dj^2 < 2*4^(k-1)``; for ``k = 0`` the threshold 0.5 admits only
    the centered cell.
    """
    return [2.0 * 4.0 ** (k - 1) for k in range(level + 2)]


def _disk_kernel(threshold: float, n: int) -> np.ndarray:
    m = min(int(math.isqrt(int(math.ceil(threshold)) - 1)), n - 1)
    d = np.arange(-m, m + 1)
    return ((d[:, None] ** 2 + d[None, :] ** 2) < threshold).astype(np.float64)


def fractional_maximal(
    f: GridFunction, domain: DyadicMask | None = None, params: MaximalParams = MaximalParams()
) -> GridFunction:
    """Max over the dyadic radius lattice of ``r^(kappa-2) * sum_{B(x,r)} |f| * 4^(-L)``.

    The smallest-radius term reduces to ``2 * r0^kappa * |f(x)|`` and is
    computed in that exact form, so the result always dominates ``|f|`` when
    ``kappa = 0``.  Larger radii use FFT convolution with exact integer disk
    membership; tiny negative FFT residues are clamped to zero.
    """
    level = f.grid.level
    g = _zero_extended(f, domain, absolute=True)
    radii = params.radii(level)
    thresholds = _ball_thresholds(level)
    area = f.grid.cell_area
    best = (2.0 * radii[0] ** params.kappa) * g
    for k in range(1, level + 2):
        kern = _disk_kernel(thresholds[k], f.grid.n)
        conv = np.maximum(fftconvolve(g, kern, mode="same"), 0.0)
        term = (radii[k] ** (params.kappa - 2.0) * area) * conv
        best = np.maximum(best, term)
    return GridFunction(f.grid, best)


def maximal_at(
    f: GridFunction,
    i: int,
    j: int,
    domain: DyadicMask | None = None,
    params: MaximalParams = MaximalParams(),
) -> float:
    """Direct-summation evaluation of the fractional maximal function at one cell."""
    level = f.grid.level
    g = _zero_extended(f, domain, absolute=True)
    n = f.grid.n
    ii, jj = np.ogrid[0:n, 0:n]
    d2 = (ii - i) ** 2 + (jj - j) ** 2
    radii = params.radii(level)
    area = f.grid.cell_area
    best = 0.0
    for k, threshold in enumerate(_ball_thresholds(level)):
        s = float(g[d2 < threshold].sum())
        best = max(best, radii[k] ** (params.kappa - 2.0) * s * area)
    return best


def _riesz_kernel(level: int) -> np.ndarray:
    """Offset kernel ``K[di, dj] = h / |(di, dj)|`` with the exact self-cell value."""
    n = 1 << level
    h = 2.0 ** (-level)
    d = np.arange(-(n - 1), n)
    d2 = (d[:, None] ** 2 + d[None, :] ** 2).astype(np.float64)
    with np.errstate(divide="ignore"):
        kern = h / np.sqrt(d2)
    kern[n - 1, n - 1] = RIESZ_SELF_FACTOR * h
    return kern


def riesz_potential(f: GridFunction, domain: DyadicMask | None = None) -> GridFunction:
    """Convolution with the kernel ``1/|x-y|``, cell-sampled, self-cell exact.

    Off-diagonal cells contribute ``f(y) * 4^(-L) / |c_x - c_y|``; the self
    cell contributes ``f(x)`` times the exact integral of ``1/|z|`` over one
    cell, ``4*ln(1+sqrt(2))*2^(-L)``.  Computed by FFT; matches the direct
    double sum to better than 1e-6 relative error.
    """
    g = _zero_extended(f, domain, absolute=False)
    out = fftconvolve(g, _riesz_kernel(f.grid.level), mode="same")
    return GridFunction(f.grid, np.ascontiguousarray(out))


def riesz_direct(f: GridFunction, domain: DyadicMask | None = None) -> GridFunction:
    """Direct double-summation oracle for :func:`riesz_potential` (slow)."""
    level = f.grid.level
    g = _zero_extended(f, domain, absolute=False)
    n = f.grid.n
    h = f.grid.cell_width
    ii, jj = np.ogrid[0:n, 0:n]
    out = np.empty((n, n))
    for i in range(n):
        for j in range(n):
            d2 = ((ii - i) ** 2 + (jj - j) ** 2).astype(np.float64)
            d2[i, j] = 1.0
            kern = h / np.sqrt(d2)
            kern[i, j] = RIESZ_SELF_FACTOR * h
            out[i, j] = float((g * kern).sum())
    return GridFunction(f.grid, out)


def riesz_ball_sum(
    f: GridFunction,
    i: int,
    j: int,
    radius_index: int,
    domain: DyadicMask | None = None,
) -> float:
    """Part of the Riesz sum restricted to the open lattice ball around cell ``(i, j)``.

    Sums ``|f(y)| * K(x - y) * 4^(-L)`` over cells whose center lies strictly
    within radius ``sqrt(2)*2^(radius_index - L - 1)`` of the center cell,
    including the exact self-cell term.
    """
    level = f.grid.level
    thresholds = _ball_thresholds(level)
    if not 0 <= radius_index < len(thresholds):
        raise ParameterError(f"radius index must lie in [0, {len(thresholds) - 1}]")
    g = _zero_extended(f, domain, absolute=True)
    n = f.grid.n
    h = f.grid.cell_width
    ii, jj = np.ogrid[0:n, 0:n]
    d2 = ((ii - i) ** 2 + (jj - j) ** 2).astype(np.float64)
    inside = d2 < thresholds[radius_index]
    inside[i, j] = False
    total = RIESZ_SELF_FACTOR * h * g[i, j]
    if inside.any():
        total += float((g[inside] * (h / np.sqrt(d2[inside]))).sum())
    return total


def split_inside_constant(kappa: float) -> float:
    """Geometric-series constant ``2^(kappa+1) / (1 - 2^(kappa-1))``.

    Bounds the inside-ball part of the Riesz sum by ``r^(1-kappa)`` times the
    fractional maximal function: dyadic annuli contribute a geometric series
    in ``2^(kappa-1)``.
    """
    if not 0.0 <= kappa < 1.0:
        raise ParameterError(f"kappa must lie in [0, 1), got {kappa!r}")
    return 2.0 ** (kappa + 1.0) / (1.0 - 2.0 ** (kappa - 1.0))


@dataclass(frozen=True, eq=False)
class SplitBoundReport:
    """Per-cell comparison of the Riesz potential against its split bound.

    ``lhs`` is the Riesz potential of ``|f|``; ``rhs`` interpolates the
    fractional maximal function and the content norm with the exponents
    produced by optimizing the split radius ``r_star``; ``ratio`` is their
    quotient (0 for identically zero input).
    """

    level: int
    p: float
    delta: float
    kappa: float
    inside_constant: float
    outside_constant: float
    lhs: np.ndarray
    rhs: np.ndarray
    ratio: np.ndarray
    r_star: np.ndarray

    @property
    def max_ratio(self) -> float:
        return float(self.ratio.max()) if self.ratio.size else 0.0

    def write_csv(self, path) -> None:
        n = self.lhs.shape[0]
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["i", "j", "lhs", "rhs", "ratio", "r_star"])
            for i in range(n):
                for j in range(n):
                    w.writerow(
                        [
                            i,
                            j,
                            repr(float(self.lhs[i, j])),
                            repr(float(self.rhs[i, j])),
                            repr(float(self.ratio[i, j])),
                            repr(float(self.r_star[i, j])),
                        ]
                    )


def hedberg_bound(
    f: GridFunction,
    domain: DyadicMask | None,
    p: float,
    delta: float,
    kappa: float = 0.0,
    outside_constant: float = 1.0,
) -> SplitBoundReport:
    """Pointwise bound of the Riesz potential via the optimal radius split.

    At each cell, the Riesz sum is split at ``r_star = (M(x)/||f||)^(-p/(delta
    - kappa*p))``: inside the ball it is controlled by the geometric-series
    constant times ``r^(1-kappa) * M(x)``, outside by the content norm.  Both
    parts then share the common value ``M(x)^((delta-p)/(delta-kappa*p)) *
    (integral of |f|^p)^((1-kappa)/(delta-kappa*p))``, reported here as
    ``rhs`` times the summed constants.  The outside constant is measured,
    not derived; callers pass their calibration (default 1).
    """
    params = ContentParams(delta)
    if not (delta / 2.0 < p < delta):
        raise ParameterError(f"p must lie in (delta/2, delta), got p={p!r}, delta={delta!r}")
    mp = MaximalParams(kappa)
    if not (outside_constant >= 0.0 and np.isfinite(outside_constant)):
        raise ParameterError(f"outside constant must be finite and >= 0, got {outside_constant!r}")
    norm_int = power_integral(f, params, p, domain)
    n = f.grid.n
    shape = (n, n)
    if norm_int == 0.0:
        z = np.zeros(shape)
        return SplitBoundReport(
            f.grid.level, p, delta, kappa, split_inside_constant(kappa),
            outside_constant, z, z.copy(), z.copy(), z.copy(),
        )
    m = fractional_maximal(f, domain, mp).values
    lhs = np.maximum(riesz_potential(GridFunction(f.grid, np.abs(f.values)), domain).values, 0.0)
    dkp = delta - kappa * p
    norm = norm_int ** (1.0 / p)
    r_star = (m / norm) ** (-p / dkp)
    const = split_inside_constant(kappa) + outside_constant
    rhs = const * m ** ((delta - p) / dkp) * norm_int ** ((1.0 - kappa) / dkp)
    ratio = lhs / rhs
    return SplitBoundReport(
        f.grid.level, p, delta, kappa, split_inside_constant(kappa),
        outside_constant, lhs, rhs, ratio, r_star,
    )


def radial_tail_integral(r: float, s: float) -> float:
    """Integral of ``|z|^(-s)`` over the plane outside radius ``r``: ``2*pi*r^(2-s)/(s-2)``."""
    if not (r > 0.0 and np.isfinite(r)):
        raise ParameterError(f"radius must be positive and finite, got {r!r}")
    if not (s > 2.0 and np.isfinite(s)):
        raise ParameterError(f"decay exponent must exceed 2, got {s!r}")
    return 2.0 * math.pi * r ** (2.0 - s) / (s - 2.0)
