"""Independent reference computations used to pin expected test values.

Nothing here imports the production DP, kernels, or FFT paths: contents come
from explicit cover enumeration, integrals from explicit loops or quadrature.
Where a check needs the production content function as a building block (the
layer-cake oracle), that dependency is stated in the docstring — the content
function itself is verified against the enumeration oracles below first.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.integrate import quad


# ---------------------------------------------------------------------------
# Dyadic content on the 4x4 grid (level 2) by explicit cover enumeration
# ---------------------------------------------------------------------------


def enumerated_content_level2(bits: np.ndarray, delta: float) -> float:
    """Minimum cover cost over every admissible dyadic cover, materialized.

    A cover of the 4x4 grid either is the unit square alone, or chooses per
    quarter one of 17 options: the quarter square, or any of the 16 subsets
    of its four cells (admissible when it contains the quarter's occupied
    cells).  All 1 + 17^4 = 83522 combinations are enumerated explicitly.
    """
    cell = 4.0 ** -delta
    quarter = 2.0 ** -delta
    per_quarter = []
    for qi in range(2):
        for qj in range(2):
            occupied = 0
            for a in range(2):
                for b in range(2):
                    if bits[2 * qi + a, 2 * qj + b]:
                        occupied |= 1 << (2 * a + b)
            costs = [quarter]
            for subset in range(16):
                if subset & occupied == occupied:
                    costs.append(subset.bit_count() * cell)
                else:
                    costs.append(math.inf)
            per_quarter.append(np.array(costs))
    # Quarter costs are accumulated in the library's documented child order
    # (0,0), (1,0), (0,1), (1,1) so exact float equality is well defined.
    totals = (
        per_quarter[0][:, None, None, None]
        + per_quarter[2][None, :, None, None]
        + per_quarter[1][None, None, :, None]
        + per_quarter[3][None, None, None, :]
    )
    return min(1.0, float(totals.min()))


def factored_content_level2_all(delta: float) -> np.ndarray:
    """Content of every 16-bit level-2 mask, indexed by the mask integer.

    Bit ``4*i + j`` of the index encodes cell ``(i, j)``.  The optimal cover
    decomposes over quarters: each quarter is covered either by the quarter
    square or by exactly its occupied cells (a strict superset only costs
    more), and the whole square caps the total at 1.  Cross-checked against
    :func:`enumerated_content_level2` on random masks in the test suite.
    """
    cell = 4.0 ** -delta
    quarter = 2.0 ** -delta
    nibble_cost = np.empty(16)
    for occ in range(16):
        nibble_cost[occ] = 0.0 if occ == 0 else min(quarter, occ.bit_count() * cell)
    masks = np.arange(65536)
    total = np.zeros(65536)
    # Same accumulation order as the library's child sums: (0,0), (1,0),
    # (0,1), (1,1) — float addition is not associative and equality is exact.
    for qj in range(2):
        for qi in range(2):
            occ = np.zeros(65536, dtype=np.int64)
            for a in range(2):
                for b in range(2):
                    bit = 4 * (2 * qi + a) + (2 * qj + b)
                    occ |= ((masks >> bit) & 1) << (2 * a + b)
            total += nibble_cost[occ]
    return np.minimum(total, np.where(masks > 0, 1.0, 0.0))


def mask_bits_from_int(mask_int: int) -> np.ndarray:
    bits = np.zeros((4, 4), dtype=bool)
    for i in range(4):
        for j in range(4):
            if mask_int >> (4 * i + j) & 1:
                bits[i, j] = True
    return bits


# ---------------------------------------------------------------------------
# Layer-cake integral from first principles
# ---------------------------------------------------------------------------


def layer_cake_integral(values: np.ndarray, content_of: "callable") -> float:
    """Finite layer-cake sum: sum over value groups of content x gap.

    ``values`` holds the nonnegative integrand per occupied cell alongside a
    parallel boolean stencil supplied through ``content_of``: the callable
    receives a boolean (n, n) array and returns the content of that cell
    set.  This routine owns the distribution-function logic only, so it
    stays independent of the production layer-cake code path.
    """
    flat = np.asarray(values, dtype=float)
    if flat.ndim != 2:
        raise ValueError("values must be an (n, n) array")
    order = np.unique(flat[flat > 0.0])[::-1]
    total = 0.0
    prev = None
    for v in order:
        if prev is not None:
            total += content_of(flat >= prev) * (prev - v)
        prev = v
    if prev is not None:
        total += content_of(flat >= prev) * prev
    return total


def dense_shift_scan(
    values: np.ndarray, q: float, content_of: "callable", points: int = 10_000
) -> tuple[float, float]:
    """Brute-force best-shift scan: dense uniform grid over [min, max]."""
    lo = float(values.min())
    hi = float(values.max())
    best_b, best_v = lo, math.inf
    for b in np.linspace(lo, hi, points):
        v = layer_cake_integral(np.abs(values - b) ** q, content_of)
        if v < best_v:
            best_b, best_v = float(b), v
    return best_b, best_v


# ---------------------------------------------------------------------------
# Operators by explicit summation
# ---------------------------------------------------------------------------

RIESZ_SELF = 4.0 * math.log(1.0 + math.sqrt(2.0))


def riesz_loop(values: np.ndarray, level: int, i: int, j: int) -> float:
    """Riesz potential at one cell by explicit double loop."""
    n = 1 << level
    h = 0.5**level
    total = 0.0
    for a in range(n):
        for b in range(n):
            v = values[a, b]
            if v == 0.0:
                continue
            if a == i and b == j:
                total += v * RIESZ_SELF * h
            else:
                total += v * h * h / (h * math.hypot(a - i, b - j))
    return total


def maximal_loop(values: np.ndarray, level: int, i: int, j: int, kappa: float) -> float:
    """Fractional maximal function at one cell by explicit loops.

    Radii are the dyadic lattice sqrt(2) * 2^(k - level - 1) for k = 0 ..
    level + 1; membership is the open ball over cell centers; the weight is
    r^(kappa - 2) * h^2 times the in-ball sum of |values|.
    """
    n = 1 << level
    h = 0.5**level
    best = 0.0
    for k in range(level + 2):
        r = math.sqrt(2.0) * 2.0 ** (k - level - 1)
        bound = 2.0 * 4.0 ** (k - 1)
        total = 0.0
        for a in range(n):
            for b in range(n):
                if (a - i) ** 2 + (b - j) ** 2 < bound:
                    total += abs(values[a, b])
        best = max(best, r ** (kappa - 2.0) * total * h * h)
    return best


def inside_ball_riesz_sum(
    values: np.ndarray, level: int, i: int, j: int, radius: float
) -> float:
    """Riesz summand restricted to the open ball of the given radius."""
    n = 1 << level
    h = 0.5**level
    total = 0.0
    for a in range(n):
        for b in range(n):
            v = abs(values[a, b])
            if v == 0.0:
                continue
            d = h * math.hypot(a - i, b - j)
            if d >= radius:
                continue
            if a == i and b == j:
                total += v * RIESZ_SELF * h
            else:
                total += v * h * h / d
    return total


# ---------------------------------------------------------------------------
# Quadrature helpers
# ---------------------------------------------------------------------------


def disk_average(fn: "callable", center: tuple[float, float], radius: float) -> float:
    """Mean of ``fn(x, y)`` over a disk via polar quadrature."""
    cx, cy = center

    def ring(r: float) -> float:
        val, _ = quad(
            lambda t: fn(cx + r * math.cos(t), cy + r * math.sin(t)), 0.0, 2.0 * math.pi
        )
        return val * r

    total, _ = quad(ring, 0.0, radius, limit=200)
    return total / (math.pi * radius**2)


def radial_tail_quadrature(r: float, s: float) -> float:
    """Plane integral of |z|^(-s) outside radius r by 1-D quadrature."""
    val, _ = quad(lambda t: 2.0 * math.pi * t ** (1.0 - s), r, np.inf)
    return val
