"""Hausdorff contents of cell masks via dyadic covers and greedy ball covers.

The dyadic content of a mask is the minimum of ``sum(side^delta)`` over all
covers of the mask by dyadic squares.  On a level-``L`` grid the minimum is
attained by a quadtree antichain and is computed exactly by the bottom-up
recursion

    cost(Q) = 0                                   if Q misses the mask,
    cost(Q) = min(side(Q)^delta, sum of children) otherwise,

because for ``delta <= 2`` splitting a cell into four half-cells never pays
(``4 * 2^-delta >= 1``), so covers never need squares below the cell level.
Children are always summed in the fixed order (2i,2j), (2i+1,2j), (2i,2j+1),
(2i+1,2j+1) so repeated runs are bit-identical.
"""

from __future__ import annotations

import heapq
import json
import math
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .errors import IncompleteCoverError, ParameterError
from .grid import DyadicMask


@dataclass(frozen=True)
class ContentParams:
    """Content dimension ``delta``, valid on the plane for ``0 < delta <= 2``."""

    delta: float

    def __post_init__(self) -> None:
        d = self.delta
        if not (isinstance(d, (int, float)) and math.isfinite(d) and 0 < d <= 2):
            raise ParameterError(f"delta must lie in (0, 2], got {d!r}")


def side_costs(level: int, delta: float) -> np.ndarray:
    """``side^delta`` for dyadic squares of levels ``0..level`` (side ``2^-l``)."""
    return np.array([2.0 ** (-l * delta) for l in range(level + 1)])


def _dp_levels(mask: DyadicMask, delta: float) -> list[np.ndarray]:
    """Bottom-up cover costs per level, ``out[l]`` of shape ``(2^l, 2^l)``."""
    level = mask.grid.level
    costs = side_costs(level, delta)
    c = np.where(mask.bits, costs[level], 0.0)
    out = [c]
    for l in range(level - 1, -1, -1):
        s = ((c[0::2, 0::2] + c[1::2, 0::2]) + c[0::2, 1::2]) + c[1::2, 1::2]
        c = np.minimum(costs[l], s)
        out.append(c)
    out.reverse()
    return out


def dyadic_content(mask: DyadicMask, params: ContentParams) -> float:
    """Exact minimal dyadic-cover cost ``sum(side^delta)`` of the mask."""
    if mask.is_empty:
        return 0.0
    return float(_dp_levels(mask, params.delta)[0][0, 0])


@dataclass(frozen=True)
class CoverSolution:
    """An optimal dyadic cover: total value plus the chosen squares.

    ``cubes`` holds ``(level, i, j)`` triples; the square at level ``l`` with
    index ``(i, j)`` is ``[i*2^-l, (i+1)*2^-l) x [j*2^-l, (j+1)*2^-l)``.
    """

    value: float
    cubes: tuple[tuple[int, int, int], ...]

    def to_json(self) -> dict:
        return {
            "value": self.value,
            "cubes": [{"level": l, "i": i, "j": j} for (l, i, j) in self.cubes],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)


def dyadic_optimal_cover(mask: DyadicMask, params: ContentParams) -> CoverSolution:
    """Reconstruct one optimal dyadic cover (ties prefer the coarser square)."""
    if mask.is_empty:
        return CoverSolution(0.0, ())
    level = mask.grid.level
    costs = side_costs(level, params.delta)
    dp = _dp_levels(mask, params.delta)
    cubes: list[tuple[int, int, int]] = []

    def descend(l: int, i: int, j: int) -> None:
        if dp[l][i, j] == 0.0:
            return
        if l == level:
            cubes.append((l, i, j))
            return
        child_sum = (
            (dp[l + 1][2 * i, 2 * j] + dp[l + 1][2 * i + 1, 2 * j])
            + dp[l + 1][2 * i, 2 * j + 1]
        ) + dp[l + 1][2 * i + 1, 2 * j + 1]
        if costs[l] <= child_sum:
            # ties resolve to the coarser square
            cubes.append((l, i, j))
            return
        descend(l + 1, 2 * i, 2 * j)
        descend(l + 1, 2 * i + 1, 2 * j)
        descend(l + 1, 2 * i, 2 * j + 1)
        descend(l + 1, 2 * i + 1, 2 * j + 1)

    descend(0, 0, 0)
    return CoverSolution(float(dp[0][0, 0]), tuple(cubes))


def lebesgue_area(mask: DyadicMask) -> float:
    """Area of the mask: cell count times cell area."""
    return mask.count * mask.grid.cell_area


# ---------------------------------------------------------------------------
# Greedy euclidean-ball cover upper bound
# ---------------------------------------------------------------------------


def _ball_kernels(level: int) -> list[tuple[float, np.ndarray, np.ndarray]]:
    """Per radius: (radius, di offsets, dj offsets) of covered cell centers.

    Radii are ``sqrt(2) * 2^(-l-1)`` for ``l = 0..level``; a cell is covered
    when its center is within the closed ball, decided by the exact integer
    test ``(di^2 + dj^2) * 4^(l+1) <= 2 * 4^level``.
    """
    kernels = []
    for l in range(level + 1):
        r = math.sqrt(2.0) * 2.0 ** (-l - 1)
        lim_num = 2 * 4**level
        lim_den = 4 ** (l + 1)
        w = int(math.isqrt(lim_num // lim_den)) + 1
        rng = np.arange(-w, w + 1)
        di, dj = np.meshgrid(rng, rng, indexing="ij")
        keep = (di**2 + dj**2) * lim_den <= lim_num
        kernels.append((r, di[keep].astype(np.int64), dj[keep].astype(np.int64)))
    return kernels


def ball_cover_upper(
    mask: DyadicMask, params: ContentParams, budget: int | None = None
) -> float:
    """Greedy upper bound on the ball-cover content ``sum(r^delta)``.

    Candidate balls sit at cell centers with radii ``sqrt(2)*2^(-l-1)``,
    ``0 <= l <= level``.  Lazy greedy: repeatedly place the ball maximizing
    (newly covered occupied cells) / ``r^delta`` until everything is covered.
    Raises :class:`IncompleteCoverError` (carrying the partial value) if the
    iteration budget runs out first.
    """
    if mask.is_empty:
        return 0.0
    level = mask.grid.level
    delta = params.delta
    if budget is None:
        budget = mask.grid.n**2
    if budget < 1:
        raise ParameterError(f"budget must be >= 1, got {budget}")
    n = mask.grid.n
    remaining = mask.bits.astype(np.int64)
    kernels = _ball_kernels(level)
    weights = [r**delta for r, _, _ in kernels]

    # Initial gains for every (radius, center): exact integer correlation.
    heap: list[tuple[float, int, int, int]] = []
    for l, (r, di, dj) in enumerate(kernels):
        w = int(di.max())
        foot = np.zeros((2 * w + 1, 2 * w + 1), dtype=np.int64)
        foot[di + w, dj + w] = 1
        counts = ndimage.correlate(remaining, foot, mode="constant", cval=0)
        score = counts / weights[l]
        for i, j in zip(*np.nonzero(counts)):
            heap.append((-score[i, j], l, int(i), int(j)))
    heapq.heapify(heap)

    total = 0.0
    uncovered = int(remaining.sum())
    picks = 0
    while uncovered > 0:
        if picks >= budget:
            raise IncompleteCoverError(
                f"budget {budget} exhausted with {uncovered} cells uncovered",
                partial_value=total,
                uncovered=uncovered,
            )
        neg_score, l, i, j = heapq.heappop(heap)
        _, di, dj = kernels[l]
        ii = i + di
        jj = j + dj
        keep = (ii >= 0) & (ii < n) & (jj >= 0) & (jj < n)
        ii = ii[keep]
        jj = jj[keep]
        gain = int(remaining[ii, jj].sum())
        if gain == 0:
            continue
        score = gain / weights[l]
        if heap and score < -heap[0][0]:
            # stale entry: its gain shrank below the best remaining bound
            heapq.heappush(heap, (-score, l, i, j))
            continue
        remaining[ii, jj] = 0
        uncovered -= gain
        total += weights[l]
        picks += 1
    return total
