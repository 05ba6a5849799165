"""Internal consistency battery behind ``choq selftest``.

Every check recomputes a quantity through an independent route (explicit
cover enumeration, direct summation, quadrature) and compares against the
production code path.  Output is one ``ok``/``FAIL`` line per check;
:func:`run` returns the failure count.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.integrate import quad

from .choquet import choquet_integral, distribution_function, power_integral
from .content import ContentParams, dyadic_content
from .grid import DyadicGrid, DyadicMask, GridFunction
from .operators import (
    MaximalParams,
    fractional_maximal,
    hedberg_bound,
    radial_tail_integral,
    riesz_direct,
    riesz_potential,
)
from .presets import TrigPreset, eval_preset


def _enumerated_content_level2(bits: np.ndarray, delta: float) -> float:
    """Level-2 content by explicit enumeration of every admissible cover.

    A cover either is the unit square alone or picks, per quarter, one of 17
    options: the quarter square itself, or any of the 16 subsets of its four
    cells (admissible when the subset contains the occupied cells).  All
    83522 combinations are materialized; no recursive reuse of the
    production code path.
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
    totals = (
        per_quarter[0][:, None, None, None]
        + per_quarter[1][None, :, None, None]
        + per_quarter[2][None, None, :, None]
        + per_quarter[3][None, None, None, :]
    )
    return min(1.0, float(totals.min()))


def _check_content_enumeration(fast: bool) -> list[str]:
    rng = np.random.default_rng(20240)
    grid = DyadicGrid(2)
    trials = 12 if fast else 48
    deltas = (0.5, 1.0, 1.5, 2.0)
    count = 0
    for _ in range(trials):
        bits = rng.random((4, 4)) < rng.uniform(0.15, 0.85)
        mask = DyadicMask(grid, bits)
        for delta in deltas:
            got = dyadic_content(mask, ContentParams(delta))
            want = _enumerated_content_level2(bits, delta)
            if got != want:
                return [f"mask {bits.astype(int).ravel()} delta {delta}: {got!r} != {want!r}"]
            count += 1
    return []


def _check_content_axioms(fast: bool) -> list[str]:
    rng = np.random.default_rng(77)
    grid = DyadicGrid(3)
    problems = []
    for delta in (0.7, 1.0, 1.6, 2.0):
        params = ContentParams(delta)
        if dyadic_content(DyadicMask.empty(grid), params) != 0.0:
            problems.append(f"empty mask has nonzero content at delta {delta}")
        if dyadic_content(DyadicMask.full(grid), params) != 1.0:
            problems.append(f"full square content is not 1 at delta {delta}")
        bits = np.zeros((grid.n, grid.n), dtype=bool)
        bits[2, 5] = True
        got = dyadic_content(DyadicMask(grid, bits), params)
        if not math.isclose(got, (0.5**grid.level) ** delta, rel_tol=1e-14):
            problems.append(f"single-cell content wrong at delta {delta}")
        for _ in range(4 if fast else 16):
            a = DyadicMask(grid, rng.random((8, 8)) < 0.4)
            b = DyadicMask(grid, rng.random((8, 8)) < 0.4)
            ca, cb = dyadic_content(a, params), dyadic_content(b, params)
            cu = dyadic_content(a.union(b), params)
            if cu + 1e-15 < max(ca, cb):
                problems.append(f"monotonicity fails at delta {delta}")
            if cu > ca + cb + 1e-15:
                problems.append(f"subadditivity fails at delta {delta}")
    return problems


def _check_choquet_routes(fast: bool) -> list[str]:
    problems = []
    grid1 = DyadicGrid(1)
    hand = GridFunction(grid1, np.array([[0.0, 1.0], [1.0, 2.0]]))
    got = choquet_integral(hand, ContentParams(1.0))
    if got != 1.5:
        problems.append(f"two-by-two hand value {got!r} != 1.5")
    grid = DyadicGrid(5 if fast else 6)
    f = eval_preset(TrigPreset(seed=3, modes=3), grid)
    for delta in (1.5, 2.0):
        params = ContentParams(delta)
        for p in (1.3, 2.0):
            power_integral(f, params, p)  # raises ConsistencyError on route split
        step = distribution_function(f, params)
        direct = choquet_integral(f, params)
        if not math.isclose(step.integral(), direct, rel_tol=1e-12, abs_tol=1e-300):
            problems.append(f"step-function integral mismatch at delta {delta}")
    return problems


def _check_riesz(fast: bool) -> list[str]:
    grid = DyadicGrid(4 if fast else 5)
    f = eval_preset(TrigPreset(seed=9, modes=2), grid)
    a = riesz_potential(f).values
    b = riesz_direct(f).values
    rel = float(np.max(np.abs(a - b)) / np.max(np.abs(b)))
    if rel > 1e-12:
        return [f"transform and direct summation disagree: rel {rel:.3e}"]
    return []


def _check_maximal(fast: bool) -> list[str]:
    problems = []
    grid = DyadicGrid(5 if fast else 6)
    f = eval_preset(TrigPreset(seed=5, modes=3), grid)
    m = fractional_maximal(f).values
    if not np.all(m >= np.abs(f.values)):
        problems.append("maximal function drops below |f|")
    doubled = fractional_maximal(GridFunction(grid, 2.0 * f.values)).values
    rel = float(np.max(np.abs(doubled - 2.0 * m)) / np.max(m))
    if rel > 1e-12:
        problems.append(f"homogeneity off by rel {rel:.3e}")
    smooth = fractional_maximal(f, params=MaximalParams(0.3)).values
    if not np.all(np.isfinite(smooth)):
        problems.append("smoothed maximal function not finite")
    return problems


def _check_radial_tail(fast: bool) -> list[str]:
    problems = []
    rng = np.random.default_rng(11)
    logged = False
    for _ in range(6 if fast else 20):
        r = float(rng.uniform(0.05, 2.0))
        s = float(rng.uniform(2.2, 6.0))
        closed = radial_tail_integral(r, s)
        numeric, _ = quad(lambda t: 2.0 * math.pi * t ** (1.0 - s), r, np.inf)
        if abs(closed - numeric) > 1e-8 * abs(numeric):
            problems.append(f"tail integral off at r={r:.4f}, s={s:.4f}")
        if not logged:
            plane_form = s - 2.0
            general_form = (2.0 - 1.0) * s - 2.0  # the (n-1)s - n denominator at n = 2
            print(
                "    radial-tail denominator forms at the plane: "
                f"s-2 = {plane_form!r}, (n-1)s-n = {general_form!r} (s = {s:.6f})"
            )
            if plane_form != general_form:
                problems.append("denominator forms disagree at n = 2")
            logged = True
    return problems


def _check_split_bound(fast: bool) -> list[str]:
    grid = DyadicGrid(5)
    f = eval_preset(TrigPreset(seed=2, modes=3), grid)
    problems = []
    for kappa in (0.0,) if fast else (0.0, 0.3):
        report = hedberg_bound(f, None, p=1.5, delta=2.0, kappa=kappa)
        if report.max_ratio > 1.05:
            problems.append(f"split bound ratio {report.max_ratio:.4f} > 1.05 at kappa {kappa}")
    return problems


CHECKS = [
    ("content-enumeration", _check_content_enumeration),
    ("content-axioms", _check_content_axioms),
    ("choquet-routes", _check_choquet_routes),
    ("riesz-direct", _check_riesz),
    ("maximal-properties", _check_maximal),
    ("radial-tail", _check_radial_tail),
    ("split-bound", _check_split_bound),
]


def run(fast: bool = False) -> int:
    """Run every check; print one line each; return the failure count."""
    failures = 0
    for name, check in CHECKS:
        problems = check(fast)
        if problems:
            failures += 1
            print(f"FAIL {name}: {problems[0]}")
        else:
            print(f"ok   {name}")
    print(f"selftest: {len(CHECKS) - failures}/{len(CHECKS)} checks passed")
    return failures
