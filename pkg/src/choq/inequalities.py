"""Ratio reports for content-based Poincaré/Sobolev-type inequalities.

Nothing here asserts a numeric constant: each report returns both sides of
an inequality and their quotient, and the sweep/scan drivers produce tables
whose resolution stability (or divergence) is the object of interest.  The
best additive shift is found by a dense scan plus golden-section refinement
because the shifted Choquet functional is not provably convex.
"""

from __future__ import annotations

import csv
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from ._kernels import level_offsets, shift_objective
from .choquet import choquet_integral, power_integral
from .content import ContentParams, side_costs
from .domains import Domain, PuncturedBallDomain, make_domain
from .errors import InputError, ParameterError, ViolationError
from .grid import DyadicGrid, GridFunction
from .operators import MaximalParams, fractional_maximal
from .presets import FunctionPreset, PowerPreset, eval_preset, preset_label

#: Uniform scan resolution for the shift search.
SHIFT_SCAN_POINTS = 256
#: Golden-section refinement iterations after the scan.
SHIFT_REFINE_STEPS = 40

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def worker_count() -> int:
    """Worker cap for sweeps, from the CHOQUET_THREADS env var (default 1)."""
    try:
        return max(1, int(os.environ.get("CHOQUET_THREADS", "1")))
    except ValueError:
        return 1


@dataclass(frozen=True)
class InequalityParams:
    """Exponents shared by the inequality reports.

    ``q`` is the left-hand exponent; when omitted it defaults to
    ``p*(delta - kappa*p)/(delta - p)`` where that formula applies.
    """

    p: float
    delta: float = 2.0
    kappa: float = 0.0
    q: float | None = None

    def __post_init__(self) -> None:
        if not (0.0 < self.delta <= 2.0 and np.isfinite(self.delta)):
            raise ParameterError(f"delta must lie in (0, 2], got {self.delta!r}")
        if not (0.0 <= self.kappa < 1.0 and np.isfinite(self.kappa)):
            raise ParameterError(f"kappa must lie in [0, 1), got {self.kappa!r}")
        if not (np.isfinite(self.p) and self.p > self.delta / 2.0):
            raise ParameterError(f"p must exceed delta/2, got p={self.p!r}, delta={self.delta!r}")
        if self.q is not None and not (np.isfinite(self.q) and self.q > 0.0):
            raise ParameterError(f"q must be positive, got {self.q!r}")

    def sobolev_q(self) -> float:
        """Left-hand exponent: explicit ``q`` or the default ``p(delta-kappa*p)/(delta-p)``."""
        if self.q is not None:
            return self.q
        if not self.p < self.delta:
            raise ParameterError("p must lie in (delta/2, delta)")
        return self.p * (self.delta - self.kappa * self.p) / (self.delta - self.p)


@dataclass(frozen=True)
class RatioReport:
    """One evaluated inequality: both sides, their quotient, and the context."""

    lhs: float
    rhs: float
    ratio: float
    b_star: float | None
    level: int
    params: InequalityParams
    preset: str = ""
    lhs_refavg: float | None = None

    def to_json(self) -> dict:
        out = {
            "level": self.level,
            "preset": self.preset,
            "p": self.params.p,
            "delta": self.params.delta,
            "kappa": self.params.kappa,
            "q": self.params.q,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "ratio": self.ratio,
            "b_star": self.b_star,
        }
        if self.lhs_refavg is not None:
            out["lhs_refavg"] = self.lhs_refavg
        return out


def _report(lhs, rhs, b_star, level, params, preset="", lhs_refavg=None) -> RatioReport:
    if rhs > 0.0:
        ratio = lhs / rhs
    elif lhs == 0.0:
        ratio = 0.0
    else:
        ratio = math.inf
    return RatioReport(float(lhs), float(rhs), float(ratio), b_star, level, params, preset, lhs_refavg)


class _ShiftObjective:
    """Reusable evaluator of ``b -> integral of |u - b|^q`` over a domain.

    Domain cells are sorted by value once; each evaluation streams them in
    descending ``|u - b|`` order from the two ends of the sorted array.
    """

    def __init__(self, u: GridFunction, q: float, domain: Domain, params: ContentParams):
        if not (q > 0.0 and np.isfinite(q)):
            raise ParameterError(f"shift exponent must be positive, got {q!r}")
        if u.grid.level != domain.grid.level:
            raise InputError("function and domain live on different grid levels")
        level = u.grid.level
        ci, cj = np.nonzero(domain.mask.bits)
        vals = u.values[ci, cj]
        if not np.all(np.isfinite(vals)):
            raise InputError("function values must be finite on the domain")
        order = np.argsort(vals, kind="stable")
        self.u_asc = vals[order]
        self.ci = ci[order].astype(np.int64)
        self.cj = cj[order].astype(np.int64)
        self.level = level
        self.costs = side_costs(level, params.delta)
        self.offs = level_offsets(level)
        self.q = q

    @property
    def empty(self) -> bool:
        return self.u_asc.size == 0

    def __call__(self, b: float) -> float:
        return float(
            shift_objective(self.level, self.costs, self.offs, self.u_asc, self.ci, self.cj, b, self.q)
        )


def best_shift(
    u: GridFunction, q: float, domain: Domain, params: ContentParams
) -> tuple[float, float]:
    """Minimize ``b -> integral of |u - b|^q dH`` over ``b`` in ``[min u, max u]``.

    Outside that interval the integrand only grows pointwise, so the window
    is exhaustive.  A 256-point scan brackets the minimum and golden-section
    steps refine it; the best evaluated point wins.
    """
    obj = _ShiftObjective(u, q, domain, params)
    if obj.empty:
        return 0.0, 0.0
    umin = float(obj.u_asc[0])
    umax = float(obj.u_asc[-1])
    if umin == umax:
        return umin, 0.0
    bs = np.linspace(umin, umax, SHIFT_SCAN_POINTS)
    vals = [obj(float(b)) for b in bs]
    k = int(np.argmin(vals))
    best_b, best_v = float(bs[k]), float(vals[k])
    lo = float(bs[max(k - 1, 0)])
    hi = float(bs[min(k + 1, SHIFT_SCAN_POINTS - 1)])
    x1 = hi - _GOLDEN * (hi - lo)
    x2 = lo + _GOLDEN * (hi - lo)
    f1, f2 = obj(x1), obj(x2)
    for _ in range(SHIFT_REFINE_STEPS):
        if f1 < best_v:
            best_b, best_v = x1, f1
        if f2 < best_v:
            best_b, best_v = x2, f2
        if f1 < f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - _GOLDEN * (hi - lo)
            f1 = obj(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + _GOLDEN * (hi - lo)
            f2 = obj(x2)
    return best_b, best_v


def _gradient_function(u: GridFunction) -> GridFunction:
    if u.gradmag is None:
        raise InputError("this report needs a function with a gradient magnitude")
    return GridFunction(u.grid, u.gradmag)


def poincare_report(u: GridFunction, domain: Domain, params: InequalityParams) -> RatioReport:
    """Best-shift integral of ``|u - b|^p`` against the gradient integral, both at dimension delta.

    Also evaluates the weaker reference-average variant (shift fixed at the
    reference-ball mean of ``u``) and records it as ``lhs_refavg``.
    """
    from .domains import reference_average

    cp = ContentParams(params.delta)
    grad = _gradient_function(u)
    b_star, lhs = best_shift(u, params.p, domain, cp)
    obj = _ShiftObjective(u, params.p, domain, cp)
    lhs_refavg = obj(reference_average(u, domain)) if not obj.empty else 0.0
    rhs = power_integral(grad, cp, params.p, domain.mask)
    if rhs == 0.0 and lhs > 0.0:
        raise ViolationError(
            "gradient integral vanishes while the shifted integral is positive"
        )
    return _report(lhs, rhs, b_star, u.grid.level, replace(params, q=params.p),
                   domain.label, lhs_refavg)


def sobolev_report(u: GridFunction, domain: Domain, params: InequalityParams) -> RatioReport:
    """Rooted inequality: shifted ``q``-integral at dimension delta-kappa*p vs gradient ``p``-norm."""
    if not (params.delta / 2.0 < params.p < params.delta):
        raise ParameterError("p must lie in (delta/2, delta)")
    if not params.kappa * params.p < params.delta:
        raise ParameterError("kappa*p must stay below delta")
    q = params.sobolev_q()
    dim = params.delta - params.kappa * params.p
    grad = _gradient_function(u)
    b_star, val = best_shift(u, q, domain, ContentParams(dim))
    lhs = val ** (1.0 / q)
    rhs_int = power_integral(grad, ContentParams(params.delta), params.p, domain.mask)
    rhs = rhs_int ** (1.0 / params.p)
    if rhs == 0.0 and lhs > 0.0:
        raise ViolationError(
            "gradient integral vanishes while the shifted integral is positive"
        )
    return _report(lhs, rhs, b_star, u.grid.level, replace(params, q=q), domain.label)


def _support_layer(domain: Domain) -> np.ndarray:
    """Domain cells within one cell width of the complement (8-neighborhood or grid edge)."""
    bits = domain.mask.bits
    n = bits.shape[0]
    interior = np.zeros_like(bits)
    inner = bits[1:-1, 1:-1].copy()
    for di in (-1, 0, 1):
        for dj in (-1, 0, 1):
            inner &= bits[1 + di : n - 1 + di, 1 + dj : n - 1 + dj]
    interior[1:-1, 1:-1] = inner
    return bits & ~interior


def _check_compact_support(u: GridFunction, domain: Domain) -> None:
    layer = _support_layer(domain)
    bad = layer & (u.values != 0.0)
    if bad.any():
        cells = list(zip(*np.nonzero(bad)))
        head = ", ".join(f"({int(i)}, {int(j)})" for i, j in cells[:8])
        more = "" if len(cells) <= 8 else f" and {len(cells) - 8} more"
        raise InputError(
            f"function must vanish within one cell of the domain boundary; "
            f"nonzero at {head}{more}"
        )


def zero_boundary_report(
    u: GridFunction, domain: Domain, params: InequalityParams, variant: str = "a"
) -> RatioReport:
    """Compactly-supported inequalities with no shift freedom.

    Variant ``a``: ``integral of |u|^p dH^delta`` against ``diam^p`` times the
    gradient integral at the same dimension.  Variant ``b``: the rooted pair of
    :func:`sobolev_report` with the shift pinned at 0.
    """
    _check_compact_support(u, domain)
    grad = _gradient_function(u)
    level = u.grid.level
    if variant == "a":
        cp = ContentParams(params.delta)
        lhs = power_integral(u, cp, params.p, domain.mask)
        rhs = domain.diameter() ** params.p * power_integral(grad, cp, params.p, domain.mask)
        return _report(lhs, rhs, None, level, replace(params, q=params.p), domain.label)
    if variant == "b":
        if not (params.delta / 2.0 < params.p < params.delta):
            raise ParameterError("p must lie in (delta/2, delta)")
        if not params.kappa * params.p < params.delta:
            raise ParameterError("kappa*p must stay below delta")
        q = params.sobolev_q()
        dim = params.delta - params.kappa * params.p
        lhs = power_integral(u, ContentParams(dim), q, domain.mask) ** (1.0 / q)
        rhs = power_integral(grad, ContentParams(params.delta), params.p, domain.mask) ** (
            1.0 / params.p
        )
        return _report(lhs, rhs, 0.0, level, replace(params, q=q), domain.label)
    raise ParameterError(f"variant must be 'a' or 'b', got {variant!r}")


def adams_report(u: GridFunction, domain: Domain) -> RatioReport:
    """Length-scale content integral of ``|u|`` against the plain gradient area sum."""
    _check_compact_support(u, domain)
    grad = _gradient_function(u)
    lhs = choquet_integral(u, ContentParams(1.0), domain.mask)
    rhs = float(grad.values[domain.mask.bits].sum() * u.grid.cell_area)
    params = InequalityParams(p=1.0, delta=1.0, kappa=0.0, q=1.0)
    return _report(lhs, rhs, None, u.grid.level, params, domain.label)


def maximal_sweep(
    family: list[FunctionPreset], params: InequalityParams, levels: range
) -> list[RatioReport]:
    """Ratio of maximal-function to plain content integrals per (level, preset).

    The ratio ``integral of (M f)^p dH^(delta-kappa*p) / integral of |f|^p
    dH^delta`` is evaluated on the full square for every family member at
    every level, in deterministic (level, preset index) order; tasks run on
    up to ``CHOQUET_THREADS`` workers.
    """
    if not family:
        raise ParameterError("sweep family must be non-empty")
    if params.kappa > 0.0 and not params.p < params.delta / params.kappa:
        raise ParameterError("p must stay below delta/kappa")
    dim = params.delta - params.kappa * params.p
    mp = MaximalParams(params.kappa)
    cp_num = ContentParams(dim)
    cp_den = ContentParams(params.delta)

    def one(task: tuple[int, int]) -> RatioReport:
        level, idx = task
        grid = DyadicGrid(level)
        f = eval_preset(family[idx], grid)
        m = fractional_maximal(f, params=mp)
        num = power_integral(m, cp_num, params.p)
        den = power_integral(f, cp_den, params.p)
        return _report(num, den, None, level, replace(params, q=params.p),
                       preset_label(family[idx]))

    tasks = [(level, idx) for level in levels for idx in range(len(family))]
    with ThreadPoolExecutor(max_workers=worker_count()) as pool:
        return list(pool.map(one, tasks))


def sharpness_scan(
    q: float,
    mu: float,
    params: InequalityParams,
    levels: range,
    radius: float = 0.45,
) -> list[RatioReport]:
    """Resolution scan of the rooted inequality for the radial power function.

    The domain is a punctured ball; the function is ``|x - center|^mu`` whose
    singularity sits exactly at the removed cell's corner.  The left side is
    the best-shift ``q``-integral at dimension ``delta - kappa*p``; the right
    side is the gradient ``p``-norm at dimension ``delta``.  Divergence of
    the left side with the level (against a stable right side) exhibits
    failure above the critical exponent; stability below it.
    """
    if not (q > 0.0 and np.isfinite(q)):
        raise ParameterError(f"q must be positive, got {q!r}")
    if not (1.0 - params.delta / params.p < mu < 0.0):
        raise ParameterError("mu must lie in (1 - delta/p, 0)")
    if not params.kappa * params.p < params.delta:
        raise ParameterError("kappa*p must stay below delta")
    dim = params.delta - params.kappa * params.p
    preset = PowerPreset(mu)
    label = preset_label(preset)

    def one(level: int) -> RatioReport:
        grid = DyadicGrid(level)
        domain = make_domain(PuncturedBallDomain(radius), grid)
        v = eval_preset(preset, grid, domain.mask)
        b_star, lhs = best_shift(v, q, domain, ContentParams(dim))
        grad = _gradient_function(v)
        rhs = power_integral(grad, ContentParams(params.delta), params.p, domain.mask) ** (
            1.0 / params.p
        )
        return _report(lhs, rhs, b_star, level, replace(params, q=q), label)

    with ThreadPoolExecutor(max_workers=worker_count()) as pool:
        return list(pool.map(one, list(levels)))


def max_ratio_by_level(reports: list[RatioReport]) -> dict[int, float]:
    out: dict[int, float] = {}
    for r in reports:
        out[r.level] = max(out.get(r.level, 0.0), r.ratio)
    return out


REPORT_COLUMNS = ["level", "preset", "p", "delta", "kappa", "q", "lhs", "rhs", "ratio", "b_star"]


def write_reports_csv(reports: list[RatioReport], path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(REPORT_COLUMNS)
        for r in reports:
            w.writerow(
                [
                    r.level,
                    r.preset,
                    repr(float(r.params.p)),
                    repr(float(r.params.delta)),
                    repr(float(r.params.kappa)),
                    repr(float(r.params.q)) if r.params.q is not None else "",
                    repr(float(r.lhs)),
                    repr(float(r.rhs)),
                    repr(float(r.ratio)),
                    repr(float(r.b_star)) if r.b_star is not None else "",
                ]
            )


def write_reports_json(reports: list[RatioReport], path) -> None:
    with open(path, "w") as fh:
        json.dump([r.to_json() for r in reports], fh, indent=2, sort_keys=True)
        fh.write("\n")
