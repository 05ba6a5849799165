"""Closed-form function presets sampled onto dyadic grids.

Every preset comes with an analytic gradient magnitude so inequality
harnesses never have to differentiate numerically.  Evaluation is pure and
deterministic: identical preset + grid always produce bit-identical arrays.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError, SingularityError
from .grid import DyadicGrid, DyadicMask, GridFunction


@dataclass(frozen=True)
class PowerPreset:
    """Radial power ``|x - origin|^mu`` (``mu != 0``; singular at the origin).

    The origin defaults to the center of the unit square; it deliberately
    never coincides with a cell center (centers sit at odd multiples of
    ``h/2``), so sampled values stay finite while still blowing up under
    refinement for ``mu < 0``.  Pair with a punctured domain.
    """

    mu: float
    origin: tuple[float, float] = (0.5, 0.5)


@dataclass(frozen=True)
class BumpPreset:
    """Smooth bump ``exp(1 - 1/(1 - s^2))``, ``s = |x - center|/radius``, 0 outside."""

    center: tuple[float, float]
    radius: float


@dataclass(frozen=True)
class LinearPreset:
    """Affine function ``a*x + b*y + c``."""

    a: float
    b: float
    c: float


@dataclass(frozen=True)
class TrigPreset:
    """Seeded random trigonometric polynomial with ``modes`` low-frequency terms."""

    seed: int
    modes: int


FunctionPreset = PowerPreset | BumpPreset | LinearPreset | TrigPreset


def preset_label(preset: FunctionPreset) -> str:
    """Short deterministic label used in report tables."""
    if isinstance(preset, PowerPreset):
        return f"power(mu={preset.mu:g})"
    if isinstance(preset, BumpPreset):
        cx, cy = preset.center
        return f"bump({cx:g},{cy:g},r={preset.radius:g})"
    if isinstance(preset, LinearPreset):
        return f"linear({preset.a:g},{preset.b:g},{preset.c:g})"
    if isinstance(preset, TrigPreset):
        return f"trig(seed={preset.seed},modes={preset.modes})"
    raise ParameterError(f"unknown preset {preset!r}")


def _trig_terms(preset: TrigPreset):
    rng = np.random.default_rng(preset.seed)
    m = preset.modes
    kx = rng.integers(1, m + 1, size=m)
    ky = rng.integers(0, m + 1, size=m)
    amp = rng.uniform(-1.0, 1.0, size=m) / np.arange(1.0, m + 1.0)
    phase = rng.uniform(0.0, 2.0 * np.pi, size=m)
    return kx, ky, amp, phase


def eval_preset(
    preset: FunctionPreset, grid: DyadicGrid, domain: DyadicMask | None = None
) -> GridFunction:
    """Sample a preset (and its |gradient|) at every cell center of the grid.

    The optional domain is used only for validation: a power preset whose
    origin lands exactly on a domain cell center is rejected.  Values are
    produced for the whole grid; callers restrict to their domain.
    """
    if domain is not None and domain.grid != grid:
        raise ParameterError("domain mask lives on a different grid")
    x, y = grid.centers()

    if isinstance(preset, LinearPreset):
        values = preset.a * x + preset.b * y + preset.c * np.ones_like(x * y)
        values = np.broadcast_to(values, (grid.n, grid.n)).copy()
        gradmag = np.full((grid.n, grid.n), math.hypot(preset.a, preset.b))
        return GridFunction(grid, values, gradmag)

    if isinstance(preset, PowerPreset):
        if preset.mu == 0:
            raise ParameterError("power preset requires mu != 0")
        ox, oy = preset.origin
        if not (0 <= ox < 1 and 0 <= oy < 1):
            raise ParameterError(f"power origin ({ox}, {oy}) outside the unit square")
        rho = np.hypot(x - ox, y - oy)
        at_origin = rho == 0.0
        if domain is not None and np.any(at_origin & domain.bits):
            raise SingularityError(
                "power preset origin coincides with a domain cell center"
            )
        with np.errstate(divide="ignore"):
            values = rho**preset.mu
            gradmag = abs(preset.mu) * rho ** (preset.mu - 1.0)
        return GridFunction(grid, values, gradmag)

    if isinstance(preset, BumpPreset):
        if preset.radius <= 0:
            raise ParameterError(f"bump radius must be > 0, got {preset.radius}")
        cx, cy = preset.center
        s = np.hypot(x - cx, y - cy) / preset.radius
        core = s < 1.0
        t = np.where(core, 1.0 - s**2, 1.0)
        values = np.where(core, np.exp(1.0 - 1.0 / t), 0.0)
        gradmag = np.where(core, values * (2.0 * s / t**2) / preset.radius, 0.0)
        return GridFunction(grid, values, gradmag)

    if isinstance(preset, TrigPreset):
        if preset.modes < 1:
            raise ParameterError("trig preset needs modes >= 1")
        kx, ky, amp, phase = _trig_terms(preset)
        values = np.zeros((grid.n, grid.n))
        ux = np.zeros((grid.n, grid.n))
        uy = np.zeros((grid.n, grid.n))
        two_pi = 2.0 * np.pi
        for m in range(preset.modes):
            arg = two_pi * (kx[m] * x + ky[m] * y) + phase[m]
            values += amp[m] * np.sin(arg)
            ux += amp[m] * two_pi * kx[m] * np.cos(arg)
            uy += amp[m] * two_pi * ky[m] * np.cos(arg)
        return GridFunction(grid, values, np.hypot(ux, uy))

    raise ParameterError(f"unknown preset {preset!r}")


# ---------------------------------------------------------------------------
# Deterministic preset families for sweeps and report batteries
# ---------------------------------------------------------------------------


def sweep_family(size: int, seed: int = 0) -> list[FunctionPreset]:
    """Mixed trig/bump family used by maximal-operator sweeps."""
    if size < 1:
        raise ParameterError("family size must be >= 1")
    rng = np.random.default_rng(seed)
    family: list[FunctionPreset] = []
    for k in range(size):
        if k % 3 == 2:
            cx, cy = rng.uniform(0.3, 0.7, size=2)
            r = rng.uniform(0.08, 0.25)
            family.append(BumpPreset((float(cx), float(cy)), float(r)))
        else:
            family.append(TrigPreset(seed=int(rng.integers(0, 2**31)), modes=2 + k % 4))
    return family


def report_family(size: int, seed: int = 0) -> list[FunctionPreset]:
    """Smooth C^1 family (trig, bump, affine) for inequality reports."""
    if size < 1:
        raise ParameterError("family size must be >= 1")
    rng = np.random.default_rng(seed)
    family: list[FunctionPreset] = []
    for k in range(size):
        pick = k % 4
        if pick == 3:
            a, b = rng.uniform(-2.0, 2.0, size=2)
            c = rng.uniform(-1.0, 1.0)
            family.append(LinearPreset(float(a), float(b), float(c)))
        elif pick == 2:
            cx, cy = rng.uniform(0.35, 0.65, size=2)
            r = rng.uniform(0.1, 0.3)
            family.append(BumpPreset((float(cx), float(cy)), float(r)))
        else:
            family.append(TrigPreset(seed=int(rng.integers(0, 2**31)), modes=1 + k % 4))
    return family


def compact_family(
    size: int,
    seed: int = 0,
    center: tuple[float, float] = (0.5, 0.5),
    max_offset: float = 0.08,
    radius_range: tuple[float, float] = (0.1, 0.26),
) -> list[BumpPreset]:
    """Bumps whose support stays well inside a centered domain.

    Support is contained in the disk of radius ``max_offset + radius_range[1]``
    around ``center``, so these vanish near any domain boundary that leaves a
    wider margin than that.
    """
    if size < 1:
        raise ParameterError("family size must be >= 1")
    rng = np.random.default_rng(seed)
    family = []
    for _ in range(size):
        ang = rng.uniform(0.0, 2.0 * np.pi)
        off = rng.uniform(0.0, max_offset)
        r = rng.uniform(*radius_range)
        cx = center[0] + off * math.cos(ang)
        cy = center[1] + off * math.sin(ang)
        family.append(BumpPreset((float(cx), float(cy)), float(r)))
    return family
