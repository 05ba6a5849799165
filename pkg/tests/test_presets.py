"""Analytic presets: values, gradients, families, and their validation."""

import math

import numpy as np
import pytest

from choq import (
    BumpPreset,
    DyadicGrid,
    DyadicMask,
    LinearPreset,
    ParameterError,
    PowerPreset,
    SingularityError,
    TrigPreset,
    compact_family,
    eval_preset,
    fd_gradmag,
    preset_label,
    report_family,
    sweep_family,
)


def test_linear_values_and_gradient():
    grid = DyadicGrid(4)
    f = eval_preset(LinearPreset(2.0, -1.0, 0.5), grid)
    x, y = grid.centers()
    assert np.allclose(f.values, 2.0 * x - 1.0 * y + 0.5)
    assert np.all(f.gradmag == math.hypot(2.0, 1.0))


def test_power_values_and_singularity():
    grid = DyadicGrid(4)
    f = eval_preset(PowerPreset(-0.4, origin=(0.0, 0.0)), grid)
    x, y = grid.centers()
    rho = np.hypot(x, y)
    assert np.allclose(f.values, rho**-0.4)
    assert np.allclose(f.gradmag, 0.4 * rho**-1.4)
    # origin (0.5, 0.5) sits on a cell corner at every level: never singular
    g = eval_preset(PowerPreset(-0.4), grid, DyadicMask.full(grid))
    assert np.all(np.isfinite(g.values))
    # placing the origin exactly on an occupied cell center is rejected
    h = grid.cell_width
    bad = PowerPreset(-0.4, origin=(h / 2, h / 2))
    with pytest.raises(SingularityError):
        eval_preset(bad, grid, DyadicMask.full(grid))
    # without a domain the same preset samples to inf at that cell
    inf_f = eval_preset(bad, grid)
    assert np.isinf(inf_f.values[0, 0])
    with pytest.raises(ParameterError):
        eval_preset(PowerPreset(0.0), grid)
    with pytest.raises(ParameterError):
        eval_preset(PowerPreset(-0.4, origin=(1.5, 0.5)), grid)


def test_bump_support_and_gradient():
    grid = DyadicGrid(6)
    preset = BumpPreset(center=(0.5, 0.5), radius=0.3)
    f = eval_preset(preset, grid)
    x, y = grid.centers()
    outside = np.hypot(x - 0.5, y - 0.5) >= 0.3
    assert np.all(f.values[outside] == 0.0)
    assert np.all(f.gradmag[outside] == 0.0)
    assert f.values.max() == pytest.approx(1.0, abs=0.01)
    with pytest.raises(ParameterError):
        eval_preset(BumpPreset(center=(0.5, 0.5), radius=0.0), grid)


def test_analytic_gradients_match_finite_differences():
    grid = DyadicGrid(8)
    domain = DyadicMask.full(grid)
    cases = [
        LinearPreset(1.0, 2.0, 0.3),
        BumpPreset(center=(0.5, 0.5), radius=0.35),
        TrigPreset(seed=4, modes=2),
    ]
    for preset in cases:
        f = eval_preset(preset, grid)
        fd = fd_gradmag(f, domain)
        interior = np.zeros_like(fd, dtype=bool)
        interior[2:-2, 2:-2] = True
        # compare where the gradient is not vanishing (relative error blows
        # up near smooth extrema where |grad| ~ 0)
        strong = interior & (f.gradmag > 0.2 * f.gradmag.max())
        rel = np.abs(fd[strong] - f.gradmag[strong]) / f.gradmag[strong]
        assert np.quantile(rel, 0.95) < 0.05, preset


def test_trig_determinism():
    grid = DyadicGrid(5)
    a = eval_preset(TrigPreset(seed=7, modes=3), grid)
    b = eval_preset(TrigPreset(seed=7, modes=3), grid)
    c = eval_preset(TrigPreset(seed=8, modes=3), grid)
    assert np.array_equal(a.values, b.values)
    assert not np.array_equal(a.values, c.values)
    with pytest.raises(ParameterError):
        eval_preset(TrigPreset(seed=7, modes=0), grid)


def test_domain_grid_mismatch():
    grid = DyadicGrid(4)
    with pytest.raises(ParameterError):
        eval_preset(LinearPreset(1, 1, 0), grid, DyadicMask.full(DyadicGrid(5)))


def test_families_are_deterministic():
    assert sweep_family(8) == sweep_family(8)
    assert report_family(8) == report_family(8)
    assert compact_family(8) == compact_family(8)
    assert sweep_family(8, seed=1) != sweep_family(8, seed=2)
    assert len(sweep_family(5)) == 5
    assert len(report_family(7)) == 7


def test_family_composition():
    fam = sweep_family(9)
    assert any(isinstance(p, BumpPreset) for p in fam)
    assert any(isinstance(p, TrigPreset) for p in fam)
    rep = report_family(8)
    assert any(isinstance(p, LinearPreset) for p in rep)
    comp = compact_family(6)
    assert all(isinstance(p, BumpPreset) for p in comp)
    # compact presets stay well inside the unit square
    for p in comp:
        assert math.hypot(p.center[0] - 0.5, p.center[1] - 0.5) <= 0.08 + 1e-12
        assert 0.1 <= p.radius <= 0.26


def test_labels():
    assert preset_label(LinearPreset(1.0, 2.0, 0.3)) == "linear(1,2,0.3)"
    assert preset_label(TrigPreset(seed=3, modes=2)) == "trig(seed=3,modes=2)"
    assert "bump" in preset_label(BumpPreset(center=(0.5, 0.5), radius=0.3))
    assert "power" in preset_label(PowerPreset(-0.5))
