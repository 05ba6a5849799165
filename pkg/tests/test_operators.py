"""Maximal operator, Riesz potential, split bound, radial tails."""

import math

import numpy as np
import pytest

from choq import (
    Ball,
    DyadicGrid,
    DyadicMask,
    GridFunction,
    MaximalParams,
    ParameterError,
    RIESZ_SELF_FACTOR,
    TrigPreset,
    eval_preset,
    fractional_maximal,
    hedberg_bound,
    maximal_at,
    radial_tail_integral,
    rasterize_shape,
    riesz_ball_sum,
    riesz_direct,
    riesz_potential,
    split_inside_constant,
)

from oracles import (
    RIESZ_SELF,
    inside_ball_riesz_sum,
    maximal_loop,
    radial_tail_quadrature,
    riesz_loop,
)


# --------------------------------------------------------------------- riesz


def test_self_cell_factor_matches_closed_form():
    # polar integral of 1/|z| over the unit cell, 8 * integral over one
    # half-octant triangle = 4 ln(1 + sqrt 2)
    assert RIESZ_SELF_FACTOR == pytest.approx(RIESZ_SELF, rel=1e-15)


def test_riesz_against_loop_oracle():
    rng = np.random.default_rng(21)
    grid = DyadicGrid(4)
    f = GridFunction(grid, rng.random((16, 16)))
    pot = riesz_potential(f)
    for i, j in [(0, 0), (7, 9), (15, 15), (3, 12)]:
        want = riesz_loop(f.values, 4, i, j)
        assert pot.values[i, j] == pytest.approx(want, rel=1e-12)


def test_riesz_fft_matches_direct():
    rng = np.random.default_rng(22)
    grid = DyadicGrid(5)
    f = GridFunction(grid, rng.standard_normal((32, 32)))
    fft = riesz_potential(f).values
    direct = riesz_direct(f).values
    assert np.max(np.abs(fft - direct)) <= 1e-12 * np.max(np.abs(direct))


def test_riesz_linearity():
    rng = np.random.default_rng(23)
    grid = DyadicGrid(5)
    a = GridFunction(grid, rng.random((32, 32)))
    b = GridFunction(grid, rng.random((32, 32)))
    combo = riesz_potential(GridFunction(grid, 2.0 * a.values - 3.0 * b.values)).values
    parts = 2.0 * riesz_potential(a).values - 3.0 * riesz_potential(b).values
    assert np.allclose(combo, parts, rtol=1e-12, atol=1e-12)


def test_riesz_of_disk_indicator():
    # potential of the unit-density disk at its center is 2*pi*R
    grid = DyadicGrid(8)
    radius = 0.25
    mask = rasterize_shape(grid, Ball((0.5, 0.5), radius))
    f = GridFunction(grid, mask.bits.astype(float))
    pot = riesz_potential(f)
    center = pot.values[grid.n // 2, grid.n // 2]
    assert center == pytest.approx(2.0 * math.pi * radius, rel=0.02)


def test_riesz_domain_mask_zeroes_outside():
    rng = np.random.default_rng(24)
    grid = DyadicGrid(4)
    f = GridFunction(grid, 1.0 + rng.random((16, 16)))
    domain = rasterize_shape(grid, Ball((0.5, 0.5), 0.3))
    masked = riesz_potential(f, domain).values
    manual = riesz_potential(
        GridFunction(grid, np.where(domain.bits, f.values, 0.0))
    ).values
    assert np.array_equal(masked, manual)


def test_riesz_ball_sum_oracle():
    rng = np.random.default_rng(25)
    grid = DyadicGrid(4)
    f = GridFunction(grid, rng.random((16, 16)))
    for i, j, k in [(8, 8, 0), (8, 8, 2), (3, 13, 4), (0, 0, 5)]:
        got = riesz_ball_sum(f, i, j, k)
        radius = math.sqrt(2.0) * 2.0 ** (k - 5)
        want = inside_ball_riesz_sum(f.values, 4, i, j, radius)
        assert got == pytest.approx(want, rel=1e-12)
    with pytest.raises(ParameterError):
        riesz_ball_sum(f, 0, 0, 6)


# ------------------------------------------------------------------- maximal


def test_maximal_params_window():
    for bad in (-0.1, 1.0, 1.5, float("nan")):
        with pytest.raises(ParameterError):
            MaximalParams(bad)
    assert MaximalParams(0.0).kappa == 0.0


def test_radius_lattice():
    radii = MaximalParams().radii(3)
    assert radii[0] == pytest.approx(math.sqrt(2.0) / 16)
    assert radii[-1] == pytest.approx(math.sqrt(2.0))
    assert np.allclose(radii[1:] / radii[:-1], 2.0)


def test_maximal_against_loop_oracle():
    rng = np.random.default_rng(26)
    grid = DyadicGrid(4)
    f = GridFunction(grid, rng.random((16, 16)))
    for kappa in (0.0, 0.3, 0.5):
        m = fractional_maximal(f, params=MaximalParams(kappa)).values
        for i, j in [(0, 0), (5, 11), (15, 8), (9, 9)]:
            want = maximal_loop(f.values, 4, i, j, kappa)
            assert m[i, j] == pytest.approx(want, rel=1e-12)
            assert maximal_at(f, i, j, params=MaximalParams(kappa)) == pytest.approx(
                want, rel=1e-12
            )


def test_maximal_dominates_function():
    rng = np.random.default_rng(27)
    grid = DyadicGrid(5)
    f = GridFunction(grid, rng.standard_normal((32, 32)))
    m = fractional_maximal(f).values
    assert np.all(m >= np.abs(f.values) - 1e-15)


def test_maximal_homogeneity():
    rng = np.random.default_rng(28)
    grid = DyadicGrid(5)
    f = GridFunction(grid, rng.random((32, 32)))
    params = MaximalParams(0.4)
    base = fractional_maximal(f, params=params).values
    scaled = fractional_maximal(GridFunction(grid, 2.5 * f.values), params=params).values
    assert np.allclose(scaled, 2.5 * base, rtol=1e-12)


def test_maximal_single_cell_decay():
    # one unit cell: by radius r the sum is the single value, so the max
    # over the lattice is attained at the smallest radius when kappa < 2
    grid = DyadicGrid(4)
    vals = np.zeros((16, 16))
    vals[7, 7] = 1.0
    f = GridFunction(grid, vals)
    params = MaximalParams(0.5)
    r0 = math.sqrt(2.0) * 2.0**-5
    at_center = fractional_maximal(f, params=params).values[7, 7]
    assert at_center == pytest.approx(2.0 * r0**0.5, rel=1e-12)


# --------------------------------------------------------------- split bound


def test_split_inside_constant_values():
    assert split_inside_constant(0.0) == 4.0
    assert split_inside_constant(0.5) == pytest.approx(9.65685424949238, rel=1e-12)
    with pytest.raises(ParameterError):
        split_inside_constant(1.0)


def test_inside_ball_bound_spot_checks():
    # inside-ball Riesz sum <= geometric constant * r^(1-kappa) * M(x)
    rng = np.random.default_rng(29)
    grid = DyadicGrid(6)
    f = GridFunction(grid, rng.random((64, 64)))
    for kappa in (0.0, 0.3, 0.7):
        c_in = split_inside_constant(kappa)
        m = fractional_maximal(f, params=MaximalParams(kappa)).values
        radii = MaximalParams(kappa).radii(6)
        for _ in range(20):
            i = int(rng.integers(0, 64))
            j = int(rng.integers(0, 64))
            k = int(rng.integers(0, len(radii)))
            inside = riesz_ball_sum(f, i, j, k)
            bound = c_in * radii[k] ** (1.0 - kappa) * m[i, j]
            assert inside <= bound * (1.0 + 1e-12)


def test_hedberg_window_and_degenerate():
    grid = DyadicGrid(4)
    zero = GridFunction(grid, np.zeros((16, 16)))
    with pytest.raises(ParameterError, match=r"p must lie in \(delta/2, delta\)"):
        hedberg_bound(zero, None, p=2.5, delta=2.0)
    rep = hedberg_bound(zero, None, p=1.5, delta=2.0)
    assert rep.max_ratio == 0.0
    assert not rep.lhs.any() and not rep.rhs.any() and not rep.r_star.any()


def test_hedberg_bound_holds_on_trig():
    grid = DyadicGrid(5)
    f = eval_preset(TrigPreset(seed=9, modes=3), grid)
    for kappa in (0.0, 0.3):
        rep = hedberg_bound(f, None, p=1.4, delta=2.0, kappa=kappa)
        assert rep.level == 5
        assert rep.inside_constant == pytest.approx(split_inside_constant(kappa))
        assert rep.max_ratio <= 1.05
        assert np.all(rep.rhs[np.abs(f.values) > 0] > 0.0)


def test_hedberg_family_is_stable_across_levels():
    ratios = []
    for level in (6, 7):
        f = eval_preset(TrigPreset(seed=5, modes=2), DyadicGrid(level))
        ratios.append(hedberg_bound(f, None, p=1.4, delta=2.0, kappa=0.3).max_ratio)
    assert abs(ratios[1] - ratios[0]) <= 0.10 * ratios[0]


def test_split_report_csv(tmp_path):
    grid = DyadicGrid(2)
    f = GridFunction(grid, np.arange(16, dtype=float).reshape(4, 4) / 16.0)
    rep = hedberg_bound(f, None, p=1.2, delta=1.6)
    out = tmp_path / "split.csv"
    rep.write_csv(out)
    lines = out.read_text().splitlines()
    assert lines[0] == "i,j,lhs,rhs,ratio,r_star"
    assert len(lines) == 1 + 16


# -------------------------------------------------------------- radial tails


def test_radial_tail_closed_form():
    assert radial_tail_integral(1.0, 3.0) == pytest.approx(2.0 * math.pi, rel=1e-15)
    assert radial_tail_integral(2.0, 4.0) == pytest.approx(math.pi / 4.0, rel=1e-15)


def test_radial_tail_against_quadrature():
    rng = np.random.default_rng(30)
    for _ in range(25):
        r = float(rng.uniform(0.05, 4.0))
        s = float(rng.uniform(2.2, 6.0))
        assert radial_tail_integral(r, s) == pytest.approx(
            radial_tail_quadrature(r, s), rel=1e-8
        )


def test_radial_tail_windows():
    with pytest.raises(ParameterError):
        radial_tail_integral(0.0, 3.0)
    with pytest.raises(ParameterError):
        radial_tail_integral(1.0, 2.0)
    with pytest.raises(ParameterError):
        radial_tail_integral(float("inf"), 3.0)
