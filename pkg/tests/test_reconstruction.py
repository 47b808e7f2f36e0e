"""Slope limiting, interface extrapolation, and the hydrostatic fix."""

import numpy as np
import pytest

from swmorph.grid import IH, IHU, IHV, IHC, IZB, NCOMP, build_grid
from swmorph.physics import PhysParams
from swmorph.reconstruction import (
    InterfacePair,
    aeno_slope,
    extrapolate,
    hydrostatic_correct,
    state_slopes,
)

PAR = PhysParams()


def _state(h, hu=0.0, hv=0.0, hc=0.0, zb=0.0):
    return np.array([[[h]], [[hu]], [[hv]], [[hc]], [[zb]]], dtype=float)


def _pair(left, right, eta_m=None, eta_p=None):
    wm = _state(*left)
    wp = _state(*right)
    if eta_m is None:
        eta_m = wm[IH] + wm[IZB]
    else:
        eta_m = np.full((1, 1), float(eta_m))
    if eta_p is None:
        eta_p = wp[IH] + wp[IZB]
    else:
        eta_p = np.full((1, 1), float(eta_p))
    return InterfacePair(wm=wm, wp=wp, eta_m=eta_m, eta_p=eta_p)


# ---------------------------------------------------------------- aeno


def test_aeno_equal_slopes_returns_common_value():
    assert float(aeno_slope(1.0, 1.0)) == pytest.approx(1.0, rel=1e-15)
    assert float(aeno_slope(-0.3, -0.3)) == pytest.approx(-0.3, rel=1e-14)


def test_aeno_zero_left_difference_gives_zero_slope():
    assert float(aeno_slope(0.0, 7.0)) == 0.0
    assert float(aeno_slope(0.0, -2.5)) == 0.0


def test_aeno_two_to_one_blend():
    # r = 2, beta = 2/sqrt(5), slope = beta*1 + (1 - beta)*2 = 2 - beta
    got = float(aeno_slope(2.0, 1.0, eps=0.0))
    assert got == pytest.approx(1.1055728090000843, rel=1e-14)


def test_aeno_slope_is_convex_combination():
    rng = np.random.default_rng(404)
    dm = rng.normal(scale=2.0, size=500)
    dp = rng.normal(scale=2.0, size=500)
    s = aeno_slope(dm, dp)
    lo = np.minimum(dm, dp)
    hi = np.maximum(dm, dp)
    assert np.all(s >= lo - 1e-14)
    assert np.all(s <= hi + 1e-14)


def test_aeno_weight_stays_in_unit_interval():
    rng = np.random.default_rng(405)
    dm = rng.normal(scale=5.0, size=500)
    dp = rng.normal(scale=5.0, size=500)
    r = np.abs(dm) / (np.abs(dp) + 1e-4)
    beta = r / np.sqrt(1.0 + r * r)
    assert np.all(beta >= 0.0)
    assert np.all(beta < 1.0)


def test_aeno_commutes_with_negation():
    # flipping the sign of both inputs flips the output bitwise; this is
    # what makes the free-surface slope vanish exactly at rest
    rng = np.random.default_rng(406)
    dm = rng.normal(size=200)
    dp = rng.normal(size=200)
    assert np.array_equal(aeno_slope(-dm, -dp), -aeno_slope(dm, dp))


# ---------------------------------------------------------------- extrapolate


def _linear_field(grid, a, b):
    """Cell-centre samples of a + b*x over the padded array."""
    g = grid.ghost_width
    n_rows = grid.ny + 2 * g
    n_cols = grid.nx + 2 * g
    i = np.arange(n_cols)
    x = grid.x_min + (i - g + 0.5) * grid.dx
    w = np.zeros((NCOMP, n_rows, n_cols))
    w[IH] = a + b * x
    return w


def test_extrapolate_zero_slopes_copies_cell_averages():
    grid = build_grid(0.0, 1.0, 0.0, 1.0, 6, 4)
    rng = np.random.default_rng(407)
    shape = (NCOMP, grid.ny + 2 * grid.ghost_width,
             grid.nx + 2 * grid.ghost_width)
    w = rng.uniform(0.5, 2.0, size=shape)
    slopes = np.zeros(shape)
    eta_slope = np.zeros(shape[1:])
    pair = extrapolate(w, slopes, eta_slope, grid, axis=0)
    g = grid.ghost_width
    assert np.array_equal(pair.wm, w[:, g:g + grid.ny, g - 1:g + grid.nx])
    assert np.array_equal(pair.wp, w[:, g:g + grid.ny, g:g + grid.nx + 1])


def test_extrapolate_half_cell_offsets():
    # cell average 1 with slope 0.4 on a unit cell puts the edges at
    # 1.2 (right face of the cell) and 0.8 (left face)
    grid = build_grid(0.0, 5.0, 0.0, 1.0, 5, 1)
    assert grid.dx == 1.0
    g = grid.ghost_width
    shape = (NCOMP, 1 + 2 * g, 5 + 2 * g)
    w = np.ones(shape)
    slopes = np.zeros(shape)
    slopes[:, :, g + 2] = 0.4
    eta_slope = np.zeros(shape[1:])
    pair = extrapolate(w, slopes, eta_slope, grid, axis=0)
    # interface j sits between cells (g-1+j, g+j); cell g+2 is the left
    # cell of interface 3 and the right cell of interface 2
    assert pair.wm[IH][0, 3] == pytest.approx(1.2)
    assert pair.wp[IH][0, 2] == pytest.approx(0.8)
    # other interfaces untouched
    assert pair.wm[IH][0, 1] == 1.0
    assert pair.wp[IH][0, 4] == 1.0


def test_extrapolate_reproduces_linear_data():
    grid = build_grid(0.0, 1.0, 0.0, 1.0, 8, 3)
    w = _linear_field(grid, 2.0, 0.3)
    slopes, eta_slope = state_slopes(w, grid, axis=0)
    pair = extrapolate(w, slopes, eta_slope, grid, axis=0)
    j = np.arange(grid.nx + 1)
    x_iface = grid.x_min + j * grid.dx
    exact = 2.0 + 0.3 * x_iface
    assert pair.wm[IH] == pytest.approx(np.tile(exact, (grid.ny, 1)), rel=1e-13)
    assert pair.wp[IH] == pytest.approx(np.tile(exact, (grid.ny, 1)), rel=1e-13)


def test_extrapolate_conserves_cell_averages():
    # mean of the two edge values of a cell equals its average
    grid = build_grid(0.0, 2.0, 0.0, 1.0, 10, 4)
    rng = np.random.default_rng(408)
    g = grid.ghost_width
    shape = (NCOMP, grid.ny + 2 * g, grid.nx + 2 * g)
    w = rng.uniform(0.5, 2.0, size=shape)
    slopes, eta_slope = state_slopes(w, grid, axis=0)
    pair = extrapolate(w, slopes, eta_slope, grid, axis=0)
    # cell g+j is the left cell of interface j+1 and right cell of
    # interface j, so its two edge values are wm[..., j+1] and wp[..., j]
    edge_mean = 0.5 * (pair.wm[:, :, 1:] + pair.wp[:, :, :-1])
    assert edge_mean == pytest.approx(
        w[:, g:g + grid.ny, g:g + grid.nx], rel=1e-14)


def test_flat_surface_has_exactly_zero_surface_slope():
    grid = build_grid(0.0, 1.0, 0.0, 1.0, 12, 5)
    rng = np.random.default_rng(409)
    g = grid.ghost_width
    shape = (grid.ny + 2 * g, grid.nx + 2 * g)
    h = rng.uniform(1.1, 2.0, size=shape)
    w = np.zeros((NCOMP,) + shape)
    w[IH] = h
    w[IZB] = 2.0 - h
    for axis in (0, 1):
        _, eta_slope = state_slopes(w, grid, axis)
        assert np.all(eta_slope == 0.0)


def test_reconstruction_second_order_on_smooth_field():
    # exact cell averages of sin(x)cos(y); interface values should
    # converge to the point values at second order
    errs = []
    for n in (16, 32, 64):
        grid = build_grid(0.0, 2.0 * np.pi, 0.0, 2.0 * np.pi, n, n)
        g = grid.ghost_width
        i = np.arange(n + 2 * g + 1)
        xe = grid.x_min + (i - g) * grid.dx
        ye = grid.y_min + (i - g) * grid.dy
        avg_x = (np.cos(xe[:-1]) - np.cos(xe[1:])) / grid.dx
        avg_y = (np.sin(ye[1:]) - np.sin(ye[:-1])) / grid.dy
        w = np.zeros((NCOMP, n + 2 * g, n + 2 * g))
        w[IH] = np.outer(avg_y, avg_x)
        slopes, eta_slope = state_slopes(w, grid, axis=0)
        pair = extrapolate(w, slopes, eta_slope, grid, axis=0)
        x_iface = grid.x_min + np.arange(n + 1) * grid.dx
        y_cent = grid.y_centers()
        exact = np.outer(np.cos(y_cent), np.sin(x_iface))
        errs.append(np.mean(np.abs(pair.wm[IH] - exact)))
    rate1 = np.log2(errs[0] / errs[1])
    rate2 = np.log2(errs[1] / errs[2])
    assert rate1 > 1.8
    assert rate2 > 1.8


# ---------------------------------------------------------------- hydrostatic


def test_hydrostatic_lake_at_rest_over_bed_step():
    pair = hydrostatic_correct(
        _pair((1.5, 0.0, 0.0, 0.0, 0.5), (1.3, 0.0, 0.0, 0.0, 0.7)),
        PAR)
    assert pair.wm[IH][0, 0] == 1.3
    assert pair.wp[IH][0, 0] == 1.3
    assert pair.wm[IZB][0, 0] == 0.7
    assert pair.wp[IZB][0, 0] == 0.7
    assert pair.eta_m[0, 0] == 2.0
    assert pair.eta_p[0, 0] == 2.0
    assert np.all(pair.wm[[IHU, IHV, IHC]] == 0.0)
    assert np.all(pair.wp[[IHU, IHV, IHC]] == 0.0)


def test_hydrostatic_dry_side_with_tall_step_stays_dry():
    pair = hydrostatic_correct(
        _pair((1.5, 0.45, 0.0, 0.0, 0.5), (0.0, 0.0, 0.0, 0.0, 2.5)),
        PAR)
    assert pair.wp[IH][0, 0] == 0.0
    assert pair.wp[IHU][0, 0] == 0.0
    # the left surface (eta = 2) also sits below the step crest, so the
    # face is dry from both sides and no flux can cross it
    assert pair.wm[IH][0, 0] == 0.0
    assert pair.wm[IHU][0, 0] == 0.0


def test_hydrostatic_flat_bed_is_identity():
    # dyadic values so every product and sum is exact
    left = (1.5, 0.75, -0.375, 0.1875, 0.25)
    pair = hydrostatic_correct(_pair(left, left), PAR)
    want = _state(*left)
    assert np.array_equal(pair.wm, want)
    assert np.array_equal(pair.wp, want)
    assert pair.um[0, 0] == 0.5
    assert pair.cm[0, 0] == 0.125


def test_hydrostatic_flat_bed_close_to_identity_generic_values():
    rng = np.random.default_rng(410)
    n = 64
    wm = np.empty((NCOMP, 1, n))
    wm[IH] = rng.uniform(0.2, 3.0, size=(1, n))
    wm[IHU] = wm[IH] * rng.uniform(-2.0, 2.0, size=(1, n))
    wm[IHV] = wm[IH] * rng.uniform(-2.0, 2.0, size=(1, n))
    wm[IHC] = wm[IH] * rng.uniform(0.0, 0.3, size=(1, n))
    wm[IZB] = rng.uniform(-1.0, 1.0, size=(1, n))
    wp = wm.copy()
    pair = hydrostatic_correct(
        InterfacePair(wm=wm, wp=wp, eta_m=wm[IH] + wm[IZB],
                      eta_p=wp[IH] + wp[IZB]),
        PAR)
    assert pair.wm == pytest.approx(wm, rel=1e-13, abs=1e-13)
    assert pair.wp == pytest.approx(wp, rel=1e-13, abs=1e-13)


def test_hydrostatic_depths_never_negative():
    rng = np.random.default_rng(411)
    n = 400
    def make(side_rng):
        w = np.empty((NCOMP, 1, n))
        w[IH] = np.maximum(0.0, side_rng.uniform(-0.5, 2.0, size=(1, n)))
        w[IHU] = w[IH] * side_rng.uniform(-3.0, 3.0, size=(1, n))
        w[IHV] = w[IH] * side_rng.uniform(-3.0, 3.0, size=(1, n))
        w[IHC] = w[IH] * side_rng.uniform(0.0, 0.3, size=(1, n))
        w[IZB] = side_rng.uniform(-2.0, 2.0, size=(1, n))
        return w
    wm = make(rng)
    wp = make(rng)
    pair = hydrostatic_correct(
        InterfacePair(wm=wm, wp=wp, eta_m=wm[IH] + wm[IZB],
                      eta_p=wp[IH] + wp[IZB]),
        PAR)
    assert np.all(pair.wm[IH] >= 0.0)
    assert np.all(pair.wp[IH] >= 0.0)


def test_hydrostatic_still_water_sides_match_bitwise():
    # a flat free surface over an uneven bed must come out of the
    # correction with identical depth and bed on both sides of every
    # interface, in exact float arithmetic
    rng = np.random.default_rng(412)
    n = 300
    eta = 2.0
    def make(zb_raw):
        h = eta - zb_raw
        zb = eta - h          # re-derive so h + zb == eta bitwise
        w = np.zeros((NCOMP, 1, n))
        w[IH] = h
        w[IZB] = zb
        return w
    wm = make(rng.uniform(0.0, 0.9, size=(1, n)))
    wp = make(rng.uniform(0.0, 0.9, size=(1, n)))
    pair = hydrostatic_correct(
        InterfacePair(wm=wm, wp=wp, eta_m=wm[IH] + wm[IZB],
                      eta_p=wp[IH] + wp[IZB]),
        PAR)
    assert np.array_equal(pair.wm, pair.wp)
    assert np.all(pair.eta_m == eta)
    assert np.all(pair.eta_p == eta)
