"""Mesh construction, ghost filling and boundary handling."""

import numpy as np
import pytest

from swmorph.errors import ConfigError
from swmorph.grid import (IH, IHU, IHV, BoundarySpec, build_grid,
                          fill_ghosts, fill_state_ghosts)


def _outflow():
    return BoundarySpec("outflow", "outflow", "outflow", "outflow")


def _field(grid, value=0.0):
    return np.full(grid.shape, value, dtype=float)


def test_build_grid_spacing():
    grid = build_grid(-1.0, 1.0, -1.0, 1.0, 400, 400)
    assert grid.dx == 0.005 and grid.dy == 0.005


def test_build_grid_single_cell_center():
    grid = build_grid(0.0, 1.0, 0.0, 1.0, 1, 1)
    assert grid.x_centers()[0] == 0.5
    assert grid.y_centers()[0] == 0.5


def test_build_grid_channel_spacing():
    grid = build_grid(-1.25, 1.25, 0.0, 1.0, 100, 1)
    assert grid.dx == 0.025 and grid.dy == 1.0


def test_build_grid_rejects_bad_input():
    with pytest.raises(ConfigError):
        build_grid(1.0, 0.0, 0.0, 1.0, 10, 10)
    with pytest.raises(ConfigError):
        build_grid(0.0, 1.0, 0.0, 1.0, 0, 10)
    with pytest.raises(ConfigError):
        build_grid(0.0, 1.0, 0.0, 1.0, 10, 10, ghost_width=1)


def test_cell_centers_increasing_and_area_sum():
    grid = build_grid(-0.3, 2.7, 0.1, 1.9, 37, 23)
    xs = grid.x_centers()
    ys = grid.y_centers()
    assert np.all(np.diff(xs) > 0.0) and np.all(np.diff(ys) > 0.0)
    assert np.isclose(grid.dx * grid.dy * grid.nx * grid.ny,
                      3.0 * 1.8, rtol=1e-12)


def test_boundary_spec_validation():
    with pytest.raises(ConfigError):
        BoundarySpec("outflow", "outflow", "slippery", "outflow")
    with pytest.raises(ConfigError):
        BoundarySpec("periodic", "outflow", "outflow", "outflow")
    BoundarySpec("periodic", "periodic", "wall", "wall")


def test_outflow_constant_extension():
    grid = build_grid(0.0, 1.0, 0.0, 1.0, 4, 3)
    f = _field(grid)
    f[grid.interior] = 7.5
    fill_ghosts(f, grid, _outflow())
    assert np.all(f == 7.5)


def test_outflow_row_copy():
    grid = build_grid(0.0, 1.0, 0.0, 1.0, 3, 1)
    g = grid.ghost_width
    f = _field(grid)
    f[g, g:g + 3] = [1.0, 2.0, 3.0]
    fill_ghosts(f, grid, _outflow())
    assert np.all(f[g, :g] == 1.0)
    assert np.all(f[g, g + 3:] == 3.0)


def test_wall_odd_extension():
    grid = build_grid(0.0, 1.0, 0.0, 1.0, 2, 2)
    bc = BoundarySpec("wall", "wall", "wall", "wall")
    g = grid.ghost_width
    f = _field(grid)
    f[grid.interior] = 5.0
    fill_ghosts(f, grid, bc, parity=(-1.0, 1.0))
    assert f[g, g - 1] == -5.0
    assert f[g, g + 2] == -5.0
    assert f[g - 1, g] == 5.0     # only x-normal momentum flips


def test_periodic_wraps():
    grid = build_grid(0.0, 1.0, 0.0, 1.0, 4, 1)
    bc = BoundarySpec("periodic", "periodic", "outflow", "outflow")
    g = grid.ghost_width
    f = _field(grid)
    f[g, g:g + 4] = [1.0, 2.0, 3.0, 4.0]
    fill_ghosts(f, grid, bc)
    assert list(f[g, :g]) == [3.0, 4.0]
    assert list(f[g, g + 4:]) == [1.0, 2.0]


def test_periodic_requires_enough_cells():
    grid = build_grid(0.0, 1.0, 0.0, 1.0, 1, 4)
    bc = BoundarySpec("periodic", "periodic", "outflow", "outflow")
    with pytest.raises(ConfigError):
        fill_ghosts(_field(grid), grid, bc)


def test_fill_ghosts_idempotent():
    grid = build_grid(0.0, 1.0, 0.0, 1.0, 5, 4)
    bc = BoundarySpec("periodic", "periodic", "wall", "wall")
    rng = np.random.default_rng(3)
    f = _field(grid)
    f[grid.interior] = rng.normal(size=(4, 5))
    fill_ghosts(f, grid, bc)
    once = f.copy()
    fill_ghosts(f, grid, bc)
    assert np.array_equal(f, once)


def test_state_ghosts_flip_normal_momentum():
    grid = build_grid(0.0, 1.0, 0.0, 1.0, 3, 3)
    bc = BoundarySpec("wall", "wall", "wall", "wall")
    g = grid.ghost_width
    w = np.zeros((5,) + grid.shape)
    w[IH][grid.interior] = 1.0
    w[IHU][grid.interior] = 2.0
    w[IHV][grid.interior] = 3.0
    fill_state_ghosts(w, grid, bc)
    assert w[IHU][g, g - 1] == -2.0 and w[IHV][g, g - 1] == 3.0
    assert w[IHV][g - 1, g] == -3.0 and w[IHU][g - 1, g] == 2.0
    assert w[IH][g, g - 1] == 1.0
