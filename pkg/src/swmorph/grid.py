"""Structured grid, state-array layout and ghost-cell handling.

State arrays are laid out component-first: shape (5, Ny, Nx) where
Ny = ny + 2*ghost_width and Nx = nx + 2*ghost_width, row-major in
(row k, column i). Component order is h, hu, hv, hC, zb.
"""

import numpy as np
from dataclasses import dataclass

from .errors import ConfigError

NCOMP = 5
IH, IHU, IHV, IHC, IZB = range(NCOMP)

BC_KINDS = ("outflow", "wall", "periodic")


@dataclass(frozen=True)
class Grid2D:
    x_min: float
    x_max: float
    y_min: float
    y_max: float
    nx: int
    ny: int
    ghost_width: int = 2

    @property
    def dx(self):
        return (self.x_max - self.x_min) / self.nx

    @property
    def dy(self):
        return (self.y_max - self.y_min) / self.ny

    @property
    def shape(self):
        """Full array shape (rows, cols) including ghost frames."""
        g = self.ghost_width
        return (self.ny + 2 * g, self.nx + 2 * g)

    @property
    def interior(self):
        """Slice pair selecting interior cells of a full array."""
        g = self.ghost_width
        return (slice(g, g + self.ny), slice(g, g + self.nx))

    def x_centers(self):
        """Interior cell-center x coordinates, length nx."""
        return self.x_min + (np.arange(self.nx) + 0.5) * self.dx

    def y_centers(self):
        return self.y_min + (np.arange(self.ny) + 0.5) * self.dy

    def centers(self):
        """Meshgrid of interior cell centers, each shaped (ny, nx)."""
        return np.meshgrid(self.x_centers(), self.y_centers())


def build_grid(x_min, x_max, y_min, y_max, nx, ny, ghost_width=2):
    if not (x_max > x_min) or not (y_max > y_min):
        raise ConfigError(
            "grid extent must be positive: "
            f"x [{x_min}, {x_max}], y [{y_min}, {y_max}]")
    if nx < 1 or ny < 1:
        raise ConfigError(f"cell counts must be positive, got nx={nx} ny={ny}")
    if ghost_width < 2:
        raise ConfigError(f"ghost_width must be >= 2, got {ghost_width}")
    return Grid2D(float(x_min), float(x_max), float(y_min), float(y_max),
                  int(nx), int(ny), int(ghost_width))


@dataclass(frozen=True)
class BoundarySpec:
    """Boundary condition kinds per side: outflow, wall or periodic."""
    x_low: str = "outflow"
    x_high: str = "outflow"
    y_low: str = "outflow"
    y_high: str = "outflow"

    def __post_init__(self):
        for side in (self.x_low, self.x_high, self.y_low, self.y_high):
            if side not in BC_KINDS:
                raise ConfigError(f"unknown boundary kind '{side}', "
                                  f"expected one of {BC_KINDS}")
        if (self.x_low == "periodic") != (self.x_high == "periodic"):
            raise ConfigError("periodic boundaries must pair up in x")
        if (self.y_low == "periodic") != (self.y_high == "periodic"):
            raise ConfigError("periodic boundaries must pair up in y")


def fill_ghosts(field, grid, bc, parity=(1.0, 1.0)):
    """Fill the ghost frame of one 2D field in place and return it.

    parity = (px, py): the field is multiplied by px when mirrored
    across an x wall and by py across a y wall (normal momentum
    components use -1). Idempotent: filling twice gives the same frame.
    """
    g = grid.ghost_width
    nx, ny = grid.nx, grid.ny
    px, py = parity
    if nx < g and (bc.x_low != "outflow" or bc.x_high != "outflow"):
        raise ConfigError("wall/periodic x boundaries need nx >= ghost_width")
    if ny < g and (bc.y_low != "outflow" or bc.y_high != "outflow"):
        raise ConfigError("wall/periodic y boundaries need ny >= ghost_width")

    # x sweep first, then y; the y sweep reads the already-filled x
    # ghosts so corner cells come out consistent.
    if bc.x_low == "periodic":
        field[:, :g] = field[:, nx:nx + g]
        field[:, g + nx:] = field[:, g:2 * g]
    else:
        if bc.x_low == "outflow":
            field[:, :g] = field[:, g:g + 1]
        else:  # wall
            field[:, :g] = px * field[:, 2 * g - 1:g - 1:-1]
        if bc.x_high == "outflow":
            field[:, g + nx:] = field[:, g + nx - 1:g + nx]
        else:
            field[:, g + nx:] = px * field[:, g + nx - 1:nx - 1:-1]

    if bc.y_low == "periodic":
        field[:g, :] = field[ny:ny + g, :]
        field[g + ny:, :] = field[g:2 * g, :]
    else:
        if bc.y_low == "outflow":
            field[:g, :] = field[g:g + 1, :]
        else:
            field[:g, :] = py * field[2 * g - 1:g - 1:-1, :]
        if bc.y_high == "outflow":
            field[g + ny:, :] = field[g + ny - 1:g + ny, :]
        else:
            field[g + ny:, :] = py * field[g + ny - 1:ny - 1:-1, :]

    return field


def fill_state_ghosts(w, grid, bc):
    """Fill ghost frames of a (5, Ny, Nx) state array in place.

    Walls reflect the normal momentum component (hu across x walls,
    hv across y walls); everything else copies with even parity.
    """
    fill_ghosts(w[IH], grid, bc)
    fill_ghosts(w[IHU], grid, bc, parity=(-1.0, 1.0))
    fill_ghosts(w[IHV], grid, bc, parity=(1.0, -1.0))
    fill_ghosts(w[IHC], grid, bc)
    fill_ghosts(w[IZB], grid, bc)
    return w
