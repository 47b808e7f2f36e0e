"""Finite-volume shallow-water flow with suspended sediment transport
and bed evolution on structured 2D grids."""

__version__ = "0.1.0"

from .grid import Grid2D, BoundarySpec, build_grid
from .physics import PhysParams
from .scheme import SchemeOptions, assemble_rhs
from .harness import CaseConfig, resolve_config, run_case

__all__ = ["Grid2D", "BoundarySpec", "build_grid", "PhysParams",
           "SchemeOptions", "assemble_rhs", "CaseConfig",
           "resolve_config", "run_case", "__version__"]
