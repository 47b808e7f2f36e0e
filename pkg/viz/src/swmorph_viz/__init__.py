"""Plotting tools for solver snapshot CSV files."""

from swmorph_viz.snapshots import Snapshot, SnapshotFormatError, load_snapshot
from swmorph_viz.render import PlotJob, render

__all__ = ["Snapshot", "SnapshotFormatError", "load_snapshot",
           "PlotJob", "render"]
