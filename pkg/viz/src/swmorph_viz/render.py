"""Single-figure rendering: heatmaps, surfaces, profiles, comparisons."""

from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from swmorph_viz.snapshots import load_snapshot, time_label

FIGSIZE = (6.4, 4.8)
DPI = 110

AXIS_LABEL = {"h": "water depth h [m]", "eta": "free surface [m]",
              "zb": "bed level [m]", "hu": "x-discharge [m^2/s]",
              "hv": "y-discharge [m^2/s]", "hC": "sediment load [m]",
              "C": "concentration [-]"}


@dataclass
class PlotJob:
    snapshots: tuple               # one or more CSV paths
    field: str = "eta"
    kind: str = "heatmap"          # heatmap | surface | profile | compare
    out: str = "figure.png"
    data: str | None = None        # two-column (x, value) text file
    slice_axis: str | None = None  # "y" or "x" for profile slices
    slice_value: float | None = None
    title: str | None = None


def render(job):
    """Render one figure; returns a small report dict."""
    if not job.snapshots:
        raise ValueError("render needs at least one snapshot")
    snaps = [load_snapshot(p) for p in job.snapshots]
    fig = plt.figure(figsize=FIGSIZE, dpi=DPI)
    info = {"out": str(job.out), "kind": job.kind, "field": job.field}
    try:
        if job.kind == "heatmap":
            info.update(_heatmap(fig, snaps[0], job))
        elif job.kind == "surface":
            info.update(_surface(fig, snaps[0], job))
        elif job.kind == "profile":
            info.update(_profile(fig, snaps, job))
        elif job.kind == "compare":
            info.update(_compare(fig, snaps, job))
        else:
            raise ValueError(f"unknown plot kind {job.kind!r}")
        out = Path(job.out)
        out.parent.mkdir(parents=True, exist_ok=True)
        fig.savefig(out)
    finally:
        plt.close(fig)
    return info


def _field_or_die(snap, name):
    return snap.field_array(name)


def _heatmap(fig, snap, job):
    z = _field_or_die(snap, job.field)
    ax = fig.add_subplot(111)
    lo, hi = float(z.min()), float(z.max())
    collapsed = (hi - lo) <= 1e-12 * max(1.0, abs(hi), abs(lo))
    if collapsed:
        # widen an essentially constant range so pcolormesh still draws
        mid = 0.5 * (lo + hi)
        lo, hi = mid - 1e-12 - 1e-6 * abs(mid), mid + 1e-12 + 1e-6 * abs(mid)
    mesh = ax.pcolormesh(snap.x, snap.y, z, shading="nearest",
                         vmin=lo, vmax=hi, cmap="viridis")
    fig.colorbar(mesh, ax=ax, label=AXIS_LABEL.get(job.field, job.field))
    ax.set_xlabel("x [m]")
    ax.set_ylabel("y [m]")
    ax.set_aspect("equal")
    ax.set_title(job.title or f"{job.field}, {time_label(snap)}")
    return {"collapsed_range": collapsed}


def _surface(fig, snap, job):
    z = _field_or_die(snap, job.field)
    ax = fig.add_subplot(111, projection="3d")
    xg, yg = np.meshgrid(snap.x, snap.y)
    ax.plot_surface(xg, yg, z, cmap="viridis", linewidth=0,
                    antialiased=False)
    ax.set_xlabel("x [m]")
    ax.set_ylabel("y [m]")
    ax.set_zlabel(AXIS_LABEL.get(job.field, job.field))
    ax.set_title(job.title or f"{job.field}, {time_label(snap)}")
    return {}


def _slice_profile(snap, job):
    z = snap.field_array(job.field)
    if job.slice_axis == "y":
        k = int(np.argmin(np.abs(snap.y - job.slice_value)))
        return snap.x, z[k, :], f"y = {snap.y[k]:g}"
    if job.slice_axis == "x":
        i = int(np.argmin(np.abs(snap.x - job.slice_value)))
        return snap.y, z[:, i], f"x = {snap.x[i]:g}"
    raise ValueError("profile plots need slice_axis 'y' or 'x' "
                     "and a slice_value")


def _profile(fig, snaps, job):
    if job.slice_axis not in ("x", "y") or job.slice_value is None:
        raise ValueError("profile plots need slice_axis 'y' or 'x' "
                         "and a slice_value")
    ax = fig.add_subplot(111)
    where = ""
    for snap in snaps:
        s, vals, where = _slice_profile(snap, job)
        label = snap.label or time_label(snap)
        ax.plot(s, vals, label=label)
    ax.set_xlabel("y [m]" if job.slice_axis == "x" else "x [m]")
    ax.set_ylabel(AXIS_LABEL.get(job.field, job.field))
    ax.legend()
    ax.grid(True, alpha=0.3)
    ax.set_title(job.title or f"{job.field} along {where}")
    return {"curves": len(snaps)}


def _compare(fig, snaps, job):
    if job.data is None:
        raise ValueError("compare plots need a data file")
    pts = np.loadtxt(job.data, ndmin=2)
    if pts.shape[1] < 2:
        raise ValueError(f"{job.data}: expected two columns (x, value)")
    if job.slice_axis is None:
        job = PlotJob(**{**job.__dict__, "slice_axis": "y",
                         "slice_value": float(snaps[0].y[snaps[0].ny // 2])})
    info = _profile(fig, snaps, job)
    ax = fig.axes[0]
    ax.scatter(pts[:, 0], pts[:, 1], marker="o", s=18, zorder=3,
               facecolors="none", edgecolors="k", label="measured")
    ax.legend()
    info["data_points"] = int(pts.shape[0])
    return info
