"""Directory-driven figure regeneration.

Scans a snapshot directory, groups files by case and label via their
sidecars, and renders the standard figure set: heatmaps for the 2D
cases, time overlays for the dam-break profile case, one curve per
grain diameter for the multigrain case, and comparison plots when a
measured profile is supplied.
"""

import re

from pathlib import Path

from swmorph_viz.render import PlotJob, render
from swmorph_viz.snapshots import SnapshotFormatError, load_snapshot

HEATMAP_CASES = ("c-property", "riemann2d", "bedmotion")
PROFILE_CASES = ("dambreak1d",)


def _slug(text):
    return re.sub(r"[^A-Za-z0-9._-]+", "_", text).strip("_") or "run"


def _sort_key(snap):
    return (snap.time if snap.time is not None else 0.0, str(snap.path))


def discover(snapshot_dir):
    """Load every CSV under the directory; returns (groups, errors).

    groups maps (case, label) to snapshots sorted by time.
    """
    groups = {}
    errors = []
    for path in sorted(Path(snapshot_dir).rglob("*.csv")):
        try:
            snap = load_snapshot(path)
        except SnapshotFormatError as exc:
            errors.append(str(exc))
            continue
        key = (snap.case or "unknown", snap.label)
        groups.setdefault(key, []).append(snap)
    for snaps in groups.values():
        snaps.sort(key=_sort_key)
    return groups, errors


def _mid_slice(snap):
    return float(snap.y[snap.ny // 2])


def figure_set(snapshot_dir, out_dir, data=None):
    """Render the full set; returns a report with images and errors."""
    out_dir = Path(out_dir)
    groups, errors = discover(snapshot_dir)
    images = []

    def emit(job):
        render(job)
        images.append(job.out)

    multigrain_latest = []
    for (case, label), snaps in sorted(groups.items()):
        tag = _slug(f"{case}_{label}" if label else case)
        latest = snaps[-1]
        if case == "multigrain":
            multigrain_latest.append(latest)
            continue
        if case in PROFILE_CASES:
            for fname in ("eta", "zb"):
                emit(PlotJob(snapshots=tuple(str(s.path) for s in snaps),
                             field=fname, kind="profile",
                             out=str(out_dir / f"{tag}_{fname}_profile.png"),
                             slice_axis="y", slice_value=_mid_slice(latest)))
            if data is not None:
                for snap in snaps:
                    t = f"{snap.time:g}" if snap.time is not None else "end"
                    emit(PlotJob(snapshots=(str(snap.path),), field="eta",
                                 kind="compare",
                                 out=str(out_dir / f"{tag}_eta_vs_data_t{t}.png"),
                                 data=data, slice_axis="y",
                                 slice_value=_mid_slice(snap)))
            continue
        # 2D cases and anything unrecognized get field heatmaps
        fields = ("eta", "zb") if case in HEATMAP_CASES else ("eta",)
        for fname in fields:
            emit(PlotJob(snapshots=(str(latest.path),), field=fname,
                         kind="heatmap",
                         out=str(out_dir / f"{tag}_{fname}_heatmap.png")))

    if multigrain_latest:
        multigrain_latest.sort(key=lambda s: s.label)
        paths = tuple(str(s.path) for s in multigrain_latest)
        for fname in ("zb", "eta"):
            emit(PlotJob(snapshots=paths, field=fname, kind="profile",
                         out=str(out_dir / f"multigrain_{fname}_profile.png"),
                         slice_axis="y",
                         slice_value=_mid_slice(multigrain_latest[0])))

    return {"images": images, "parse_errors": errors,
            "groups": len(groups)}
