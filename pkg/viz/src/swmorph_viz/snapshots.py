"""Reader for the solver's snapshot CSV contract.

A snapshot is a comma-separated table with the exact header
``x,y,h,hu,hv,hC,zb,eta`` and one record per cell, row-major (y varies
slowest). An optional JSON sidecar next to the file (``<name>.csv.json``)
carries the output time and the resolved run configuration.
"""

import io
import json

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

EXPECTED_HEADER = "x,y,h,hu,hv,hC,zb,eta"
FIELD_NAMES = ("h", "hu", "hv", "hC", "zb", "eta")

# depth below which the derived concentration is treated as zero, the
# same cutoff the solver uses when dividing by h
H_CUT = 1e-10


class SnapshotFormatError(ValueError):
    pass


@dataclass
class Snapshot:
    path: Path
    x: np.ndarray                    # (nx,) cell-center abscissas
    y: np.ndarray                    # (ny,) cell-center ordinates
    fields: dict                     # name -> (ny, nx) array
    time: float | None = None
    case: str | None = None
    label: str = ""
    meta: dict = field(default_factory=dict)

    @property
    def nx(self):
        return self.x.size

    @property
    def ny(self):
        return self.y.size

    def field_array(self, name):
        """Return one field; "C" derives concentration as hC/h."""
        if name == "C":
            h = self.fields["h"]
            with np.errstate(divide="ignore", invalid="ignore"):
                c = np.where(h > H_CUT, self.fields["hC"] / h, 0.0)
            return c
        if name not in self.fields:
            raise SnapshotFormatError(
                f"unknown field {name!r}; expected one of "
                f"{', '.join(FIELD_NAMES)} or C")
        return self.fields[name]


def load_snapshot(path):
    """Parse and validate one snapshot file.

    Raises SnapshotFormatError with a specific message when the file
    does not meet the contract.
    """
    path = Path(path)
    try:
        with open(path) as fh:
            header = fh.readline().strip()
            if header != EXPECTED_HEADER:
                raise SnapshotFormatError(
                    f"{path}: bad header {header!r}, "
                    f"expected {EXPECTED_HEADER!r}")
            body = fh.read()
    except OSError as exc:
        raise SnapshotFormatError(f"{path}: {exc}") from None
    if not body.strip():
        raise SnapshotFormatError(f"{path}: no records")
    try:
        table = np.loadtxt(io.StringIO(body), delimiter=",", ndmin=2)
    except ValueError as exc:
        raise SnapshotFormatError(
            f"{path}: malformed records ({exc})") from None
    if table.shape[1] != 8:
        raise SnapshotFormatError(
            f"{path}: {table.shape[1]} columns per record, expected 8")
    if not np.all(np.isfinite(table[:, :2])):
        raise SnapshotFormatError(f"{path}: non-finite coordinates")

    xcol, ycol = table[:, 0], table[:, 1]
    change = np.nonzero(ycol != ycol[0])[0]
    nx = int(change[0]) if change.size else xcol.size
    if xcol.size % nx:
        raise SnapshotFormatError(
            f"{path}: {xcol.size} records do not tile rows of {nx}")
    ny = xcol.size // nx
    xg = xcol.reshape(ny, nx)
    yg = ycol.reshape(ny, nx)
    if np.any(xg != xg[0]) or np.any(yg != yg[:, :1]):
        raise SnapshotFormatError(
            f"{path}: records are not a row-major rectangular grid")
    x = xg[0]
    y = yg[:, 0]
    if np.any(np.diff(x) <= 0) or (ny > 1 and np.any(np.diff(y) <= 0)):
        raise SnapshotFormatError(
            f"{path}: coordinates are not strictly increasing")

    fields = {name: table[:, 2 + k].reshape(ny, nx)
              for k, name in enumerate(FIELD_NAMES)}
    mismatch = np.abs(fields["eta"] - (fields["h"] + fields["zb"]))
    if mismatch.max() > 1e-9 * max(1.0, np.abs(fields["eta"]).max()):
        raise SnapshotFormatError(
            f"{path}: eta column is not h + zb (max gap {mismatch.max():g})")

    snap = Snapshot(path=path, x=x, y=y, fields=fields)
    sidecar = path.with_suffix(path.suffix + ".json")
    if sidecar.exists():
        try:
            meta = json.loads(sidecar.read_text())
        except json.JSONDecodeError as exc:
            raise SnapshotFormatError(f"{sidecar}: bad sidecar ({exc})")
        snap.meta = meta
        snap.time = meta.get("time")
        snap.case = meta.get("case")
        snap.label = meta.get("label", "")
    return snap


def time_label(snap):
    if snap.time is not None:
        return f"t = {snap.time:g} s"
    return snap.path.stem
