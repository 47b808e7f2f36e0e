"""Synthetic snapshot files matching the solver's output contract."""

import json

import numpy as np
import pytest

HEADER = "x,y,h,hu,hv,hC,zb,eta"


def make_snapshot(path, nx=8, ny=6, time=None, case=None, label="",
                  h=None, zb=None, hu=None, hC=None, sidecar=True):
    x = (np.arange(nx) + 0.5) / nx
    y = (np.arange(ny) + 0.5) / ny
    xg, yg = np.meshgrid(x, y)
    if h is None:
        h = 1.0 + 0.2 * np.sin(2 * np.pi * xg) * np.cos(2 * np.pi * yg)
    if zb is None:
        zb = 0.1 * xg
    if hu is None:
        hu = 0.3 * h
    if hC is None:
        hC = 0.01 * h
    hv = np.zeros_like(h)
    eta = h + zb
    cols = np.column_stack([xg.ravel(), yg.ravel(), h.ravel(), hu.ravel(),
                            hv.ravel(), hC.ravel(), zb.ravel(), eta.ravel()])
    np.savetxt(path, cols, fmt="%.17g", delimiter=",", header=HEADER,
               comments="")
    if sidecar and (time is not None or case is not None):
        meta = {"time": time, "nx": nx, "ny": ny}
        if case is not None:
            meta["case"] = case
        if label:
            meta["label"] = label
        path.with_suffix(path.suffix + ".json").write_text(
            json.dumps(meta) + "\n")
    return path


@pytest.fixture
def snap_file(tmp_path):
    return make_snapshot(tmp_path / "snap_t1.000000.csv", time=1.0,
                         case="riemann2d")


def png_size(path):
    data = path.read_bytes()
    assert data[:8] == b"\x89PNG\r\n\x1a\n"
    return (int.from_bytes(data[16:20], "big"),
            int.from_bytes(data[20:24], "big"))
