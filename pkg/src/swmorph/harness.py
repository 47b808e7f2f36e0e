"""Test-case harness: configuration, initial data, runs and output.

Config files are flat ``key = value`` text with ``#`` comments. The
resolved configuration is echoed into a JSON sidecar next to every
snapshot so runs can be reproduced from their outputs alone.
"""

import json
from pathlib import Path

import numpy as np
from dataclasses import dataclass, fields, replace, asdict

from .errors import ConfigError
from .grid import IH, IHU, IHV, IHC, IZB, build_grid, BoundarySpec
from .physics import PhysParams, energy_diagnostic
from .scheme import (SchemeOptions, QUADRATURES, RECONSTRUCTIONS,
                     FRICTION_MODES)
from .timeint import StepControl, advance_to

CASES = ("c-property", "dambreak1d", "multigrain", "bedmotion", "riemann2d")

SNAPSHOT_HEADER = "x,y,h,hu,hv,hC,zb,eta"


@dataclass(frozen=True)
class CaseConfig:
    case: str = ""
    nx: int = 100
    ny: int = 100
    x_min: float = 0.0
    x_max: float = 1.0
    y_min: float = 0.0
    y_max: float = 1.0
    bc_x_low: str = "outflow"
    bc_x_high: str = "outflow"
    bc_y_low: str = "outflow"
    bc_y_high: str = "outflow"
    cfl: float = 0.5
    t_end: float = -1.0         # must be set (per-case default or user)
    snapshot_times: tuple = ()
    out_dir: str = "out"
    data_file: str = ""
    # scheme
    reconstruction: str = "aeno"
    quadrature: str = "midpoint"
    density_coupling: bool = False
    exchange: bool = True
    diffusion: bool = True
    friction_mode: str = "semi_implicit"
    aeno_l: float = 1.0
    aeno_eps: float = 1.0e-4
    # integration
    dt_max: float = 0.1
    max_steps: int = 1_000_000
    # physics
    g: float = 9.8
    rho_w: float = 1000.0
    rho_s: float = 2650.0
    porosity: float = 0.4
    n_manning: float = 0.028
    d50: float = 0.001
    d50_list: tuple = ()        # multigrain only
    nu: float = 0.000012
    phi_e: float = 0.015
    m_hindered: float = 2.0
    kappa: float = 0.4
    nu_m: float = 1.0e-6
    grass_a: float = 0.001
    grass_b: float = 3.0
    fr_clamp: float = 1.0e-3
    h_cut: float = 1.0e-10
    fs_at_rest: float = 1.0

    def phys_params(self):
        names = {f.name for f in fields(PhysParams)}
        return PhysParams(**{k: v for k, v in asdict(self).items()
                             if k in names})

    def scheme_options(self):
        return SchemeOptions(
            reconstruction=self.reconstruction, quadrature=self.quadrature,
            density_coupling=self.density_coupling, exchange=self.exchange,
            diffusion=self.diffusion, friction_mode=self.friction_mode,
            aeno_l=self.aeno_l, aeno_eps=self.aeno_eps)

    def boundary_spec(self):
        return BoundarySpec(x_low=self.bc_x_low, x_high=self.bc_x_high,
                            y_low=self.bc_y_low, y_high=self.bc_y_high)

    def grid(self):
        return build_grid(self.x_min, self.x_max, self.y_min, self.y_max,
                          self.nx, self.ny)

    def step_control(self):
        return StepControl(cfl=self.cfl, t_end=self.t_end,
                           dt_max=self.dt_max, max_steps=self.max_steps)


# per-case overrides applied beneath user-provided values
CASE_DEFAULTS = {
    "c-property": dict(
        nx=100, ny=100, x_min=0.0, x_max=1.0, y_min=0.0, y_max=1.0,
        cfl=0.5, t_end=1.0, exchange=False, diffusion=False),
    "dambreak1d": dict(
        nx=100, ny=1, x_min=-1.25, x_max=1.25, y_min=0.0, y_max=1.0,
        cfl=0.1, t_end=1.0, snapshot_times=(0.5, 0.7),
        exchange=False, diffusion=False, d50=0.0032, rho_s=1540.0),
    "multigrain": dict(
        nx=100, ny=1, x_min=-1.25, x_max=1.25, y_min=0.0, y_max=1.0,
        cfl=0.1, t_end=0.25, exchange=True, diffusion=True,
        rho_s=1540.0, d50_list=(0.002, 0.0032, 0.008, 0.02)),
    "bedmotion": dict(
        nx=100, ny=100, x_min=0.0, x_max=1.0, y_min=0.0, y_max=1.0,
        cfl=0.5, t_end=0.3, exchange=True, diffusion=True),
    "riemann2d": dict(
        nx=100, ny=100, x_min=-1.0, x_max=1.0, y_min=-1.0, y_max=1.0,
        cfl=0.5, exchange=True, diffusion=True),
}

_FIELD_TYPES = {f.name: f.type for f in fields(CaseConfig)}


def _parse_value(key, text):
    kind = _FIELD_TYPES[key]
    text = text.strip()
    try:
        if kind is bool:
            low = text.lower()
            if low in ("true", "1", "yes", "on"):
                return True
            if low in ("false", "0", "no", "off"):
                return False
            raise ValueError(f"not a boolean: '{text}'")
        if kind is int:
            return int(text)
        if kind is float:
            return float(text)
        if kind is tuple:
            if not text:
                return ()
            return tuple(float(tok) for tok in text.split(","))
        return text
    except ValueError as exc:
        raise ConfigError(f"bad value for config key '{key}': {exc}") from exc


def load_config(path):
    """Parse a flat key = value file into a dict of typed overrides."""
    overrides = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', "
                              f"got '{raw.strip()}'")
        key, _, value = line.partition("=")
        key = key.strip()
        if key not in _FIELD_TYPES:
            raise ConfigError(f"{path}:{lineno}: unknown config key '{key}'")
        overrides[key] = _parse_value(key, value)
    return overrides


def save_config(cfg, path):
    """Write a config back out; load_config(save_config(c)) == c."""
    lines = []
    for f in fields(CaseConfig):
        value = getattr(cfg, f.name)
        if f.type is tuple:
            text = ",".join(repr(v) for v in value)
        elif f.type is bool:
            text = "true" if value else "false"
        else:
            text = repr(value) if f.type is float else str(value)
        lines.append(f"{f.name} = {text}")
    Path(path).write_text("\n".join(lines) + "\n")
    return path


def resolve_config(case=None, file_overrides=None, cli_overrides=None):
    """Layer defaults, file values and CLI values into a CaseConfig.

    Precedence: CLI > file > case defaults > dataclass defaults.
    """
    file_overrides = dict(file_overrides or {})
    cli_overrides = {k: v for k, v in (cli_overrides or {}).items()
                     if v is not None}
    name = cli_overrides.get("case") or case \
        or file_overrides.get("case") or ""
    if name not in CASES:
        raise ConfigError(f"unknown case '{name}', expected one of {CASES}")
    merged = dict(CASE_DEFAULTS[name])
    merged.update(file_overrides)
    merged.update(cli_overrides)
    merged["case"] = name
    for key in merged:
        if key not in _FIELD_TYPES:
            raise ConfigError(f"unknown config key '{key}'")
    cfg = CaseConfig(**merged)
    validate_config(cfg)
    return cfg


def validate_config(cfg):
    if cfg.case not in CASES:
        raise ConfigError(f"unknown case '{cfg.case}'")
    if cfg.t_end <= 0.0:
        raise ConfigError(
            "t_end must be positive (riemann2d has no default final time; "
            "set t_end explicitly)" if cfg.case == "riemann2d"
            else f"t_end must be positive, got {cfg.t_end}")
    if not (0.0 < cfg.cfl <= 1.0):
        raise ConfigError(f"cfl must lie in (0, 1], got {cfg.cfl}")
    if cfg.quadrature not in QUADRATURES:
        raise ConfigError(f"quadrature must be one of {QUADRATURES}")
    if cfg.reconstruction not in RECONSTRUCTIONS:
        raise ConfigError(f"reconstruction must be one of {RECONSTRUCTIONS}")
    if cfg.friction_mode not in FRICTION_MODES:
        raise ConfigError(f"friction_mode must be one of {FRICTION_MODES}")
    if cfg.case == "multigrain" and not cfg.d50_list:
        raise ConfigError("multigrain needs a non-empty d50_list")
    cfg.boundary_spec()
    cfg.grid()
    return cfg


# ---------------------------------------------------------------- cases

def _gaussian_bump(x, y):
    return 0.02 + 0.1 * np.exp(-(x - 0.5) ** 2 - (y - 0.5) ** 2)


def _flat_surface(w, ii, zb_raw, eta):
    """Install a lake at rest: depths from the surface, then the bed
    re-derived so h + zb reproduces eta exactly in floating point."""
    h = eta - zb_raw
    w[IH][ii] = h
    w[IZB][ii] = eta - h


def _overlap_fraction(lo, hi, a, b):
    """Per-cell overlap fraction of [lo, hi] intervals with [a, b]."""
    return np.clip(np.minimum(hi, b) - np.maximum(lo, a), 0.0, None) \
        / (hi - lo)


def init_case(cfg, grid):
    """Initial conserved state (ghosts zeroed, filled on first use)."""
    w = np.zeros((5,) + grid.shape)
    ii = grid.interior
    x, y = grid.centers()

    if cfg.case == "c-property":
        zb = _gaussian_bump(x, y)
        _flat_surface(w, ii, zb, 2.0)
        conc = 0.7 * np.exp(-5.0 * (x - 0.9) ** 2 - 50.0 * (y - 0.5) ** 2)
        w[IHC][ii] = w[IH][ii] * conc

    elif cfg.case in ("dambreak1d", "multigrain"):
        w[IH][ii] = np.where(x <= 0.0, 0.1, 0.0)

    elif cfg.case == "bedmotion":
        zb = _gaussian_bump(x, y)
        _flat_surface(w, ii, zb, 1.0)
        w[IHC][ii] = w[IH][ii] * 0.01

    elif cfg.case == "riemann2d":
        dx, dy = grid.dx, grid.dy
        xl = grid.x_min + np.arange(grid.nx) * dx
        yl = grid.y_min + np.arange(grid.ny) * dy
        fx = _overlap_fraction(xl, xl + dx, -0.5, 0.5)
        fy = _overlap_fraction(yl, yl + dy, -0.5, 0.5)
        frac = np.outer(fy, fx)
        w[IH][ii] = 1.0 + frac           # 2 inside, 1 outside
        w[IZB][ii] = 1.0 + frac
        w[IHC][ii] = 0.001 * w[IH][ii]

    else:
        raise ConfigError(f"unknown case '{cfg.case}'")
    return w


# ------------------------------------------------------------- snapshots

def write_snapshot(w, grid, t, path, meta=None):
    """Write interior cells as CSV (row-major) plus a JSON sidecar."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    x, y = grid.centers()
    ii = grid.interior
    cols = [x.ravel(), y.ravel(),
            w[IH][ii].ravel(), w[IHU][ii].ravel(), w[IHV][ii].ravel(),
            w[IHC][ii].ravel(), w[IZB][ii].ravel(),
            (w[IH][ii] + w[IZB][ii]).ravel()]
    np.savetxt(path, np.column_stack(cols), fmt="%.17g", delimiter=",",
               header=SNAPSHOT_HEADER, comments="")
    sidecar = {"time": t, "nx": grid.nx, "ny": grid.ny}
    if meta:
        sidecar.update(meta)
    path.with_suffix(path.suffix + ".json").write_text(
        json.dumps(sidecar, indent=2, default=_jsonable) + "\n")
    return path


def _jsonable(obj):
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, tuple):
        return list(obj)
    raise TypeError(f"not JSON serializable: {type(obj)}")


def read_snapshot(path):
    """Read a snapshot CSV back into a dict of 2D arrays."""
    path = Path(path)
    with open(path) as fh:
        header = fh.readline().strip()
    if header != SNAPSHOT_HEADER:
        raise ConfigError(f"{path}: unexpected snapshot header '{header}'")
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    names = SNAPSHOT_HEADER.split(",")
    if data.shape[1] != len(names):
        raise ConfigError(f"{path}: expected {len(names)} columns, "
                          f"got {data.shape[1]}")
    nx = int(np.count_nonzero(data[:, 1] == data[0, 1]))
    ny = data.shape[0] // nx
    out = {name: data[:, k].reshape(ny, nx) for k, name in enumerate(names)}
    out["nx"], out["ny"] = nx, ny
    return out


# ------------------------------------------------------------------ runs

def _snapshot_name(t):
    return f"snap_t{t:.6f}.csv"


def _run_single(cfg, params, out_dir, label=""):
    grid = cfg.grid()
    bc = cfg.boundary_spec()
    opts = cfg.scheme_options()
    w = init_case(cfg, grid)
    out_dir = Path(out_dir)
    written = []
    meta_base = {"case": cfg.case, "label": label,
                 "config": asdict(cfg), "d50": params.d50,
                 "rho_s": params.rho_s}

    def on_snapshot(t, state, log):
        meta = dict(meta_base)
        meta["log"] = log.summary()
        written.append(str(write_snapshot(state, grid, t,
                                          out_dir / _snapshot_name(t), meta)))

    w, log = advance_to(w, grid, bc, params, opts, cfg.step_control(),
                        snapshot_times=cfg.snapshot_times,
                        on_snapshot=on_snapshot)
    report = {"case": cfg.case, "label": label, "nx": cfg.nx, "ny": cfg.ny,
              "t_end": cfg.t_end, "snapshots": written,
              "final_energy": energy_diagnostic(w, grid, params)}
    report.update(log.summary())
    return report, w, grid


def run_case(cfg):
    """Run a configured case; returns the report dict.

    multigrain expands into one run per diameter in d50_list, written
    to per-diameter subdirectories.
    """
    validate_config(cfg)
    params = cfg.phys_params()
    out_dir = Path(cfg.out_dir)
    if cfg.case == "multigrain":
        subs = []
        for dk in cfg.d50_list:
            sub_params = replace(params, d50=dk)
            sub, _, _ = _run_single(cfg, sub_params,
                                    out_dir / f"d50_{dk:g}",
                                    label=f"d50={dk:g}")
            subs.append(sub)
        report = {"case": cfg.case, "runs": subs,
                  "snapshots": [p for s in subs for p in s["snapshots"]]}
        return report
    report, _, _ = _run_single(cfg, params, out_dir)
    return report


# ----------------------------------------------------------- convergence

def l1_diff(a, b):
    """Cell-count-normalized L1 difference of two same-shape fields."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ConfigError(f"l1_diff shape mismatch: {a.shape} vs {b.shape}")
    return float(np.mean(np.abs(a - b)))


def restrict(fine, fy=2, fx=2):
    """Block-average a fine field onto a coarser grid."""
    ny, nx = fine.shape
    if ny % fy or nx % fx:
        raise ConfigError(f"cannot restrict shape {fine.shape} "
                          f"by ({fy}, {fx})")
    return fine.reshape(ny // fy, fy, nx // fx, fx).mean(axis=(1, 3))


def convergence_rate(coarse, mid, fine):
    """Observed order from three nested solutions of one field.

    Each finer solution is block-averaged onto the next coarser grid;
    the rate is log2 of the ratio of successive differences.
    """
    e_cm = l1_diff(restrict(mid), coarse)
    e_mf = l1_diff(restrict(fine), mid)
    if e_mf == 0.0:
        return float("inf")
    return float(np.log2(e_cm / e_mf))


def run_convergence(cfg, n_list, field_names=("h", "zb")):
    """Self-convergence study: run at each N, report errors and rates."""
    if len(n_list) < 3:
        raise ConfigError("need at least three resolutions for a rate")
    for a, b in zip(n_list, n_list[1:]):
        if b != 2 * a:
            raise ConfigError(f"resolutions must double: {n_list}")
    solutions = []
    reports = []
    for n in n_list:
        ncfg = replace(cfg, nx=n, ny=n if cfg.ny > 1 else 1,
                       out_dir=str(Path(cfg.out_dir) / f"n{n}"))
        rep = run_case(ncfg)
        reports.append(rep)
        snap = read_snapshot(rep["snapshots"][-1])
        solutions.append(snap)
    table = {"n_list": list(n_list), "fields": {}, "runs": reports}
    for name in field_names:
        errs = []
        for lo, hi in zip(solutions, solutions[1:]):
            fy = 2 if lo[name].shape[0] > 1 else 1
            errs.append(l1_diff(restrict(hi[name], fy=fy), lo[name]))
        rates = [float(np.log2(e0 / e1)) if e1 > 0 else float("inf")
                 for e0, e1 in zip(errs, errs[1:])]
        table["fields"][name] = {"errors": errs, "rates": rates}
    return table


def compare_profile(snapshot_path, data_path, field="eta", row=None):
    """L1 misfit between a snapshot slice and a two-column data file."""
    snap = read_snapshot(snapshot_path)
    if field not in snap:
        raise ConfigError(f"unknown snapshot field '{field}'")
    ny = snap["ny"]
    if row is None:
        row = 0 if ny == 1 else ny // 2
    xs = snap["x"][row]
    vals = snap[field][row]
    data = np.loadtxt(data_path, ndmin=2)
    if data.shape[1] < 2:
        raise ConfigError(f"{data_path}: expected two columns (x, value)")
    interp = np.interp(data[:, 0], xs, vals)
    return float(np.mean(np.abs(interp - data[:, 1])))
