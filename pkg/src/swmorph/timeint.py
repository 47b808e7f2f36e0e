"""Time stepping: CFL control, SSP-RK2 stages and the run loop."""

import time as _time

import numpy as np
from dataclasses import dataclass, field

from .grid import IH, IHU, IHV, IHC
from .physics import ratio, energy_diagnostic
from .scheme import assemble_rhs, resonance_count
from .errors import NumericalFailure

_T_SNAP = 1.0e-12   # relative tolerance for hitting output times


@dataclass
class StepLog:
    """Per-step diagnostics collected by advance_to."""
    t: list = field(default_factory=list)
    dt: list = field(default_factory=list)
    a_max: list = field(default_factory=list)
    b_max: list = field(default_factory=list)
    min_h_prefloor: list = field(default_factory=list)
    floor_clip: list = field(default_factory=list)
    resonance_cells: list = field(default_factory=list)
    energy: list = field(default_factory=list)   # (t, E) samples
    wall_time: float = 0.0

    @property
    def nsteps(self):
        return len(self.dt)

    def summary(self):
        return {
            "nsteps": self.nsteps,
            "wall_time": self.wall_time,
            "min_h_prefloor": min(self.min_h_prefloor, default=0.0),
            "max_floor_clip": max(self.floor_clip, default=0.0),
            "resonance_total": int(sum(self.resonance_cells)),
            "energy": [list(pair) for pair in self.energy],
        }


def dt_from_speeds(a_max, b_max, grid, cfl, dt_max):
    """CFL time step from the one-sided speed bounds.

    The quarter factor reflects the two-stage splitting of the update
    between the interface and in-cell contributions on both sides.
    Quiescent states (no wave speeds at all) fall back to dt_max.
    """
    dt = dt_max
    if a_max > 0.0:
        dt = min(dt, cfl * grid.dx / (4.0 * a_max))
    if b_max > 0.0:
        dt = min(dt, cfl * grid.dy / (4.0 * b_max))
    return dt


def compute_dt(w, grid, bc, params, opts, cfl, dt_max=0.1):
    """One-off CFL step for a given state (assembles to get speeds)."""
    res = assemble_rhs(w, grid, bc, params, opts)
    return dt_from_speeds(res.a_max, res.b_max, grid, cfl, dt_max)


def _apply_fixups(w, grid, params, dt=None, cf=None):
    """Positivity floor, dry-cell zeroing and optional friction decay.

    Returns (min_h_prefloor, clip) where clip is the largest negative
    depth magnitude the floor removed.
    """
    ii = grid.interior
    h = w[IH][ii]
    min_pre = float(h.min())
    clip = max(0.0, -min_pre)
    np.maximum(h, 0.0, out=h)
    dry = h <= params.h_cut
    if np.any(dry):
        w[IHU][ii][dry] = 0.0
        w[IHV][ii][dry] = 0.0
        w[IHC][ii][dry] = 0.0
    if cf is not None and dt is not None:
        hu = w[IHU][ii]
        hv = w[IHV][ii]
        u = ratio(hu, h, params.h_cut)
        v = ratio(hv, h, params.h_cut)
        sp = np.sqrt(u * u + v * v)
        decay = 1.0 / (1.0 + dt * cf * ratio(sp, h, params.h_cut))
        hu *= decay
        hv *= decay
    return min_pre, clip


def euler_stage(w, dt, res, grid, params):
    """Forward-Euler stage with positivity fixups; returns a new array."""
    wn = w.copy()
    sl = (slice(None),) + grid.interior
    wn[sl] = w[sl] + dt * res.rhs
    min_pre, clip = _apply_fixups(wn, grid, params, dt=dt, cf=res.cf)
    return wn, min_pre, clip


def ssp_rk2_step(w, dt, res1, rhs_fn, grid, params):
    """Heun step: convex average of two Euler stages.

    res1 must be the assembly at w (its speeds also set dt). Returns
    (next state, stage-2 assembly result, min_h_prefloor, floor_clip).
    """
    w1, pre1, clip1 = euler_stage(w, dt, res1, grid, params)
    res2 = rhs_fn(w1)
    w2, pre2, clip2 = euler_stage(w1, dt, res2, grid, params)
    wn = w.copy()
    sl = (slice(None),) + grid.interior
    wn[sl] = 0.5 * (w[sl] + w2[sl])
    _apply_fixups(wn, grid, params)
    return wn, res2, min(pre1, pre2), max(clip1, clip2)


@dataclass(frozen=True)
class StepControl:
    cfl: float = 0.5
    t_end: float = 1.0
    dt_max: float = 0.1
    max_steps: int = 1_000_000


def advance_to(w, grid, bc, params, opts, control,
               snapshot_times=(), on_snapshot=None, t0=0.0):
    """March the state from t0 to control.t_end.

    Snapshot times are hit exactly (the step is shortened); on_snapshot
    is called as on_snapshot(t, w, log) after the state reaches each
    one and at t_end. Returns (final state, StepLog).
    """
    started = _time.perf_counter()
    log = StepLog()
    t = float(t0)
    t_end = float(control.t_end)
    scale = max(1.0, abs(t_end))
    # strictly interior snapshot times; t_end itself is always emitted
    pending = sorted(s for s in snapshot_times
                     if t0 + _T_SNAP * scale < s < t_end - _T_SNAP * scale)
    log.energy.append((t, energy_diagnostic(w, grid, params)))

    def rhs_fn(state):
        return assemble_rhs(state, grid, bc, params, opts)

    while t < t_end - _T_SNAP * scale:
        if log.nsteps >= control.max_steps:
            raise NumericalFailure(
                f"exceeded max_steps={control.max_steps} at t={t:.6g}",
                t=t, step=log.nsteps)
        res = rhs_fn(w)
        dt = dt_from_speeds(res.a_max, res.b_max, grid, control.cfl,
                            control.dt_max)
        target = pending[0] if pending else t_end
        dt = min(dt, t_end - t, target - t)
        if not np.isfinite(dt) or dt <= 0.0:
            raise NumericalFailure(f"time step collapsed to {dt} at t={t:.6g}",
                                   t=t, step=log.nsteps)
        w, res2, min_pre, clip = ssp_rk2_step(w, dt, res, rhs_fn, grid,
                                              params)
        t = t + dt
        log.t.append(t)
        log.dt.append(dt)
        log.a_max.append(max(res.a_max, res2.a_max))
        log.b_max.append(max(res.b_max, res2.b_max))
        log.min_h_prefloor.append(min_pre)
        log.floor_clip.append(clip)
        log.resonance_cells.append(resonance_count(w, grid, params))
        if pending and t >= pending[0] - _T_SNAP * scale:
            t = pending.pop(0)
            log.energy.append((t, energy_diagnostic(w, grid, params)))
            if on_snapshot is not None:
                on_snapshot(t, w, log)

    log.energy.append((t_end, energy_diagnostic(w, grid, params)))
    if on_snapshot is not None:
        on_snapshot(t_end, w, log)
    log.wall_time = _time.perf_counter() - started
    return w, log
