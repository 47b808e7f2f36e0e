"""Semi-discrete flux/fluctuation assembly.

One-sided interface fluctuations of central-upwind type split the
combined flux-difference + path-integral term between the two
neighbouring cells; an in-cell path term accounts for the smooth
variation of the reconstruction inside each cell. Momentum
pressure+topography brackets are evaluated in free-surface form
(g * mean depth * surface-elevation difference), which is
algebraically identical to the flux-difference-plus-path form but
vanishes exactly on still water.
"""

import numpy as np
from dataclasses import dataclass

from .grid import IH, IHU, IHV, IHC, IZB, NCOMP, fill_state_ghosts
from .physics import (ratio, mixture_density, bed_celerity,
                      friction_coefficient, sediment_closures)
from .reconstruction import (state_slopes, extrapolate, hydrostatic_correct,
                             InterfacePair)
from .errors import NumericalFailure

# 3-point Gauss-Legendre rule on [0, 1]
GAUSS3_POINTS = (0.5, 0.5 - np.sqrt(15.0) / 10.0, 0.5 + np.sqrt(15.0) / 10.0)
GAUSS3_WEIGHTS = (8.0 / 18.0, 5.0 / 18.0, 5.0 / 18.0)

QUADRATURES = ("midpoint", "gauss3", "paper1")
RECONSTRUCTIONS = ("aeno", "none")
FRICTION_MODES = ("semi_implicit", "explicit", "none")


@dataclass(frozen=True)
class SchemeOptions:
    reconstruction: str = "aeno"
    quadrature: str = "midpoint"
    density_coupling: bool = False
    noncons: bool = True          # False drops every nonconservative product
    exchange: bool = True         # erosion/deposition source terms
    diffusion: bool = True        # turbulent diffusion of hC
    friction_mode: str = "semi_implicit"
    aeno_l: float = 1.0
    aeno_eps: float = 1.0e-4


@dataclass
class RhsResult:
    rhs: np.ndarray               # (5, ny, nx), interior cells
    a_max: float                  # largest |one-sided speed| in x
    b_max: float                  # same in y
    cf: np.ndarray = None         # friction coefficient, set when the
                                  # integrator applies friction itself


def _quad_nodes(quadrature):
    if quadrature == "midpoint":
        return ((0.5, 1.0),)
    if quadrature == "paper1":
        # single midpoint with the 3-point rule's central weight only
        return ((0.5, 8.0 / 18.0),)
    if quadrature == "gauss3":
        return tuple(zip(GAUSS3_POINTS, GAUSS3_WEIGHTS))
    raise ValueError(f"unknown quadrature '{quadrature}'")


def _bed_speed_star(pair, params, axis, quadrature):
    """Quadrature of the bed-celerity normal component along the path."""
    tot = 0.0
    for s, wgt in _quad_nodes(quadrature):
        ws = (1.0 - s) * pair.wm + s * pair.wp
        ubx, uby = bed_celerity(ws, params)
        tot = tot + wgt * (ubx if axis == 0 else uby)
    return tot


def _coupling_terms(pair, params, axis, quadrature):
    """Mixture-density momentum terms integrated along the path."""
    d_hc = pair.wp[IHC] - pair.wm[IHC]
    d_h = pair.wp[IH] - pair.wm[IH]
    acc = 0.0
    for s, wgt in _quad_nodes(quadrature):
        hs = (1.0 - s) * pair.wm[IH] + s * pair.wp[IH]
        hcs = (1.0 - s) * pair.wm[IHC] + s * pair.wp[IHC]
        cs = ratio(hcs, hs, params.h_cut)
        coef = 0.5 * params.drho / mixture_density(cs, params) \
            * params.g * hs
        acc = acc + wgt * coef * (d_hc - cs * d_h)
    return acc


def path_integral(pair, params, axis, quadrature="midpoint"):
    """Nonconservative path terms between the two interface states.

    Linear path in the conserved components. The topography term in
    the momentum row integrates exactly to g * {{h}} * [zb]; the bed
    row and (optional here: always included) density terms use the
    chosen quadrature. Returns a (5, ...) array.
    """
    out = np.zeros_like(pair.wm)
    imom = IHU if axis == 0 else IHV
    d_zb = pair.wp[IZB] - pair.wm[IZB]
    havg = 0.5 * (pair.wm[IH] + pair.wp[IH])
    out[imom] = params.g * havg * d_zb \
        + _coupling_terms(pair, params, axis, quadrature)
    out[IZB] = _bed_speed_star(pair, params, axis, quadrature) * d_zb
    return out


def resonance_count(w, grid, params):
    """Cells whose bed-wave speed collides with a gravity-wave speed."""
    ii = grid.interior
    wi = w[(slice(None),) + ii]
    h = wi[IH]
    u = ratio(wi[IHU], h, params.h_cut)
    v = ratio(wi[IHV], h, params.h_cut)
    sp = np.sqrt(u * u + v * v)
    ubx, uby = bed_celerity(wi, params)
    ubn = ratio(ubx * u + uby * v, sp, 0.0)
    gh = params.g * np.maximum(h, 0.0)
    hs = np.maximum(h, params.h_cut)
    near_unit_froude = np.abs(1.0 - sp * sp / (params.g * hs)) \
        < params.fr_clamp
    collision = np.abs((sp - ubn) ** 2 - gh) < params.fr_clamp * gh
    flag = (h > params.h_cut) & (collision | near_unit_froude)
    return int(np.count_nonzero(flag))


def wb_topography(pair, params):
    """Momentum topography term rewritten through the depth jump.

    Evaluates -g * {{h}} * [h], the form the interface pressure
    difference collapses to when the free surface is flat; exactly
    zero whenever the corrected interface depths match.
    """
    havg = 0.5 * (pair.wm[IH] + pair.wp[IH])
    return -params.g * havg * (pair.wp[IH] - pair.wm[IH])


def combined_jump(pair, params, axis, opts):
    """Flux difference plus path terms across a pair, surface form.

    The momentum row groups pressure and topography as
    g * {{h}} * (eta+ - eta-), equal to the flux-jump + path-term sum
    for a linear path but exactly zero on a flat surface. Used both at
    interfaces and along each cell's internal reconstruction path.
    """
    if axis == 0:
        qm, qp = pair.wm[IHU], pair.wp[IHU]
        un_m, un_p = pair.um, pair.up
        ut_m, ut_p = pair.vm, pair.vp
        imom, itrn = IHU, IHV
    else:
        qm, qp = pair.wm[IHV], pair.wp[IHV]
        un_m, un_p = pair.vm, pair.vp
        ut_m, ut_p = pair.um, pair.up
        imom, itrn = IHV, IHU

    out = np.empty_like(pair.wm)
    out[IH] = qp - qm
    havg = 0.5 * (pair.wm[IH] + pair.wp[IH])
    adv = qp * un_p - qm * un_m
    if opts.noncons:
        out[imom] = adv + params.g * havg * (pair.eta_p - pair.eta_m)
        if opts.density_coupling:
            out[imom] += _coupling_terms(pair, params, axis, opts.quadrature)
        out[IZB] = _bed_speed_star(pair, params, axis, opts.quadrature) \
            * (pair.wp[IZB] - pair.wm[IZB])
    else:
        # conservative limit: pressure only, bed frozen
        out[imom] = adv + params.g * havg * (pair.wp[IH] - pair.wm[IH])
        out[IZB] = 0.0
    out[itrn] = qp * ut_p - qm * ut_m
    out[IHC] = qp * pair.cp - qm * pair.cm
    return out


def local_speeds(pair, params, axis):
    """One-sided speed bounds a+ >= 0 >= a- at every interface."""
    un_m = pair.um if axis == 0 else pair.vm
    un_p = pair.up if axis == 0 else pair.vp
    c_m = np.sqrt(params.g * pair.wm[IH])
    c_p = np.sqrt(params.g * pair.wp[IH])
    ubx_m, uby_m = bed_celerity(pair.wm, params)
    ubx_p, uby_p = bed_celerity(pair.wp, params)
    ub_m = ubx_m if axis == 0 else uby_m
    ub_p = ubx_p if axis == 0 else uby_p

    ap = np.maximum.reduce([un_m + c_m, un_p + c_p, un_m, un_p,
                            ub_m, ub_p, np.zeros_like(un_m)])
    am = np.minimum.reduce([un_m - c_m, un_p - c_p, un_m, un_p,
                            ub_m, ub_p, np.zeros_like(un_m)])
    return ap, am


def fluctuations(pair, speeds, params, axis, opts):
    """One-sided fluctuations D-, D+ at every interface.

    D- propagates into the left cell, D+ into the right; they sum to
    the combined flux-difference + path term. Degenerate interfaces
    (both speed bounds zero) contribute nothing.
    """
    ap, am = speeds
    comb = combined_jump(pair, params, axis, opts)
    dw = pair.wp - pair.wm
    denom = ap - am
    # degenerate interfaces (a+ = a- = 0) have comb = 0 and lam0 = 0,
    # so a dummy denominator already yields D+- = 0 there
    denom[denom == 0.0] = 1.0
    lam1 = (ap + am) / denom
    lam0 = (-2.0 * ap) * am / denom
    dm = (0.5 * (1.0 - lam1)) * comb
    dm -= (0.5 * lam0) * dw
    dp = comb
    dp -= dm                      # D+ = comb - D- by construction
    return dm, dp


def interface_pairs(w, grid, bc, params, opts):
    """Ghost fill + reconstruction + hydrostatic fix for both axes."""
    fill_state_ghosts(w, grid, bc)
    if opts.reconstruction == "aeno":
        sx, ex = state_slopes(w, grid, 0, opts.aeno_l, opts.aeno_eps)
        sy, ey = state_slopes(w, grid, 1, opts.aeno_l, opts.aeno_eps)
    else:
        sx = np.zeros_like(w)
        ex = np.zeros(w.shape[1:])
        sy, ey = sx, ex
    px = hydrostatic_correct(extrapolate(w, sx, ex, grid, 0), params)
    py = hydrostatic_correct(extrapolate(w, sy, ey, grid, 1), params)
    return px, py


def _cell_pair(pair, axis):
    """Each cell's own left-edge / right-edge states as a pseudo-pair.

    The left edge of cell i is the plus side of interface i-1/2 and
    the right edge the minus side of interface i+1/2, so the in-cell
    path term reuses the interface machinery unchanged.
    """
    if axis == 0:
        sl_m = (slice(None), slice(None), slice(None, -1))
        sl_p = (slice(None), slice(None), slice(1, None))
    else:
        sl_m = (slice(None), slice(None, -1), slice(None))
        sl_p = (slice(None), slice(1, None), slice(None))
    return InterfacePair(
        wm=pair.wp[sl_m], wp=pair.wm[sl_p],
        eta_m=pair.eta_p[sl_m[1:]], eta_p=pair.eta_m[sl_p[1:]],
        um=pair.up[sl_m[1:]], vm=pair.vp[sl_m[1:]], cm=pair.cp[sl_m[1:]],
        up=pair.um[sl_p[1:]], vp=pair.vm[sl_p[1:]], cp=pair.cm[sl_p[1:]])


def discrete_sources(w, grid, params, opts):
    """Erosion/deposition exchange and hC diffusion source array."""
    g0 = grid.ghost_width
    ny, nx = grid.ny, grid.nx
    ii = grid.interior
    src = np.zeros((NCOMP, ny, nx))

    if opts.exchange:
        wi = w[(slice(None),) + ii]
        cl = sediment_closures(wi, params)
        ed = cl.erosion - cl.deposition
        fac = ed / (1.0 - params.porosity)
        u = ratio(wi[IHU], wi[IH], params.h_cut)
        v = ratio(wi[IHV], wi[IH], params.h_cut)
        src[IH] += fac
        src[IHU] -= fac * u
        src[IHV] -= fac * v
        src[IHC] += ed
        src[IZB] -= fac

    if opts.diffusion:
        cl_all = sediment_closures(w, params)
        f = cl_all.f_s * w[IH] * params.nu_m
        conc = ratio(w[IHC], w[IH], params.h_cut)
        rows = slice(g0, g0 + ny)
        cols = slice(g0, g0 + nx)
        cl_ = slice(g0 - 1, g0 + nx)
        cr_ = slice(g0, g0 + nx + 1)
        fx = 0.5 * (f[rows, cl_] + f[rows, cr_]) \
            * (conc[rows, cr_] - conc[rows, cl_]) / grid.dx
        src[IHC] += (fx[:, 1:] - fx[:, :-1]) / grid.dx
        rl_ = slice(g0 - 1, g0 + ny)
        rr_ = slice(g0, g0 + ny + 1)
        fy = 0.5 * (f[rl_, cols] + f[rr_, cols]) \
            * (conc[rr_, cols] - conc[rl_, cols]) / grid.dy
        src[IHC] += (fy[1:, :] - fy[:-1, :]) / grid.dy

    if opts.friction_mode == "explicit":
        wi = w[(slice(None),) + ii]
        cf = friction_coefficient(wi[IH], params)
        u = ratio(wi[IHU], wi[IH], params.h_cut)
        v = ratio(wi[IHV], wi[IH], params.h_cut)
        sp = np.sqrt(u * u + v * v)
        src[IHU] -= cf * u * sp
        src[IHV] -= cf * v * sp

    return src


def assemble_rhs(w, grid, bc, params, opts):
    """Full semi-discrete right-hand side over the interior cells.

    Fills ghosts in place, reconstructs, corrects, and combines
    interface fluctuations, in-cell path terms and sources. Raises
    NumericalFailure if anything non-finite shows up.
    """
    px, py = interface_pairs(w, grid, bc, params, opts)
    spx = local_speeds(px, params, 0)
    spy = local_speeds(py, params, 1)
    dmx, dpx = fluctuations(px, spx, params, 0, opts)
    dmy, dpy = fluctuations(py, spy, params, 1, opts)
    cellx = combined_jump(_cell_pair(px, 0), params, 0, opts)
    celly = combined_jump(_cell_pair(py, 1), params, 1, opts)

    rhs = dmx[:, :, 1:] + dpx[:, :, :-1]
    rhs += cellx
    rhs *= -1.0 / grid.dx
    acc = dmy[:, 1:, :] + dpy[:, :-1, :]
    acc += celly
    acc *= -1.0 / grid.dy
    rhs += acc

    if opts.exchange or opts.diffusion or opts.friction_mode == "explicit":
        rhs += discrete_sources(w, grid, params, opts)

    cf = None
    if opts.friction_mode == "semi_implicit":
        cf = friction_coefficient(w[IH][grid.interior], params)

    if not np.all(np.isfinite(rhs)):
        bad = np.argwhere(~np.isfinite(rhs))
        comp, k, i = bad[0]
        raise NumericalFailure(
            f"non-finite right-hand side in component {comp} "
            f"at cell (row {k}, col {i})", cell=(int(k), int(i)),
            component=int(comp))

    a_max = float(max(spx[0].max(), -spx[1].min())) if spx[0].size else 0.0
    b_max = float(max(spy[0].max(), -spy[1].min())) if spy[0].size else 0.0
    return RhsResult(rhs=rhs, a_max=a_max, b_max=b_max, cf=cf)
