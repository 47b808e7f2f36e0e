"""Physical fluxes, closures and characteristic speeds.

All functions are vectorized: state arguments are arrays shaped
(5, ...) with components h, hu, hv, hC, zb, or broadcastable scalars.
"""

import numpy as np
from dataclasses import dataclass

from .grid import IH, IHU, IHV, IHC, IZB, NCOMP


@dataclass(frozen=True)
class PhysParams:
    """Physical constants and closure parameters.

    Defaults are the reference values used by the bundled test cases.
    """
    g: float = 9.8
    rho_w: float = 1000.0       # clear-water density
    rho_s: float = 2650.0       # sediment grain density
    porosity: float = 0.4       # bed porosity p
    n_manning: float = 0.028    # Manning roughness
    d50: float = 0.001          # median grain diameter
    nu: float = 0.000012        # kinematic viscosity of water
    phi_e: float = 0.015        # erosion rate coefficient
    m_hindered: float = 2.0     # hindered-settling exponent
    kappa: float = 0.4          # von Karman constant
    nu_m: float = 1.0e-6        # turbulent diffusivity of sediment
    grass_a: float = 0.001      # bedload transport coefficient
    grass_b: float = 3.0        # bedload transport exponent
    fr_clamp: float = 1.0e-3    # floor on |1 - Fr^2| in bed celerity
    h_cut: float = 1.0e-10      # dry tolerance for velocity ratios
    fs_at_rest: float = 1.0     # suspended-flux shape factor at u* = 0

    @property
    def s_rel(self):
        """Submerged specific gravity s = rho_s/rho_w - 1."""
        return self.rho_s / self.rho_w - 1.0

    @property
    def drho(self):
        return self.rho_s - self.rho_w


def ratio(q, h, h_cut):
    """q/h where h > h_cut, else 0. Safe on h = 0."""
    q = np.asarray(q, dtype=float)
    h = np.asarray(h, dtype=float)
    out = np.zeros(np.broadcast(q, h).shape)
    np.divide(q, h, out=out, where=h > h_cut)
    return out


def _ipow(x, p):
    """x**p, unrolled for small integer exponents (pow is slow)."""
    ip = int(p)
    if p == ip and 1 <= ip <= 4:
        out = x
        for _ in range(ip - 1):
            out = out * x
        return out
    return x ** p


def _speed(u, v):
    return np.sqrt(u * u + v * v)


def mixture_density(C, params):
    """Density of the water-sediment mixture for concentration C."""
    C = np.asarray(C, dtype=float)
    return params.rho_w * (1.0 - C) + params.rho_s * C


def primitive(w, params):
    """Velocities and concentration (u, v, C) from a conserved state."""
    h = w[IH]
    u = ratio(w[IHU], h, params.h_cut)
    v = ratio(w[IHV], h, params.h_cut)
    C = ratio(w[IHC], h, params.h_cut)
    return u, v, C


def flux(w, axis, params):
    """Advective + pressure flux along axis 0 (x) or 1 (y).

    The bed component carries no flux; its evolution is purely
    nonconservative plus sources.
    """
    h = w[IH]
    u, v, C = primitive(w, params)
    pressure = 0.5 * params.g * h * h
    out = np.zeros((NCOMP,) + np.shape(h))
    if axis == 0:
        out[IH] = w[IHU]
        out[IHU] = w[IHU] * u + pressure
        out[IHV] = w[IHU] * v
        out[IHC] = w[IHU] * C
    else:
        out[IH] = w[IHV]
        out[IHU] = w[IHV] * u
        out[IHV] = w[IHV] * v + pressure
        out[IHC] = w[IHV] * C
    return out


def noncons_vectors(w, params):
    """Coefficient vectors of the three nonconservative products per axis.

    Returns (b1x, b2x, b3x, b1y, b2y, b3y), each shaped like w. b1
    multiplies the bed gradient (topography + bed advection), b2 the
    gradient of hC and b3 the gradient of h (both from mixture-density
    variation in the momentum equations).
    """
    h = w[IH]
    u, v, C = primitive(w, params)
    rho = mixture_density(C, params)
    half_ratio = 0.5 * params.drho / rho
    gh = params.g * h
    ubx, uby = bed_celerity(w, params)

    shape = (NCOMP,) + np.shape(h)
    b1x = np.zeros(shape); b2x = np.zeros(shape); b3x = np.zeros(shape)
    b1y = np.zeros(shape); b2y = np.zeros(shape); b3y = np.zeros(shape)

    b1x[IHU] = gh
    b1x[IZB] = ubx
    b2x[IHU] = half_ratio * gh
    b3x[IHU] = -half_ratio * gh * C

    b1y[IHV] = gh
    b1y[IZB] = uby
    b2y[IHV] = half_ratio * gh
    b3y[IHV] = -half_ratio * gh * C
    return b1x, b2x, b3x, b1y, b2y, b3y


def bed_celerity(w, params):
    """Advection velocity (x, y) of bed perturbations.

    Derived from the bedload law Qb = a*|u|^b at fixed water discharge;
    the 1 - Fr^2 denominator is clamped away from zero, and quiescent
    or dry cells get zero celerity.
    """
    h = w[IH]
    u = ratio(w[IHU], h, params.h_cut)
    v = ratio(w[IHV], h, params.h_cut)
    unorm = _speed(u, v)
    wet = (h > params.h_cut) & (unorm > 0.0)
    hs = np.maximum(h, params.h_cut)

    dqb_dh = -params.grass_b * params.grass_a * _ipow(unorm, params.grass_b) \
        / hs
    fr2 = unorm * unorm / (params.g * hs)
    denom = 1.0 - fr2
    denom = np.where(np.abs(denom) < params.fr_clamp,
                     np.where(denom < 0.0, -params.fr_clamp, params.fr_clamp),
                     denom)
    mag = dqb_dh / ((1.0 - params.porosity) * denom)
    scale = np.zeros(np.shape(unorm))
    np.divide(mag, unorm, out=scale, where=wet)
    return np.where(wet, scale * u, 0.0), np.where(wet, scale * v, 0.0)


def eigenvalues(w, normal, params):
    """Characteristic speeds along a unit normal, plus a resonance flag.

    Returns (lams, flag): lams has shape (5, ...) ordered as
    (bed celerity, contact, contact, u - c, u + c); flag marks cells
    where the bed-wave speed collides with a gravity-wave speed or the
    flow sits inside the clamped band around critical Froude number.
    """
    nx_, ny_ = normal
    h = w[IH]
    u, v, _ = primitive(w, params)
    un = u * nx_ + v * ny_
    ubx, uby = bed_celerity(w, params)
    ubn = ubx * nx_ + uby * ny_
    c = np.sqrt(params.g * np.maximum(h, 0.0))
    lams = np.stack(np.broadcast_arrays(ubn, un, un, un - c, un + c))
    gh = params.g * np.maximum(h, 0.0)
    hs = np.maximum(h, params.h_cut)
    near_unit_froude = \
        np.abs(1.0 - (u * u + v * v) / (params.g * hs)) < params.fr_clamp
    collision = np.abs((un - ubn) ** 2 - gh) < params.fr_clamp * gh
    flag = (collision | near_unit_froude) & (h > params.h_cut)
    return lams, flag


def friction_coefficient(h, params):
    """Manning friction coefficient Cf = n^2 g h^(-1/3) (floored depth)."""
    hs = np.maximum(np.asarray(h, dtype=float), params.h_cut)
    return params.n_manning ** 2 * params.g / np.cbrt(hs)


@dataclass
class SedimentClosures:
    """Per-cell erosion/deposition closure bundle."""
    u_star: np.ndarray
    theta: np.ndarray
    f_s: np.ndarray
    c_a: np.ndarray
    erosion: np.ndarray
    deposition: np.ndarray
    theta_cr: float = 0.0
    d_star: float = 0.0
    w_s: float = 0.0


def settling_velocity(params):
    """Terminal settling velocity of a single grain (Zhang's fit)."""
    a = 13.95 * params.nu / params.d50
    return np.sqrt(a * a + 1.09 * params.s_rel * params.g * params.d50) - a


def sediment_closures(w, params):
    """Erosion/deposition rates and the intermediate closure fields."""
    h = w[IH]
    u, v, C = primitive(w, params)
    unorm = _speed(u, v)
    hs = np.maximum(h, params.h_cut)

    s = params.s_rel
    d_star = params.d50 * (s * params.g / params.nu ** 2) ** (1.0 / 3.0)
    theta_cr = 0.3 / (1.0 + 1.2 * d_star) \
        + 0.055 * (1.0 - np.exp(-0.02 * d_star))
    w_s = settling_velocity(params)

    cf = friction_coefficient(h, params)
    u_star = np.sqrt(cf) * unorm
    theta = u_star * u_star / (params.g * s * params.d50)

    # Rouse-profile shape factor for the suspended flux; the neutral
    # value at u* = 0 is a convention (no flux there anyway).
    moving = u_star > 0.0
    z_rouse = np.divide(w_s, params.kappa * np.maximum(u_star, 1e-300),
                        out=np.full(np.shape(u_star), np.inf), where=moving)
    f_s = np.minimum(1.0, 2.5 * np.exp(-z_rouse))
    f_s = np.where(moving, f_s, params.fs_at_rest)

    has_c = C > 0.0
    alpha_c = np.minimum(
        2.0, np.divide((1.0 - params.porosity), np.maximum(C, 1e-300),
                       out=np.full(np.shape(C), np.inf), where=has_c))
    c_a = np.where(has_c, alpha_c * C, 0.0)

    erosion = np.where(
        (theta >= theta_cr) & (h > params.h_cut),
        params.phi_e * (theta - theta_cr) * unorm
        * params.d50 ** -0.2 / hs,
        0.0)
    deposition = w_s * _ipow(1.0 - c_a, params.m_hindered) * c_a

    return SedimentClosures(u_star=u_star, theta=theta, f_s=f_s, c_a=c_a,
                            erosion=erosion, deposition=deposition,
                            theta_cr=float(theta_cr), d_star=float(d_star),
                            w_s=float(w_s))


def energy_diagnostic(w, grid, params):
    """Total mechanical energy over interior cells (kinetic + potential)."""
    ii = grid.interior
    h = w[IH][ii]
    u = ratio(w[IHU][ii], h, params.h_cut)
    v = ratio(w[IHV][ii], h, params.h_cut)
    zb = w[IZB][ii]
    dens = 0.5 * h * (u * u + v * v) + 0.5 * params.g * h * h \
        + params.g * h * zb
    return float(np.sum(dens) * grid.dx * grid.dy)
