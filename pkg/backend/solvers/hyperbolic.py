"""
Finite-volume stepping for the long-wave equations.

Burgers with source: v_t + (v^2)_x = eps (|u|^2)_x
Linear transport:    v_t + (coeff v)_x = source

The linearized long wave is a measure v = v_tilde + Psi(t) delta_Sigma. In
decomposed mode v_tilde lives off x = 0 and Psi is driven by the flux jump
    J(t) = 2 phi(0+) v_tilde(0+) - 2 phi(0-) v_tilde(0-),   Psi' = -J.
The center node is a bookkeeping slot: whatever it holds (the initial
sample, the source landing on it) is handed to Psi by the next transport
step, so h sum(v_tilde) + Psi changes only through the source.
Psi never multiplies phi anywhere below, which is the product rule
phi delta_Sigma := 0.
"""
import logging
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np
from scipy.integrate import trapezoid

from numerics import (
    HorizonError,
    StepSizeError,
    TimeSeries,
    UnsupportedParameterError,
    check_field,
    dx_central,
    solve_tridiagonal,
)

logger = logging.getLogger(__name__)

# relative slack on CFL comparisons so dt = h/c exactly is admissible
_CFL_SLACK = 1e-12


@dataclass(frozen=True, eq=False)
class MeasureSolution:
    """
    v_tilde plus the amplitude series of the Dirac part on Sigma.

    psi is owned by the solution chain and appended in place by
    psi_update; last_jump is J at psi's last time. absorbed is the mass the
    last transport step moved out of the center slot, still owed to Psi.
    phi_traces, when known, fixes the Sigma-face speeds 2 phi(0-+).
    """
    v_tilde: np.ndarray
    psi: TimeSeries
    last_jump: float = 0.0
    decomposed: bool = True
    phi_traces: Optional[tuple] = None
    absorbed: float = 0.0

    @property
    def t(self):
        return self.psi.last_t

    @property
    def psi_now(self):
        return self.psi.last

    @classmethod
    def from_data(cls, v0, grid, phi_traces=None, decomposed=True):
        v_tilde = np.array(check_field(v0, grid, 'v0'), dtype=float)
        traces_known = decomposed and phi_traces is not None
        ms = cls(v_tilde, TimeSeries.starting_at(0.0), 0.0, decomposed,
                 tuple(map(float, phi_traces)) if traces_known else None)
        if traces_known:
            ms = replace(ms, last_jump=jump_source(ms, phi_traces, grid))
        return ms


def _check_cfl(dt, max_speed, h, factor=1.0):
    if max_speed <= 0:
        return
    dt_max = h / (factor * max_speed)
    if dt > dt_max * (1 + _CFL_SLACK):
        raise StepSizeError(max_speed, dt, dt_max)
    logger.debug("CFL margin dt/dt_max = %.3f", dt / dt_max)


def lf_step_burgers(v, u, dt, eps, grid):
    """
    One conservative Lax-Friedrichs step for v_t + (v^2)_x = eps (|u|^2)_x.

    The source is central-differenced; endpoints copy their neighbors.
    Requires dt <= h / (2 max|v|).
    """
    v = check_field(v, grid, 'v')
    _check_cfl(dt, float(np.max(np.abs(v))), grid.h, factor=2.0)
    flux = v * v
    new = v.copy()
    new[1:-1] = 0.5 * (v[:-2] + v[2:]) - dt / (2 * grid.h) * (flux[2:] - flux[:-2])
    if eps != 0 and u is not None:
        source = eps * dx_central(np.abs(check_field(u, grid, 'u')) ** 2, grid)
        new[1:-1] += dt * source[1:-1]
    new[0], new[-1] = new[1], new[-2]
    return new


def explicit_v_eps0(v0, t, grid):
    """
    Exact eps = 0 measure solution for coeff = -2 sgn(x).

    v_tilde(t, x) = v0(x - 2t) for x < 0 and v0(x + 2t) for x > 0 (linear
    interpolation of the samples); Psi(t) = int_{-2t}^{2t} v0 dx.
    """
    v0 = check_field(v0, grid, 'v0')
    if t < 0:
        raise HorizonError(f"time must be nonnegative, got {t}")
    reach = 2.0 * t
    if reach > grid.x_max:
        raise HorizonError(f"2t = {reach:.6g} exceeds the half-width {grid.x_max:.6g}")
    x = grid.x
    left = x < 0
    right = x > 0
    v_tilde = np.zeros(grid.n_nodes)
    v_tilde[left] = np.interp(x[left] - reach, x, v0)
    v_tilde[right] = np.interp(x[right] + reach, x, v0)

    psi = TimeSeries.starting_at(0.0)
    if t > 0:
        inside = (x > -reach) & (x < reach)
        nodes = np.concatenate(([-reach], x[inside], [reach]))
        psi.append(t, trapezoid(np.interp(nodes, x, v0), nodes))
    return MeasureSolution(v_tilde, psi)


def _check_entropy_orientation(coeff, grid):
    mid = grid.center
    if not (coeff[mid - 1] > 0 > coeff[mid + 1]):
        raise UnsupportedParameterError(
            "decomposed transport needs characteristics entering Sigma: "
            f"coeff(0-)={coeff[mid - 1]:.6g}, coeff(0+)={coeff[mid + 1]:.6g}"
        )


def _face_fluxes(vt, coeff):
    """Local Lax-Friedrichs fluxes on the n - 1 faces; face k sits between nodes k and k + 1"""
    flux = coeff * vt
    speed = np.maximum(np.abs(coeff[:-1]), np.abs(coeff[1:]))
    return 0.5 * (flux[:-1] + flux[1:]) - 0.5 * speed * (vt[1:] - vt[:-1])


def _sigma_speeds(ms, coeff, grid):
    """(2 phi(0-), 2 phi(0+)), extrapolated from coeff when ms carries no traces"""
    if ms.phi_traces is not None:
        phi_left, phi_right = ms.phi_traces
        return 2.0 * phi_left, 2.0 * phi_right
    mid = grid.center
    return 2.0 * coeff[mid - 1] - coeff[mid - 2], 2.0 * coeff[mid + 1] - coeff[mid + 2]


def _close_sigma(ms, new, face, coeff, source, dt, grid):
    """
    Flank nodes of x = 0 in decomposed mode.

    The two faces touching Sigma carry the trace fluxes 2 phi(0-+) v_tilde(0-+)
    of jump_source, averaged over the old and new time levels. The new level
    is implicit in the flank node only, so the mass leaving v_tilde is exactly
    the dt (J(t) + J(t + dt)) / 2 that psi_update takes off Psi.
    """
    _check_entropy_orientation(coeff, grid)
    vt = ms.v_tilde
    mid = grid.center
    lam = dt / grid.h
    a_left, a_right = _sigma_speeds(ms, coeff, grid)
    v_left, v_right = traces(ms, grid)
    gain = np.zeros(grid.n_nodes) if source is None else dt * source

    # a_left > 0 > a_right, so both divisors exceed one
    rhs = vt[mid - 1] + gain[mid - 1] + lam * face[mid - 2] - 0.5 * lam * a_left * (v_left - new[mid - 2])
    new[mid - 1] = rhs / (1.0 + lam * a_left)
    rhs = vt[mid + 1] + gain[mid + 1] - lam * face[mid + 1] + 0.5 * lam * a_right * (v_right - new[mid + 2])
    new[mid + 1] = rhs / (1.0 - lam * a_right)

    absorbed = grid.h * (vt[mid] + gain[mid])
    new[mid] = 0.0
    return replace(ms, v_tilde=new, absorbed=ms.absorbed + absorbed)


def lf_step_linear(ms, coeff, source, dt, grid):
    """
    Conservative step for v_t + (coeff v)_x = source with local
    Lax-Friedrichs (Rusanov) face fluxes, exact shift at Courant number one.

    In decomposed mode both characteristic families must point into Sigma;
    the flank nodes close on the trace fluxes (see _close_sigma) and the
    center slot is emptied. Psi is advanced separately by psi_update.
    """
    vt = ms.v_tilde
    coeff = check_field(coeff, grid, 'coeff')
    _check_cfl(dt, float(np.max(np.abs(coeff))), grid.h)
    lam = dt / grid.h
    face = _face_fluxes(vt, coeff)

    new = vt.copy()
    new[1:-1] = vt[1:-1] - lam * (face[1:] - face[:-1])
    if source is not None:
        source = check_field(source, grid, 'source')
        new[1:-1] += dt * source[1:-1]
    new[0], new[-1] = new[1], new[-2]
    if ms.decomposed:
        return _close_sigma(ms, new, face, coeff, source, dt, grid)
    return replace(ms, v_tilde=new)


def cn_transport_step(ms, coeff, source, dt, grid):
    """
    Centered Crank-Nicolson step for v_t + (coeff v)_x = source.

    Non-dissipative, with zero endpoint values; regularized mode only.
    """
    if ms.decomposed:
        raise UnsupportedParameterError("centered transport has no one-sided treatment of Sigma")
    vt = ms.v_tilde
    c = check_field(coeff, grid, 'coeff')
    beta = dt / (4.0 * grid.h)
    rhs = vt[1:-1] - beta * (c[2:] * vt[2:] - c[:-2] * vt[:-2])
    if source is not None:
        rhs = rhs + dt * check_field(source, grid, 'source')[1:-1]
    new = np.zeros_like(vt)
    new[1:-1] = solve_tridiagonal(-beta * c[:-2], 1.0, beta * c[2:], rhs)
    return replace(ms, v_tilde=new)


def traces(ms, grid):
    """One-sided limits at x = 0 by linear extrapolation from two nodes per side"""
    vt = ms.v_tilde
    mid = grid.center
    v_left = 2.0 * vt[mid - 1] - vt[mid - 2]
    v_right = 2.0 * vt[mid + 1] - vt[mid + 2]
    return float(v_left), float(v_right)


def jump_source(ms, phi_traces, grid):
    """J = 2 phi(0+) v_tilde(0+) - 2 phi(0-) v_tilde(0-); phi_traces = (phi(0-), phi(0+))"""
    phi_left, phi_right = phi_traces
    v_left, v_right = traces(ms, grid)
    return 2.0 * phi_right * v_right - 2.0 * phi_left * v_left


def psi_update(ms, dt, phi_traces, grid):
    """
    Append Psi(t + dt) = Psi(t) - dt (J(t) + J(t + dt)) / 2 plus any mass the
    transport step moved out of the center slot.

    ms carries v_tilde already advanced to t + dt and J(t) in last_jump.
    """
    jump = jump_source(ms, phi_traces, grid)
    ms.psi.append(ms.t + dt, ms.psi_now - 0.5 * dt * (ms.last_jump + jump) + ms.absorbed)
    return replace(ms, last_jump=jump, absorbed=0.0)
