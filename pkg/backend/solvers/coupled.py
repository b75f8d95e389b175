"""
Split time loops for the coupled short-wave / long-wave systems.

    full:        i u_t + u_xx = v u - eps |u|^2 u,  v_t + (v^2)_x = eps (|u|^2)_x
    linearized:  i u_t + u_xx = (phi + b - 2 eps r^2) u - eps r^2 conj(u) + v r
                 v_t + 2 (phi v)_x = 2 eps (r Re u)_x

Strang splitting is half long-wave / full Schrodinger / half long-wave;
Lie splitting is full long-wave then full Schrodinger.
"""
import logging
from dataclasses import dataclass, field
from typing import Any

import numpy as np
import pandas as pd

import config as cfg_defaults
from numerics import (
    DivergenceError,
    DomainError,
    SimulationError,
    TimeSeries,
    check_field,
    discrete_delta,
    dx_central,
    h1_norm,
    h_minus1_norm,
    integrate,
    l2_norm,
    mollifier,
)
from .hyperbolic import (
    MeasureSolution,
    cn_transport_step,
    explicit_v_eps0,
    lf_step_burgers,
    lf_step_linear,
    psi_update,
)
from .reference_wave import build_reference_wave, closed_form_r
from .schrodinger import (
    SchrodingerProblem,
    boundary_mass_flux,
    cn_step,
    energy_diagnostic,
    mass,
    nls_energy,
)

logger = logging.getLogger(__name__)

NORM_COLUMNS = ('mass', 'h1_u', 'l2_vtilde', 'hm1_v', 'energy', 'shock_energy')

# full runs fill the same columns from the whole long wave v (there is no measure part)
FULL_RUN_NOTES = (
    "Full run: column l2_vtilde holds ||v||_2 of the whole long wave.",
    "Full run: column shock_energy holds int |v(0)| (v - v(0))^2 dx, the weighted distance from the initial long wave.",
)


@dataclass(frozen=True, eq=False)
class FullState:
    u: np.ndarray
    v: np.ndarray
    t: float


@dataclass(frozen=True, eq=False)
class LinearizedState:
    u: np.ndarray
    v: MeasureSolution
    t: float


@dataclass(frozen=True, eq=False)
class Snapshot:
    """Fields at one output time; psi is the measure amplitude then (0 for full runs)"""
    t: float
    u: np.ndarray
    v: np.ndarray
    psi: float = 0.0


@dataclass(eq=False)
class RunBundle:
    state: Any = None
    norms: dict = field(default_factory=lambda: {name: TimeSeries() for name in NORM_COLUMNS})
    snapshots: list = field(default_factory=list)
    steps: int = 0
    # cumulative mass entering through Dirichlet endpoints (full runs)
    boundary_flux: TimeSeries = field(default_factory=TimeSeries)

    @property
    def times(self):
        return self.norms['mass'].t

    def record(self, t, values):
        for name in NORM_COLUMNS:
            value = values[name]
            if not np.isfinite(value):
                raise DivergenceError(f"norm {name} is not finite", t=t)
            self.norms[name].append(t, value)

    def norms_frame(self):
        frame = pd.DataFrame({'t': self.times})
        for name in NORM_COLUMNS:
            frame[name] = self.norms[name].values
        return frame

    def sup(self, name):
        return float(np.max(np.abs(self.norms[name].values)))


def weighted_shock_energy(ms, phi, grid):
    """int |phi| v_tilde^2 dx, x = 0 node excluded"""
    weight = np.abs(check_field(phi, grid, 'phi')).astype(float)
    weight[grid.center] = 0.0
    return float(integrate(weight * ms.v_tilde ** 2, grid))


def _time_grid(cfg):
    steps = max(1, int(round(cfg.T / cfg.dt)))
    return steps, cfg.T / steps


def _is_output_step(n, steps, every):
    return n == 0 or n == steps or n % every == 0


def _check_state(u, v, grid, step, t, u_contained=True, v_contained=False):
    if not (np.all(np.isfinite(u)) and np.all(np.isfinite(v))):
        raise DivergenceError("non-finite field", step=step, t=t)
    tol = cfg_defaults.BOUNDARY_TOL
    if u_contained and max(abs(u[1]), abs(u[-2])) >= tol:
        raise DivergenceError("u support reached the boundary", step=step, t=t)
    if v_contained and max(abs(v[1]), abs(v[-2])) >= tol:
        raise DivergenceError("v support reached the boundary", step=step, t=t)


def _run_steps(name, steps, advance):
    """Call advance(n) for n = 1..steps, logging the failing step before re-raising"""
    for n in range(1, steps + 1):
        try:
            advance(n)
        except SimulationError as exc:
            logger.error("%s run failed at step %d: %s", name, n, exc)
            raise


# ---------------------------------------------------------------------------
# Full nonlinear system
# ---------------------------------------------------------------------------

def run_full(cfg, u0, v0, observers=(), boundary=None, keep_snapshots=False):
    """
    Advance the full nonlinear system to cfg.T.

    Args:
        cfg: SimConfig
        u0, v0: initial short and long waves
        observers: callables observer(state, step) invoked at output steps
        boundary: optional boundary(t) -> (u_left, u_right) Dirichlet data
            for u, needed when u0 does not vanish at the ends
        keep_snapshots: store Snapshot copies at output steps

    Returns:
        RunBundle with a FullState

    The norm columns l2_vtilde and shock_energy are filled from v itself,
    see FULL_RUN_NOTES.
    """
    g = cfg.grid
    eps = cfg.wave.eps
    u = np.array(check_field(u0, g, 'u0'), dtype=complex)
    v = np.array(check_field(v0, g, 'v0'), dtype=float)
    v_initial = v.copy()
    steps, dt = _time_grid(cfg)
    bundle = RunBundle(steps=steps)
    contained = boundary is None
    inflow = 0.0

    def problem(v_now):
        return SchrodingerProblem(g, a1=v_now, cubic_eps=eps, boundary=boundary)

    def observe(n, t):
        bundle.record(t, {
            'mass': mass(u, g),
            'h1_u': h1_norm(u, g),
            'l2_vtilde': l2_norm(v, g),
            'hm1_v': h_minus1_norm(v, g),
            'energy': nls_energy(u, v, eps, g),
            'shock_energy': float(integrate(np.abs(v_initial) * (v - v_initial) ** 2, g)),
        })
        bundle.boundary_flux.append(t, inflow)
        state = FullState(u, v, t)
        bundle.state = state
        if keep_snapshots:
            bundle.snapshots.append(Snapshot(t, u.copy(), v.copy()))
        for observer in observers:
            observer(state, n)

    logger.info("Full run: %d steps of dt=%.3g, eps=%g, %s splitting", steps, dt, eps, cfg.splitting)
    _check_state(u, v, g, 0, 0.0, u_contained=contained)
    observe(0, 0.0)

    def advance(n):
        nonlocal u, v, inflow
        t = (n - 1) * dt
        if cfg.splitting == 'strang':
            v = lf_step_burgers(v, u, 0.5 * dt, eps, g)
            u_new = cn_step(u, t, dt, problem(v), cfg.newton_tol, cfg.newton_max_iter)
            inflow += boundary_mass_flux(u, u_new, dt, g)
            u = u_new
            v = lf_step_burgers(v, u, 0.5 * dt, eps, g)
        else:
            v = lf_step_burgers(v, u, dt, eps, g)
            u_new = cn_step(u, t, dt, problem(v), cfg.newton_tol, cfg.newton_max_iter)
            inflow += boundary_mass_flux(u, u_new, dt, g)
            u = u_new
        _check_state(u, v, g, n, n * dt, u_contained=contained)
        if _is_output_step(n, steps, cfg.output_every):
            observe(n, n * dt)

    _run_steps('full', steps, advance)
    return bundle


# ---------------------------------------------------------------------------
# Linearized systems
# ---------------------------------------------------------------------------

def _measure_hm1(ms, grid):
    if ms.decomposed and ms.psi_now != 0:
        return h_minus1_norm(ms.v_tilde + ms.psi_now * discrete_delta(grid), grid)
    return h_minus1_norm(ms.v_tilde, grid)


def _linearized_observer(bundle, grid, energy_of, shock_phi, observers, keep_snapshots):
    def observe(u, ms, n, t):
        bundle.record(t, {
            'mass': mass(u, grid),
            'h1_u': h1_norm(u, grid),
            'l2_vtilde': l2_norm(ms.v_tilde, grid),
            'hm1_v': _measure_hm1(ms, grid),
            'energy': energy_of(u, ms),
            'shock_energy': weighted_shock_energy(ms, shock_phi, grid),
        })
        state = LinearizedState(u, ms, t)
        bundle.state = state
        if keep_snapshots:
            bundle.snapshots.append(Snapshot(t, u.copy(), ms.v_tilde.copy(), ms.psi_now))
        for observer in observers:
            observer(state, n)
    return observe


def run_linearized_eps0(cfg, u0, v0, wave=None, observers=(), keep_snapshots=False):
    """
    Linearized weakly coupled system (eps = 0).

    v is the exact measure solution; u is driven by the regularized source
    h r with h = v_tilde + Psi(t) rho_w, rho_w the mollifier of width
    cfg.mollify_width.
    """
    g = cfg.grid
    if cfg.wave.eps != 0:
        raise DomainError(f"run_linearized_eps0 needs eps = 0, got {cfg.wave.eps}")
    wave = wave or closed_form_r(cfg.wave, g)
    v0 = np.array(check_field(v0, g, 'v0'), dtype=float)
    u = np.array(check_field(u0, g, 'u0'), dtype=complex)
    r = wave.r
    rho = mollifier(cfg.mollify_width, g)
    a1 = wave.phi + cfg.wave.b

    def source(t):
        exact = explicit_v_eps0(v0, t, g)
        return ((exact.v_tilde + exact.psi_now * rho) * r).astype(complex)

    problem = SchrodingerProblem(g, a1=a1, source=source)
    steps, dt = _time_grid(cfg)
    bundle = RunBundle(steps=steps)
    psi = TimeSeries.starting_at(0.0)
    ms = MeasureSolution(explicit_v_eps0(v0, 0.0, g).v_tilde, psi)

    def energy_of(u_now, ms_now):
        return energy_diagnostic(u_now, ms_now.v_tilde, a1, None, r, 0.0, g)

    observe = _linearized_observer(bundle, g, energy_of, wave.phi, observers, keep_snapshots)
    logger.info("Linearized eps=0 run: %d steps of dt=%.3g, width=%.3g", steps, dt, cfg.mollify_width)
    _check_state(u, ms.v_tilde, g, 0, 0.0, v_contained=True)
    observe(u, ms, 0, 0.0)

    def advance(n):
        nonlocal u, ms
        t = (n - 1) * dt
        u = cn_step(u, t, dt, problem, cfg.newton_tol, cfg.newton_max_iter)
        exact = explicit_v_eps0(v0, n * dt, g)
        psi.append(n * dt, exact.psi_now)
        ms = MeasureSolution(exact.v_tilde, psi)
        _check_state(u, ms.v_tilde, g, n, n * dt, v_contained=True)
        if _is_output_step(n, steps, cfg.output_every):
            observe(u, ms, n, n * dt)

    _run_steps('linearized eps=0', steps, advance)
    return bundle


def _run_linearized_split(cfg, u0, v0, wave, observers, keep_snapshots):
    g = cfg.grid
    eps, b = cfg.wave.eps, cfg.wave.b
    width = cfg.mollify_width
    decomposed = cfg.v_mode == 'decomposed'
    r = wave.r
    phi = wave.phi if decomposed else wave.mollified_phi(width)
    a1 = phi + b - 2.0 * eps * r ** 2
    a2 = -eps * r ** 2 if eps > 0 else None
    coeff = 2.0 * phi
    rho = mollifier(width, g) if decomposed else None
    phi_traces = wave.phi_traces
    transport = cn_transport_step if cfg.transport_scheme == 'crank_nicolson' else lf_step_linear

    u = np.array(check_field(u0, g, 'u0'), dtype=complex)
    ms = MeasureSolution.from_data(v0, g, phi_traces if decomposed else None, decomposed)

    def v_source(u_now):
        if eps == 0:
            return None
        return 2.0 * eps * dx_central(r * u_now.real, g)

    def advance_v(ms_now, u_now, tau):
        t_next = ms_now.t + tau
        advanced = transport(ms_now, coeff, v_source(u_now), tau, g)
        if decomposed:
            return psi_update(advanced, tau, phi_traces, g)
        advanced.psi.append(t_next, 0.0)
        return advanced

    def problem(ms_now):
        field_now = ms_now.v_tilde * r
        if decomposed:
            field_now = field_now + ms_now.psi_now * wave.r0 * rho
        frozen = field_now.astype(complex)
        return SchrodingerProblem(g, a1=a1, a2=a2, source=lambda t: frozen)

    def energy_of(u_now, ms_now):
        if eps == 0:
            return energy_diagnostic(u_now, ms_now.v_tilde, a1, None, r, 0.0, g)
        # v_t + (2 phi v)_x = 2 eps (r Re u)_x conserves the functional with a4 = phi / eps
        return energy_diagnostic(u_now, ms_now.v_tilde, a1, a2, r, phi / eps, g)

    steps, dt = _time_grid(cfg)
    bundle = RunBundle(steps=steps)
    observe = _linearized_observer(bundle, g, energy_of, phi, observers, keep_snapshots)
    logger.info(
        "Linearized run: eps=%g, %s mode, %s transport, %d steps of dt=%.3g",
        eps, cfg.v_mode, cfg.transport_scheme, steps, dt,
    )
    _check_state(u, ms.v_tilde, g, 0, 0.0, v_contained=True)
    observe(u, ms, 0, 0.0)

    def advance(n):
        nonlocal u, ms
        t = (n - 1) * dt
        if cfg.splitting == 'strang':
            ms = advance_v(ms, u, 0.5 * dt)
            u = cn_step(u, t, dt, problem(ms), cfg.newton_tol, cfg.newton_max_iter)
            ms = advance_v(ms, u, 0.5 * dt)
        else:
            ms = advance_v(ms, u, dt)
            u = cn_step(u, t, dt, problem(ms), cfg.newton_tol, cfg.newton_max_iter)
        _check_state(u, ms.v_tilde, g, n, n * dt, v_contained=True)
        if _is_output_step(n, steps, cfg.output_every):
            observe(u, ms, n, n * dt)

    _run_steps('linearized', steps, advance)
    return bundle


def run_linearized_eps(cfg, u0, v0, wave=None, observers=(), keep_snapshots=False):
    """
    Linearized system around the eps > 0 reference wave.

    Decomposed mode evolves v_tilde with coefficient 2 phi_eps and feeds
    Psi from the flux jump; the measure enters the Schrodinger source as
    Psi r(0) rho_w. Regularized mode evolves the whole field with the
    mollified coefficient, the measure appearing as a spike at x = 0.
    """
    if not cfg.wave.eps > 0:
        raise DomainError(f"run_linearized_eps needs eps > 0, got {cfg.wave.eps}")
    wave = wave or build_reference_wave(cfg.wave, cfg.grid, cfg.substeps, cfg.ode_method)
    return _run_linearized_split(cfg, u0, v0, wave, observers, keep_snapshots)


def run_linearized(cfg, u0, v0, wave=None, observers=(), keep_snapshots=False):
    """Dispatch on eps; eps = 0 in regularized mode uses the split loop with the mollified sign"""
    if cfg.wave.eps > 0:
        return run_linearized_eps(cfg, u0, v0, wave, observers, keep_snapshots)
    if cfg.v_mode == 'regularized':
        wave = wave or closed_form_r(cfg.wave, cfg.grid)
        return _run_linearized_split(cfg, u0, v0, wave, observers, keep_snapshots)
    return run_linearized_eps0(cfg, u0, v0, wave, observers, keep_snapshots)


def reference_boundary(wave):
    """Dirichlet data e^{ibt} r(+-x_max) for full runs around the reference wave"""
    left, right = wave.boundary_values
    b = wave.params.b

    def boundary(t):
        phase = np.exp(1j * b * t)
        return left * phase, right * phase

    return boundary
