"""
Crank-Nicolson stepping for

    i u_t + u_xx = a1 u + a2 conj(u) + S(t) - eps_c |u|^2 u

All linear terms are implicit at the midpoint m = (u^n + u^{n+1}) / 2, the
cubic term is resolved by Newton iteration on m. The a2 conj(u) term makes
the system real-linear only, so the general path works on the interleaved
real unknowns (Re m_0, Im m_0, Re m_1, ...): a 2x2-block tridiagonal matrix,
i.e. a banded matrix with two sub- and two super-diagonals. Without a2 and
without the cubic term the system is complex tridiagonal and goes through
the Thomas solver.
"""
import logging
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy.linalg import solve_banded

import config as cfg
from numerics import (
    ConvergenceError,
    DivergenceError,
    DomainError,
    Grid1D,
    check_field,
    integrate,
    solve_tridiagonal,
)

logger = logging.getLogger(__name__)

# stalled Newton updates are accepted up to this many ulps of the right-hand side
_ROUNDOFF_FACTOR = 1e3


@dataclass(frozen=True, eq=False)
class SchrodingerProblem:
    """
    Coefficients of one Schrodinger sub-problem.

    source(t) returns the complex source field at time t; boundary(t)
    returns the (left, right) endpoint values. Both default to zero.
    """
    grid: Grid1D
    a1: np.ndarray
    a2: Optional[np.ndarray] = None
    cubic_eps: float = 0.0
    source: Optional[Callable[[float], np.ndarray]] = None
    boundary: Optional[Callable[[float], tuple]] = None

    def __post_init__(self):
        check_field(self.a1, self.grid, 'a1')
        if self.a2 is not None:
            check_field(self.a2, self.grid, 'a2')
        if self.cubic_eps < 0:
            raise DomainError(f"cubic_eps must be nonnegative, got {self.cubic_eps}")

    @property
    def has_conjugate_term(self):
        return self.a2 is not None and bool(np.any(self.a2))

    def source_at(self, t):
        if self.source is None:
            return np.zeros(self.grid.n_nodes, dtype=complex)
        return check_field(self.source(t), self.grid, 'source')

    def boundary_at(self, t):
        if self.boundary is None:
            return 0.0, 0.0
        return self.boundary(t)


def _weighted_norm(f, h):
    return float(np.sqrt(h * np.sum(np.abs(f) ** 2)))


def _interleave(z):
    out = np.empty(2 * z.shape[0])
    out[0::2] = z.real
    out[1::2] = z.imag
    return out


def _deinterleave(y):
    return y[0::2] + 1j * y[1::2]


class _MidpointSystem:
    """Scaled midpoint equations F(m) = 0 on the interior nodes"""

    def __init__(self, u, t, dt, prob):
        g = prob.grid
        self.h = g.h
        self.half = 0.5 * dt
        self.sigma = dt / (2.0 * g.h ** 2)
        self.c = self.half * prob.cubic_eps
        self.a1 = np.asarray(prob.a1, dtype=float)[1:-1]
        self.a2 = np.asarray(prob.a2, dtype=float)[1:-1] if prob.a2 is not None else np.zeros_like(self.a1)

        left_new, right_new = prob.boundary_at(t + dt)
        self.u_ends = (complex(left_new), complex(right_new))
        m_left = 0.5 * (u[0] + left_new)
        m_right = 0.5 * (u[-1] + right_new)

        rhs = self.half * prob.source_at(t + 0.5 * dt)[1:-1] + 1j * u[1:-1]
        rhs[0] -= self.sigma * m_left
        rhs[-1] -= self.sigma * m_right
        self.rhs = rhs

    def residual(self, m):
        lap = -2.0 * m
        lap[1:] += m[:-1]
        lap[:-1] += m[1:]
        return (
            1j * m
            + self.sigma * lap
            - self.half * (self.a1 * m + self.a2 * np.conj(m))
            + self.c * np.abs(m) ** 2 * m
            - self.rhs
        )

    def jacobian(self, m):
        p, q = m.real, m.imag
        n2 = 2 * m.shape[0]
        ab = np.zeros((5, n2))
        ab[0, 2:] = self.sigma
        ab[4, :-2] = self.sigma
        ab[2, 0::2] = -2.0 * self.sigma - self.half * (self.a1 + self.a2) + self.c * (3 * p * p + q * q)
        ab[2, 1::2] = -2.0 * self.sigma - self.half * (self.a1 - self.a2) + self.c * (p * p + 3 * q * q)
        ab[1, 1::2] = -1.0 + 2.0 * self.c * p * q
        ab[3, 0::2] = 1.0 + 2.0 * self.c * p * q
        return ab

    def solve_linear_complex(self):
        diag = 1j - 2.0 * self.sigma - self.half * self.a1
        return solve_tridiagonal(self.sigma, diag, self.sigma, self.rhs)


def _newton(system, guess, tol, max_iter):
    m = guess.astype(complex)
    residual = system.residual(m)
    res_norm = _weighted_norm(residual, system.h)
    # a residual this small is round-off in the scaled equations
    floor = max(tol, _ROUNDOFF_FACTOR * np.finfo(float).eps * _weighted_norm(system.rhs, system.h))
    iterations = 0
    while res_norm > tol:
        if iterations >= max_iter:
            raise ConvergenceError(res_norm, iterations)
        delta = solve_banded((2, 2), system.jacobian(m), -_interleave(residual))
        step = _deinterleave(delta)
        m = m + step
        iterations += 1
        residual = system.residual(m)
        res_norm = _weighted_norm(residual, system.h)
        logger.debug("Newton iteration %d: residual %.3e", iterations, res_norm)
        if not np.isfinite(res_norm):
            raise DivergenceError("Newton iterate is not finite")
        if _weighted_norm(step, system.h) <= tol:
            if res_norm <= floor:
                break
            raise ConvergenceError(res_norm, iterations)
    return m


def cn_step(u, t, dt, prob, tol=cfg.NEWTON_TOL, max_iter=cfg.NEWTON_MAX_ITER):
    """
    Advance u by one Crank-Nicolson step from t to t + dt.

    Args:
        u: complex field at time t
        t: current time
        dt: step, positive
        prob: SchrodingerProblem
        tol: Newton tolerance on the scaled residual (grid-weighted l2)
        max_iter: Newton iteration cap

    Returns:
        complex field at t + dt
    """
    if not dt > 0:
        raise DomainError(f"dt must be positive, got {dt}")
    u = check_field(u, prob.grid, 'u').astype(complex)
    if not np.all(np.isfinite(u)):
        raise DivergenceError("non-finite input to cn_step", t=t)

    system = _MidpointSystem(u, t, dt, prob)
    if prob.cubic_eps == 0 and not prob.has_conjugate_term:
        m = system.solve_linear_complex()
    else:
        m = _newton(system, u[1:-1], tol, max_iter)

    u_new = np.empty_like(u)
    u_new[1:-1] = 2.0 * m - u[1:-1]
    u_new[0], u_new[-1] = system.u_ends
    if not np.all(np.isfinite(u_new)):
        raise DivergenceError("Schrodinger step produced non-finite values", t=t + dt)
    return u_new


def mass(u, grid):
    return float(integrate(np.abs(u) ** 2, grid))


def mass_rate_diagnostic(u, prob, t):
    """
    Right-hand side of the mass identity, half the rate of change of mass:

        1/2 d/dt int |u|^2 = -Im int a2 u^2 + Im int S conj(u)

    (-Im a2 u^2 equals Im a2 conj(u)^2 for real a2.)
    """
    g = prob.grid
    u = check_field(u, g, 'u')
    rate = np.imag(prob.source_at(t) * np.conj(u))
    if prob.a2 is not None:
        rate = rate - np.imag(prob.a2 * u ** 2)
    return float(integrate(rate, g))


def gradient_energy(u, grid):
    """int |u_x|^2 with forward differences, the summation-by-parts partner of D_xx"""
    du = np.diff(check_field(u, grid, 'u')) / grid.h
    return float(grid.h * np.sum(np.abs(du) ** 2))


def energy_diagnostic(u, v, a1, a2, a3, a4, grid):
    """
    int (|u_x|^2 + a1 |u|^2 + Re(a2 u^2) + 2 Re(a3 v u) - a4 v^2) dx.

    For v_t + (k v)_x = c (a3 Re u)_x the conserved combination has
    a4 = k / c; callers pass it in that form. a2 may be None.
    """
    u = check_field(u, grid, 'u')
    v = check_field(v, grid, 'v')
    density = a1 * np.abs(u) ** 2 + 2.0 * np.real(a3 * v * u) - a4 * v ** 2
    if a2 is not None:
        density = density + np.real(a2 * u ** 2)
    return gradient_energy(u, grid) + float(integrate(density, grid))


def nls_energy(u, v, eps, grid):
    """int (|u_x|^2 + v |u|^2 - eps/2 |u|^4) dx, the Schrodinger energy at frozen v"""
    u = check_field(u, grid, 'u')
    density = v * np.abs(u) ** 2 - 0.5 * eps * np.abs(u) ** 4
    return gradient_energy(u, grid) + float(integrate(density, grid))


def boundary_mass_flux(u_old, u_new, dt, grid):
    """
    Mass entering through the endpoints during one Crank-Nicolson step.

    The discrete mass identity leaves only boundary terms when a2 and S
    vanish: interior change -(2 dt / h) Im(m_0 conj(m_1) + m_N conj(m_{N-1}))
    plus the trapezoid end-weights times the change of |u| at the endpoints.
    Zero for homogeneous endpoint values.
    """
    m = 0.5 * (np.asarray(u_old) + np.asarray(u_new))
    coupling = m[0] * np.conj(m[1]) + m[-1] * np.conj(m[-2])
    ends = (abs(u_new[0]) ** 2 - abs(u_old[0]) ** 2) + (abs(u_new[-1]) ** 2 - abs(u_old[-1]) ** 2)
    return float(-2.0 * dt / grid.h * np.imag(coupling) + 0.5 * grid.h * ends)
