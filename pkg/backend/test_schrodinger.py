#!/usr/bin/env python3
"""
Schrodinger Solver Test Script
Crank-Nicolson stepping, Newton iteration and the mass/energy identities
"""

import numpy as np
import pytest

from numerics import ConvergenceError, DimensionError, DomainError, Grid1D
from solvers import (
    SchrodingerProblem,
    boundary_mass_flux,
    cn_step,
    energy_diagnostic,
    mass,
    mass_rate_diagnostic,
)
from solvers.schrodinger import _newton


GRID = Grid1D(10.0, 401)


def _gaussian_packet():
    u = np.exp(-GRID.x ** 2 + 1j * GRID.x)
    u[0] = u[-1] = 0.0
    return u


def _advance(u, prob, dt, steps):
    for n in range(steps):
        u = cn_step(u, n * dt, dt, prob)
    return u


def test_free_evolution_conserves_mass():
    prob = SchrodingerProblem(GRID, a1=GRID.zeros())
    u0 = _gaussian_packet()
    u = _advance(u0, prob, 0.01, 50)
    assert mass(u, GRID) == pytest.approx(mass(u0, GRID), rel=1e-11)


def test_cubic_term_conserves_mass():
    prob = SchrodingerProblem(GRID, a1=-np.exp(-GRID.x ** 2), cubic_eps=0.5)
    u0 = 1.5 * _gaussian_packet()
    u = _advance(u0, prob, 0.01, 30)
    assert mass(u, GRID) == pytest.approx(mass(u0, GRID), rel=1e-10)


def test_linear_energy_is_conserved():
    a1 = 0.5 * np.exp(-GRID.x ** 2)
    prob = SchrodingerProblem(GRID, a1=a1)
    zeros = GRID.zeros()

    def energy(u):
        return energy_diagnostic(u, zeros, a1, None, zeros, 0.0, GRID)

    u0 = _gaussian_packet()
    u = _advance(u0, prob, 0.01, 40)
    assert energy(u) == pytest.approx(energy(u0), rel=1e-10)


def test_mass_rate_identity_with_conjugate_term_and_source():
    a2 = -0.3 * np.exp(-GRID.x ** 2)
    bump = np.exp(-(GRID.x - 1.0) ** 2)
    prob = SchrodingerProblem(
        GRID,
        a1=np.cos(GRID.x),
        a2=a2,
        source=lambda t: (1.0 + t) * bump + 0j,
    )
    u0 = _gaussian_packet()
    t, dt = 0.3, 0.02
    u1 = cn_step(u0, t, dt, prob)
    lhs = 0.5 * (mass(u1, GRID) - mass(u0, GRID)) / dt
    rhs = mass_rate_diagnostic(0.5 * (u0 + u1), prob, t + 0.5 * dt)
    assert lhs == pytest.approx(rhs, rel=1e-8, abs=1e-10)


def test_dirichlet_boundary_flux_balances_mass():
    def boundary(t):
        return np.exp(1j * t), 0.5 * np.exp(-2j * t)

    for cubic in (0.0, 0.2):
        prob = SchrodingerProblem(GRID, a1=0.3 * np.ones(GRID.n_nodes), cubic_eps=cubic, boundary=boundary)
        u = np.exp(-GRID.x ** 2).astype(complex)
        u[0], u[-1] = boundary(0.0)
        start = mass(u, GRID)
        inflow = 0.0
        dt = 0.01
        for n in range(20):
            u_new = cn_step(u, n * dt, dt, prob)
            inflow += boundary_mass_flux(u, u_new, dt, GRID)
            u = u_new
        assert u[0] == boundary(20 * dt)[0]
        assert abs(mass(u, GRID) - start - inflow) <= 1e-10 * start


def test_zero_data_stays_zero():
    prob = SchrodingerProblem(GRID, a1=np.ones(GRID.n_nodes), a2=-np.ones(GRID.n_nodes), cubic_eps=0.1)
    u = _advance(GRID.zeros(complex), prob, 0.05, 10)
    assert np.all(u == 0)


def test_newton_iteration_cap():
    prob = SchrodingerProblem(GRID, a1=GRID.zeros(), cubic_eps=1.0)
    with pytest.raises(ConvergenceError) as info:
        cn_step(2.0 * _gaussian_packet(), 0.0, 0.05, prob, tol=1e-12, max_iter=1)
    assert info.value.iterations == 1
    assert info.value.residual > 1e-12


def test_linear_step_is_linear_in_data_and_source():
    a1 = 0.5 * np.exp(-GRID.x ** 2)
    s1 = np.exp(-(GRID.x - 1.0) ** 2) + 0j
    s2 = 1j * GRID.x * np.exp(-GRID.x ** 2)
    u1 = _gaussian_packet()
    u2 = (1.0 + 1j) * GRID.x * np.exp(-GRID.x ** 2)
    u2[0] = u2[-1] = 0.0
    alpha, beta = 2.0, -0.5
    for a2 in (None, 0.2 * np.exp(-GRID.x ** 2)):
        def step(u, source):
            prob = SchrodingerProblem(GRID, a1=a1, a2=a2, source=lambda t: source)
            return cn_step(u, 0.0, 0.01, prob)

        combined = step(alpha * u1 + beta * u2, alpha * s1 + beta * s2)
        expected = alpha * step(u1, s1) + beta * step(u2, s2)
        assert np.allclose(combined, expected, rtol=0.0, atol=1e-12)


class _StalledSystem:
    """Residual m - rhs with a Jacobian inflated by scale, so Newton updates shrink by 1/scale"""

    h = 0.1

    def __init__(self, n, scale):
        self.rhs = np.ones(n, dtype=complex)
        self.scale = scale

    def residual(self, m):
        return m - self.rhs

    def jacobian(self, m):
        ab = np.zeros((5, 2 * m.shape[0]))
        ab[2] = self.scale
        return ab


def test_newton_accepts_only_converged_residuals():
    solved = _newton(_StalledSystem(20, 1.0), np.zeros(20), tol=1e-12, max_iter=5)
    assert np.allclose(solved, 1.0)
    with pytest.raises(ConvergenceError) as info:
        _newton(_StalledSystem(20, 1e20), np.zeros(20), tol=1e-12, max_iter=50)
    assert info.value.iterations == 1
    assert info.value.residual == pytest.approx(np.sqrt(0.1 * 20), rel=1e-6)


def test_argument_validation():
    with pytest.raises(DimensionError):
        SchrodingerProblem(GRID, a1=np.zeros(5))
    with pytest.raises(DomainError):
        SchrodingerProblem(GRID, a1=GRID.zeros(), cubic_eps=-1.0)
    prob = SchrodingerProblem(GRID, a1=GRID.zeros())
    with pytest.raises(DomainError):
        cn_step(_gaussian_packet(), 0.0, 0.0, prob)


if __name__ == '__main__':
    print("=" * 60)
    print("SCHRODINGER SOLVER TESTS")
    print("=" * 60)
    for name, test in sorted(globals().items()):
        if name.startswith('test_') and callable(test):
            test()
            print(f"  ✓ {name}")
    print("=" * 60)
