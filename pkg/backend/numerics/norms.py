"""
Discrete norms, the central difference operator and quadrature.

All integrals use the trapezoid rule on the node values.
"""
import numpy as np
from scipy.integrate import trapezoid

from .errors import DomainError
from .grid import check_field
from .tridiag import solve_tridiagonal


def integrate(f, grid):
    """Trapezoid rule over the whole grid"""
    f = check_field(f, grid)
    return trapezoid(f, dx=grid.h)


def l1_norm(f, grid):
    return float(integrate(np.abs(check_field(f, grid)), grid))


def l2_norm(f, grid):
    f = check_field(f, grid)
    return float(np.sqrt(integrate(np.abs(f) ** 2, grid)))


def dx_central(f, grid):
    """Second-order central differences inside, one-sided second order at the ends"""
    f = check_field(f, grid)
    return np.gradient(f, grid.h, edge_order=2)


def h1_norm(f, grid):
    return float(np.hypot(l2_norm(f, grid), l2_norm(dx_central(f, grid), grid)))


def h_minus1_norm(f, grid):
    """
    Discrete H^-1 norm on the truncated domain.

    Solves (I - D_xx) w = f with w = 0 at both endpoints and returns
    sqrt(<f, w>). This is the Dirichlet surrogate of the norm on the whole
    line.
    """
    f = check_field(f, grid)
    if not np.any(f):
        return 0.0
    inner = f[1:-1]
    off = -1.0 / grid.h ** 2
    w = solve_tridiagonal(off, 1.0 - 2.0 * off, off, inner)
    pairing = grid.h * np.real(np.vdot(w, inner))
    return float(np.sqrt(max(pairing, 0.0)))


def discrete_delta(grid):
    """Dirac mass at x = 0 with unit trapezoid integral"""
    delta = grid.zeros()
    delta[grid.center] = 1.0 / grid.h
    return delta


def measure_pairing(psi, phi_test):
    """
    Pair Psi(t) delta_Sigma with a test function.

    Returns the trapezoid approximation of int_0^T Psi(t) phi_test(t) dt,
    where phi_test is the test function restricted to x = 0.
    """
    if len(psi) == 0:
        raise DomainError("cannot pair an empty series")
    t = psi.t
    if len(t) == 1:
        return 0.0
    weights = np.array([phi_test(ti) for ti in t], dtype=float)
    return float(trapezoid(psi.values * weights, t))
