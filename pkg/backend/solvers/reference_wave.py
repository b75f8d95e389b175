"""
Reference wave (e^{ibt} r, phi) around which the system is linearized.

eps = 0 uses the closed forms, eps > 0 integrates the profile ODE
    r'' = b r - r sgn(x) sqrt(eps r^2 + 1) - eps r^3
outward from x = 0, starting from the closed-form data at the origin.
"""
import logging
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

import config as cfg
from numerics import (
    DivergenceError,
    DomainError,
    Grid1D,
    UnsupportedParameterError,
    smoothed_sign,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class WaveParams:
    b: float = cfg.B
    eps: float = cfg.EPS
    A: float = cfg.A
    C: float = cfg.C

    def __post_init__(self):
        if self.b >= 1:
            raise UnsupportedParameterError(f"no reference profile for b >= 1 (b={self.b})")
        if self.eps < 0:
            raise UnsupportedParameterError(f"eps must be nonnegative (eps={self.eps})")


@dataclass(frozen=True, eq=False)
class ReferenceWave:
    params: WaveParams
    grid: Grid1D
    r: np.ndarray
    r_prime: np.ndarray
    phi: np.ndarray

    @property
    def phi_traces(self):
        """(phi(0-), phi(0+)) = (+sqrt(eps A^2 + 1), -sqrt(eps A^2 + 1))"""
        r0 = self.r[self.grid.center]
        magnitude = math.sqrt(self.params.eps * r0 * r0 + 1.0)
        return magnitude, -magnitude

    @property
    def r0(self):
        return float(self.r[self.grid.center])

    def mollified_phi(self, width):
        """phi with sgn replaced by its mollification of the given width"""
        return smoothed_sign(width, self.grid) * np.sqrt(self.params.eps * self.r ** 2 + 1.0)

    @cached_property
    def boundary_values(self):
        return float(self.r[0]), float(self.r[-1])


def closed_form_initial_data(b, A, C):
    """(r(0), r'(0)) shared by both branches of the closed form"""
    if b >= 1:
        raise UnsupportedParameterError(f"no closed form for b >= 1 (b={b})")
    if b <= -1:
        return A, C * math.sqrt(abs(1 + b))
    return A, A * math.sqrt(1 + b)


def _closed_form_branches(p, x):
    """(r+, r+', r-, r-') evaluated on all of x"""
    b, A, C = p.b, p.A, p.C
    kp = math.sqrt(1 - b)
    sin_p, cos_p = np.sin(kp * x), np.cos(kp * x)
    if b <= -1:
        km = math.sqrt(abs(1 + b))
        coef = C * math.sqrt(abs(1 + b) / (1 - b))
        r_plus = coef * sin_p + A * cos_p
        rp_plus = coef * kp * cos_p - A * kp * sin_p
        r_minus = C * np.sin(km * x) + A * np.cos(km * x)
        rp_minus = C * km * np.cos(km * x) - A * km * np.sin(km * x)
    else:
        km = math.sqrt(b + 1)
        coef = A * math.sqrt((b + 1) / (1 - b))
        r_plus = coef * sin_p + A * cos_p
        rp_plus = coef * kp * cos_p - A * kp * sin_p
        # the left branch is only used for x <= 0; clip keeps exp finite on the right
        r_minus = A * np.exp(km * np.minimum(x, 0.0))
        rp_minus = km * r_minus
    return r_plus, rp_plus, r_minus, rp_minus


def _closed_form_samples(p, x):
    r_plus, rp_plus, r_minus, rp_minus = _closed_form_branches(p, x)
    right = x > 0
    return np.where(right, r_plus, r_minus), np.where(right, rp_plus, rp_minus)


def closed_form_jump(p):
    """max(|r(0+) - r(0-)|, |r'(0+) - r'(0-)|) of the closed form"""
    if p.b >= 1:
        raise UnsupportedParameterError(f"no closed form for b >= 1 (b={p.b})")
    r_plus, rp_plus, r_minus, rp_minus = _closed_form_branches(p, np.zeros(1))
    return float(max(abs(r_plus[0] - r_minus[0]), abs(rp_plus[0] - rp_minus[0])))


def phi_of(r, eps, grid):
    """phi_eps = -sgn(x) sqrt(eps r^2 + 1), with 0 at the x = 0 node"""
    return -np.sign(grid.x) * np.sqrt(eps * np.asarray(r) ** 2 + 1.0)


def closed_form_r(p, grid):
    """Sample the eps = 0 closed form, derivative taken analytically"""
    if p.eps != 0:
        raise DomainError(f"closed form only exists for eps = 0 (eps={p.eps})")
    r, r_prime = _closed_form_samples(p, grid.x)
    return ReferenceWave(p, grid, r, r_prime, phi_of(r, 0.0, grid))


def _rk4_step(r, q, step, b, eps, sign):
    def accel(y):
        return b * y - y * sign * math.sqrt(eps * y * y + 1.0) - eps * y * y * y

    k1r, k1q = q, accel(r)
    k2r, k2q = q + 0.5 * step * k1q, accel(r + 0.5 * step * k1r)
    k3r, k3q = q + 0.5 * step * k2q, accel(r + 0.5 * step * k2r)
    k4r, k4q = q + step * k3q, accel(r + step * k3r)
    return (
        r + step / 6.0 * (k1r + 2 * k2r + 2 * k3r + k4r),
        q + step / 6.0 * (k1q + 2 * k2q + 2 * k3q + k4q),
    )


def _euler_step(r, q, step, b, eps, sign):
    accel = b * r - r * sign * math.sqrt(eps * r * r + 1.0) - eps * r * r * r
    return r + step * q, q + step * accel


def integrate_r_eps(p, grid, substeps=cfg.RK_SUBSTEPS, method='rk4'):
    """
    Integrate the profile ODE outward from x = 0 in both directions.

    Each branch keeps its constant sgn(x), so no step crosses the
    discontinuity. Works for eps = 0 as well, which is how the closed
    forms are cross-checked.

    Args:
        p: WaveParams
        grid: Grid1D
        substeps: internal steps per grid cell
        method: 'rk4' (default) or 'euler'

    Returns:
        ReferenceWave with r, r' at the nodes and phi from phi_of
    """
    if method not in cfg.ODE_METHODS:
        raise UnsupportedParameterError(f"unknown ODE method {method!r}")
    if substeps < 1:
        raise DomainError(f"substeps must be positive, got {substeps}")
    stepper = _rk4_step if method == 'rk4' else _euler_step

    r0, q0 = closed_form_initial_data(p.b, p.A, p.C)
    n, mid = grid.n_nodes, grid.center
    r = np.empty(n)
    q = np.empty(n)
    r[mid], q[mid] = r0, q0

    for direction in (1, -1):
        step = direction * grid.h / substeps
        y, dy = r0, q0
        for k in range(1, mid + 1):
            for _ in range(substeps):
                y, dy = stepper(y, dy, step, p.b, p.eps, float(direction))
            if not (math.isfinite(y) and math.isfinite(dy)):
                raise DivergenceError("reference profile blew up", x=direction * k * grid.h)
            r[mid + direction * k] = y
            q[mid + direction * k] = dy

    logger.debug("Integrated profile (eps=%g, b=%g) with %s, %d substeps", p.eps, p.b, method, substeps)
    return ReferenceWave(p, grid, r, q, phi_of(r, p.eps, grid))


def build_reference_wave(p, grid, substeps=cfg.RK_SUBSTEPS, method='rk4'):
    """Closed form at eps = 0, ODE integration otherwise"""
    if p.eps == 0:
        return closed_form_r(p, grid)
    return integrate_r_eps(p, grid, substeps, method)


def profile_residual(wave, window=5.0):
    """
    Max |D_xx r - (b r - r sgn(x) sqrt(eps r^2 + 1) - eps r^3)| over the
    interior nodes with 0 < |x| <= window, D_xx the 3-point second difference.
    """
    g = wave.grid
    p = wave.params
    r = wave.r
    x = g.x[1:-1]
    d2 = (r[:-2] - 2.0 * r[1:-1] + r[2:]) / g.h ** 2
    rhs = p.b * r[1:-1] - r[1:-1] * np.sign(x) * np.sqrt(p.eps * r[1:-1] ** 2 + 1.0) - p.eps * r[1:-1] ** 3
    mask = (np.abs(x) <= window) & (x != 0)
    return float(np.max(np.abs(d2 - rhs)[mask]))
