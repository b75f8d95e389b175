"""
Bump-function mollifier and the mollified sign built from it.
"""
import numpy as np
from scipy.integrate import cumulative_trapezoid, trapezoid

import config as cfg
from .errors import ResolutionError


def _check_width(width, grid):
    if width < cfg.MIN_MOLLIFY_CELLS * grid.h * (1 - 1e-12):
        raise ResolutionError(
            f"mollifier width {width:.6g} spans fewer than {cfg.MIN_MOLLIFY_CELLS} cells (h={grid.h:.6g})"
        )


def _bump(s):
    rho = np.zeros_like(s)
    inside = np.abs(s) < 1.0
    rho[inside] = np.exp(1.0 / (s[inside] ** 2 - 1.0))
    return rho


def mollifier(width, grid):
    """rho_w(x) = rho(x/w)/w, normalized so its trapezoid integral is 1"""
    _check_width(width, grid)
    # |x| keeps the samples exactly even
    rho = _bump(np.abs(grid.x) / width)
    return rho / trapezoid(rho, dx=grid.h)


def smoothed_sign(width, grid):
    """
    -(sgn * rho_w) sampled on the grid.

    Odd, equal to +1 for x <= -w and -1 for x >= w, and 0 at x = 0.
    """
    rho = mollifier(width, grid)
    cdf = cumulative_trapezoid(rho, dx=grid.h, initial=0.0)
    cdf /= cdf[-1]
    s = 1.0 - 2.0 * cdf
    s = 0.5 * (s - s[::-1])
    s[grid.center] = 0.0
    return s
