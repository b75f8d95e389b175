"""
Uniform node-centered 1-D grid on a symmetric interval.

x = 0 is always a node, which is where the shock and the measure live.
"""
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import DimensionError, DomainError


@dataclass(frozen=True)
class Grid1D:
    x_max: float
    n_nodes: int

    def __post_init__(self):
        if not self.x_max > 0:
            raise DomainError(f"x_max must be positive, got {self.x_max}")
        if self.n_nodes < 3 or self.n_nodes % 2 == 0:
            raise DomainError(f"n_nodes must be odd and >= 3, got {self.n_nodes}")

    @property
    def x_min(self):
        return -self.x_max

    @property
    def h(self):
        return (self.x_max - self.x_min) / (self.n_nodes - 1)

    @property
    def center(self):
        """Index of the x = 0 node"""
        return (self.n_nodes - 1) // 2

    @cached_property
    def x(self):
        # built from integer offsets so that x is exactly antisymmetric and x[center] == 0
        x = (np.arange(self.n_nodes) - self.center) * self.h
        x.flags.writeable = False
        return x

    def refined(self):
        """Grid with half the spacing on the same interval"""
        return Grid1D(self.x_max, 2 * self.n_nodes - 1)

    def sample(self, fn, dtype=float):
        return np.asarray(fn(self.x), dtype=dtype)

    def zeros(self, dtype=float):
        return np.zeros(self.n_nodes, dtype=dtype)


def check_field(f, grid, name='field'):
    """Validate length and return f as an ndarray"""
    f = np.asarray(f)
    if f.ndim != 1 or f.shape[0] != grid.n_nodes:
        raise DimensionError(f"{name} has shape {f.shape}, grid has {grid.n_nodes} nodes")
    return f
