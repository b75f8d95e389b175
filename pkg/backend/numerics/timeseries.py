"""
Append-only (t, value) series used for Psi(t) and norm histories.
"""
import numpy as np
import pandas as pd

from .errors import DomainError


class TimeSeries:
    """Ordered (t, value) pairs, strictly increasing in t and starting at t = 0"""

    def __init__(self, t=(), values=()):
        self._t = []
        self._values = []
        for ti, vi in zip(t, values):
            self.append(ti, vi)

    @classmethod
    def starting_at(cls, value):
        return cls([0.0], [value])

    def append(self, t, value):
        t = float(t)
        if not self._t:
            if t != 0.0:
                raise DomainError(f"time series must start at t=0, got t={t}")
        elif t <= self._t[-1]:
            raise DomainError(f"time {t} does not follow {self._t[-1]}")
        self._t.append(t)
        self._values.append(float(value))

    def __len__(self):
        return len(self._t)

    @property
    def t(self):
        return np.asarray(self._t)

    @property
    def values(self):
        return np.asarray(self._values)

    @property
    def last_t(self):
        if not self._t:
            raise DomainError("empty time series")
        return self._t[-1]

    @property
    def last(self):
        if not self._values:
            raise DomainError("empty time series")
        return self._values[-1]

    def at(self, t):
        """Linear interpolation at time t"""
        if not self._t:
            raise DomainError("empty time series")
        return float(np.interp(t, self._t, self._values))

    def copy(self):
        series = TimeSeries()
        series._t = list(self._t)
        series._values = list(self._values)
        return series

    def to_frame(self, name='value'):
        return pd.DataFrame({'t': self.t, name: self.values})
