# Numerics package
from .errors import (
    EXIT_OK,
    EXIT_CRITERION_FAILURE,
    EXIT_CONFIG_ERROR,
    EXIT_NUMERICAL_FAILURE,
    SimulationError,
    DimensionError,
    DomainError,
    ResolutionError,
    UnsupportedParameterError,
    HorizonError,
    StepSizeError,
    ConvergenceError,
    DivergenceError,
    ConfigError,
)
from .grid import Grid1D, check_field
from .norms import (
    integrate,
    l1_norm,
    l2_norm,
    dx_central,
    h1_norm,
    h_minus1_norm,
    discrete_delta,
    measure_pairing,
)
from .mollifier import mollifier, smoothed_sign
from .timeseries import TimeSeries
from .tridiag import solve_tridiagonal

__all__ = [
    'EXIT_OK',
    'EXIT_CRITERION_FAILURE',
    'EXIT_CONFIG_ERROR',
    'EXIT_NUMERICAL_FAILURE',
    'SimulationError',
    'DimensionError',
    'DomainError',
    'ResolutionError',
    'UnsupportedParameterError',
    'HorizonError',
    'StepSizeError',
    'ConvergenceError',
    'DivergenceError',
    'ConfigError',
    'Grid1D',
    'check_field',
    'integrate',
    'l1_norm',
    'l2_norm',
    'dx_central',
    'h1_norm',
    'h_minus1_norm',
    'discrete_delta',
    'measure_pairing',
    'mollifier',
    'smoothed_sign',
    'TimeSeries',
    'solve_tridiagonal',
]
