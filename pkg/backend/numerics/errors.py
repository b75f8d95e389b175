"""
Exception hierarchy shared by the numerics, solvers and CLI.

Every error carries the process exit code the CLI returns for it.
"""

EXIT_OK = 0
EXIT_CRITERION_FAILURE = 1
EXIT_CONFIG_ERROR = 2
EXIT_NUMERICAL_FAILURE = 3


class SimulationError(Exception):
    """Base class for all simulator errors"""
    exit_code = EXIT_NUMERICAL_FAILURE


class DimensionError(SimulationError, ValueError):
    """Field length does not match the grid"""


class DomainError(SimulationError, ValueError):
    """Argument outside the domain of an operation"""


class ResolutionError(SimulationError, ValueError):
    """Feature narrower than the grid can represent"""


class UnsupportedParameterError(SimulationError, ValueError):
    """Parameter regime with no supported formula or scheme"""
    exit_code = EXIT_CONFIG_ERROR


class HorizonError(DomainError):
    """Requested time lies beyond what the truncated domain can represent"""


class StepSizeError(SimulationError):
    """Explicit step violates the CFL restriction"""

    def __init__(self, max_speed, dt, dt_max):
        self.max_speed = max_speed
        self.dt = dt
        self.dt_max = dt_max
        super().__init__(
            f"CFL violated: dt={dt:.6g} > dt_max={dt_max:.6g} (max speed {max_speed:.6g})"
        )


class ConvergenceError(SimulationError):
    """Newton iteration did not reach tolerance"""

    def __init__(self, residual, iterations):
        self.residual = residual
        self.iterations = iterations
        super().__init__(
            f"Newton failed after {iterations} iterations, last residual {residual:.3e}"
        )


class DivergenceError(SimulationError):
    """Non-finite values or support leaking to the boundary"""

    def __init__(self, message, x=None, step=None, t=None):
        self.x = x
        self.step = step
        self.t = t
        where = []
        if x is not None:
            where.append(f"x={x:.6g}")
        if step is not None:
            where.append(f"step={step}")
        if t is not None:
            where.append(f"t={t:.6g}")
        suffix = f" ({', '.join(where)})" if where else ""
        super().__init__(message + suffix)


class ConfigError(SimulationError, ValueError):
    """Invalid run configuration"""
    exit_code = EXIT_CONFIG_ERROR
