"""
Tridiagonal solves for the implicit stencils (Crank-Nicolson, H^-1 norm).

Row k of the system reads
    lower[k] x[k-1] + diag[k] x[k] + upper[k] x[k+1] = rhs[k]
so lower[0] and upper[-1] fall outside the matrix and are ignored.
"""
import numpy as np
from numba import njit


@njit(cache=True)
def _sweep(lower, diag, upper, rhs):
    # forward elimination normalizes each row: x[k] + ratio[k] x[k+1] = carry[k]
    n = rhs.shape[0]
    ratio = np.empty_like(rhs)
    carry = np.empty_like(rhs)
    ratio[0] = upper[0] / diag[0]
    carry[0] = rhs[0] / diag[0]
    for k in range(1, n):
        pivot = diag[k] - lower[k] * ratio[k - 1]
        ratio[k] = upper[k] / pivot
        carry[k] = (rhs[k] - lower[k] * carry[k - 1]) / pivot

    x = carry
    for k in range(n - 2, -1, -1):
        x[k] -= ratio[k] * x[k + 1]
    return x


def solve_tridiagonal(lower, diag, upper, rhs):
    """
    Solve the tridiagonal system described in the module docstring.

    lower, diag and upper are length-n arrays or scalars; a scalar stands
    for a constant band. rhs may be real or complex, and the result takes
    the common dtype of all four inputs (at least float64). No pivoting:
    the bands must be diagonally dominant or otherwise safe to eliminate
    in order.
    """
    rhs = np.asarray(rhs)
    n = rhs.shape[0]
    dtype = np.result_type(lower, diag, upper, rhs, np.float64)

    def band(values):
        return np.ascontiguousarray(np.broadcast_to(np.asarray(values, dtype=dtype), (n,)))

    return _sweep(band(lower), band(diag), band(upper), rhs.astype(dtype))
