#!/usr/bin/env python3
"""
Numerics Test Script
Grid, quadrature, norms, Thomas solver, mollifier and time series
"""

import math

import numpy as np
import pytest
from scipy.linalg import solve_banded

from numerics import (
    DimensionError,
    DomainError,
    Grid1D,
    ResolutionError,
    TimeSeries,
    check_field,
    discrete_delta,
    dx_central,
    h1_norm,
    h_minus1_norm,
    integrate,
    l1_norm,
    l2_norm,
    measure_pairing,
    mollifier,
    smoothed_sign,
    solve_tridiagonal,
)


def test_grid_is_symmetric_with_center_node():
    g = Grid1D(22.0, 4001)
    assert g.x[g.center] == 0.0
    assert np.array_equal(g.x, -g.x[::-1])
    assert g.h == pytest.approx(44.0 / 4000)
    assert g.x[0] == pytest.approx(-22.0)
    assert g.refined().h == pytest.approx(g.h / 2)


def test_grid_rejects_even_or_tiny_node_counts():
    with pytest.raises(DomainError):
        Grid1D(1.0, 10)
    with pytest.raises(DomainError):
        Grid1D(1.0, 1)
    with pytest.raises(DomainError):
        Grid1D(0.0, 11)


def test_check_field_length():
    g = Grid1D(1.0, 11)
    with pytest.raises(DimensionError):
        check_field(np.zeros(10), g)
    assert check_field(np.zeros(11), g).shape == (11,)


def test_thomas_matches_banded_solver():
    rng = np.random.default_rng(0)
    n = 50
    lower = rng.normal(size=n)
    upper = rng.normal(size=n)
    diag = 4.0 + rng.random(n)
    for rhs in (rng.normal(size=n), rng.normal(size=n) + 1j * rng.normal(size=n)):
        ab = np.zeros((3, n), dtype=rhs.dtype)
        ab[0, 1:] = upper[:-1]
        ab[1, :] = diag
        ab[2, :-1] = lower[1:]
        expected = solve_banded((1, 1), ab, rhs)
        assert np.allclose(solve_tridiagonal(lower, diag, upper, rhs), expected, rtol=1e-12, atol=1e-12)


def test_thomas_broadcasts_scalars():
    rhs = np.ones(5)
    x = solve_tridiagonal(-1.0, 3.0, -1.0, rhs)
    residual = 3 * x - np.concatenate(([0.0], x[:-1])) - np.concatenate((x[1:], [0.0]))
    assert np.allclose(residual, rhs)


def test_integrals_of_gaussian():
    g = Grid1D(22.0, 4001)
    f = np.exp(-g.x ** 2)
    assert integrate(f, g) == pytest.approx(math.sqrt(math.pi), rel=1e-12)
    assert l1_norm(-f, g) == pytest.approx(math.sqrt(math.pi), rel=1e-12)
    assert l2_norm(f, g) == pytest.approx(math.sqrt(math.sqrt(math.pi / 2)), rel=1e-12)


def test_central_difference_is_second_order():
    errors = []
    for n in (201, 401):
        g = Grid1D(5.0, n)
        errors.append(np.max(np.abs(dx_central(np.sin(g.x), g) - np.cos(g.x))))
    assert errors[0] / errors[1] > 3.5


def test_h_minus1_norm_matches_dense_solve():
    g = Grid1D(5.0, 201)
    rng = np.random.default_rng(3)
    m = g.n_nodes - 2
    operator = (1.0 + 2.0 / g.h ** 2) * np.eye(m) - (np.eye(m, k=1) + np.eye(m, k=-1)) / g.h ** 2
    for f in (np.exp(-g.x ** 2) * np.cos(3 * g.x), rng.normal(size=g.n_nodes)):
        inner = f[1:-1]
        expected = math.sqrt(g.h * inner @ np.linalg.solve(operator, inner))
        assert h_minus1_norm(f, g) == pytest.approx(expected, rel=1e-10)


def test_central_difference_parity_and_triangle_inequality():
    g = Grid1D(5.0, 201)
    even = np.exp(-g.x ** 2) * np.cos(g.x)
    d_even = dx_central(even, g)
    assert np.array_equal(d_even[1:-1], -d_even[1:-1][::-1])
    assert np.allclose(d_even, -d_even[::-1], rtol=0.0, atol=1e-13)
    assert d_even[g.center] == 0.0
    rng = np.random.default_rng(11)
    for _ in range(5):
        f, k = rng.normal(size=g.n_nodes), rng.normal(size=g.n_nodes)
        combined = l2_norm(dx_central(f + k, g), g)
        assert combined <= l2_norm(dx_central(f, g), g) + l2_norm(dx_central(k, g), g) + 1e-12


def test_sobolev_norm_ordering():
    g = Grid1D(22.0, 801)
    f = np.exp(-g.x ** 2)
    assert h_minus1_norm(f, g) < l2_norm(f, g) < h1_norm(f, g)
    assert h_minus1_norm(g.zeros(), g) == 0.0
    assert h_minus1_norm(2 * f, g) == pytest.approx(2 * h_minus1_norm(f, g), rel=1e-12)


def test_discrete_delta_has_unit_mass():
    g = Grid1D(3.0, 61)
    assert integrate(discrete_delta(g), g) == pytest.approx(1.0)


def test_mollifier_is_normalized_and_even():
    g = Grid1D(5.0, 1001)
    rho = mollifier(10 * g.h, g)
    assert integrate(rho, g) == pytest.approx(1.0, rel=1e-12)
    assert np.array_equal(rho, rho[::-1])
    assert np.all(rho[np.abs(g.x) >= 10 * g.h] == 0.0)


def test_mollifier_rejects_unresolved_width():
    g = Grid1D(5.0, 1001)
    with pytest.raises(ResolutionError):
        mollifier(2 * g.h, g)


def test_smoothed_sign_shape():
    g = Grid1D(5.0, 1001)
    w = 10 * g.h
    s = smoothed_sign(w, g)
    assert s[g.center] == 0.0
    assert np.allclose(s, -s[::-1])
    assert np.allclose(s[g.x <= -w], 1.0)
    assert np.allclose(s[g.x >= w], -1.0)
    assert np.all(np.diff(s) <= 1e-15)


def test_time_series_ordering():
    series = TimeSeries.starting_at(1.0)
    series.append(0.5, 2.0)
    assert series.last == 2.0
    assert series.at(0.25) == pytest.approx(1.5)
    with pytest.raises(DomainError):
        series.append(0.5, 3.0)
    with pytest.raises(DomainError):
        TimeSeries([0.1], [1.0])
    with pytest.raises(DomainError):
        TimeSeries().last


def test_measure_pairing():
    psi = TimeSeries([0.0, 0.5, 1.0], [1.0, 1.0, 1.0])
    assert measure_pairing(psi, lambda t: 2.0) == pytest.approx(2.0)
    assert measure_pairing(TimeSeries.starting_at(3.0), lambda t: 1.0) == 0.0
    with pytest.raises(DomainError):
        measure_pairing(TimeSeries(), lambda t: 1.0)


if __name__ == '__main__':
    print("=" * 60)
    print("NUMERICS TESTS")
    print("=" * 60)
    for name, test in sorted(globals().items()):
        if name.startswith('test_') and callable(test):
            test()
            print(f"  ✓ {name}")
    print("=" * 60)
