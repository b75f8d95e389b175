#!/usr/bin/env python3
"""
Reference Wave Test Script
Closed forms, profile integration and the shock profile phi
"""

import math

import numpy as np
import pytest

from numerics import DomainError, Grid1D, UnsupportedParameterError
from solvers import (
    WaveParams,
    build_reference_wave,
    closed_form_initial_data,
    closed_form_jump,
    closed_form_r,
    integrate_r_eps,
    phi_of,
    profile_residual,
)


GRID = Grid1D(22.0, 1001)


def test_initial_data_per_branch():
    assert closed_form_initial_data(-1.5, 1.0, 1.0) == pytest.approx((1.0, math.sqrt(0.5)))
    assert closed_form_initial_data(-0.5, 2.0, 1.0) == pytest.approx((2.0, 2.0 * math.sqrt(0.5)))
    with pytest.raises(UnsupportedParameterError):
        closed_form_initial_data(1.0, 1.0, 1.0)


def test_parameter_validation():
    with pytest.raises(UnsupportedParameterError):
        WaveParams(b=1.0)
    with pytest.raises(UnsupportedParameterError):
        WaveParams(eps=-0.1)
    with pytest.raises(DomainError):
        closed_form_r(WaveParams(eps=0.1), GRID)


def test_closed_form_is_continuous_at_origin():
    for b in (-1.5, -1.0, -0.5, 0.5):
        assert closed_form_jump(WaveParams(b=b, eps=0.0)) <= 1e-12


def test_closed_form_value_at_one():
    grid = Grid1D(2.0, 401)
    node = grid.center + 100
    assert grid.x[node] == pytest.approx(1.0)
    r = closed_form_r(WaveParams(b=-1.5, eps=0.0, A=1.0, C=1.0), grid).r
    k = math.sqrt(2.5)
    assert r[node] == pytest.approx(math.sqrt(0.5 / 2.5) * math.sin(k) + math.cos(k), rel=1e-12)
    assert r[node] == pytest.approx(0.4369, abs=1e-4)


def test_ode_reproduces_closed_form():
    window = np.abs(GRID.x) <= 5.0
    for b in (-1.5, -0.5):
        p = WaveParams(b=b, eps=0.0, A=1.0, C=1.0)
        ode = integrate_r_eps(p, GRID, substeps=10)
        exact = closed_form_r(p, GRID)
        assert np.max(np.abs(ode.r - exact.r)[window]) <= 1e-6
        assert np.max(np.abs(ode.r_prime - exact.r_prime)[window]) <= 1e-6


def test_euler_is_less_accurate_than_rk4():
    p = WaveParams(b=-1.5, eps=0.0)
    window = np.abs(GRID.x) <= 5.0
    exact = closed_form_r(p, GRID).r
    rk4 = integrate_r_eps(p, GRID, substeps=10, method='rk4').r
    euler = integrate_r_eps(p, GRID, substeps=10, method='euler').r
    assert np.max(np.abs(euler - exact)[window]) > 100 * np.max(np.abs(rk4 - exact)[window])
    with pytest.raises(UnsupportedParameterError):
        integrate_r_eps(p, GRID, method='midpoint')


def test_eps_limit_approaches_closed_form():
    window = np.abs(GRID.x) <= 2.0
    limit = closed_form_r(WaveParams(eps=0.0), GRID).r
    gaps = [
        np.max(np.abs(integrate_r_eps(WaveParams(eps=eps), GRID).r - limit)[window])
        for eps in (1e-1, 1e-2, 1e-3)
    ]
    assert gaps[0] > gaps[1] > gaps[2]
    assert gaps[2] <= 1e-2


def test_phi_is_an_entropy_shock():
    wave = build_reference_wave(WaveParams(eps=0.1), GRID)
    mid = GRID.center
    assert wave.phi[mid] == 0.0
    assert np.all(wave.phi[:mid] > 0) and np.all(wave.phi[mid + 1:] < 0)
    off_center = np.arange(GRID.n_nodes) != mid
    assert np.allclose((wave.phi ** 2 - 0.1 * wave.r ** 2)[off_center], 1.0)
    left, right = wave.phi_traces
    assert left == pytest.approx(math.sqrt(1.1))
    assert right == pytest.approx(-math.sqrt(1.1))
    assert wave.r0 == 1.0


def test_phi_of_eps_zero_is_minus_sign():
    assert np.array_equal(phi_of(GRID.zeros(), 0.0, GRID), -np.sign(GRID.x))


def test_mollified_phi_matches_away_from_origin():
    wave = build_reference_wave(WaveParams(eps=0.1), GRID)
    width = 10 * GRID.h
    smooth = wave.mollified_phi(width)
    far = np.abs(GRID.x) >= width
    assert np.allclose(smooth[far], wave.phi[far])
    assert smooth[GRID.center] == 0.0


def test_profile_residual_is_second_order():
    p = WaveParams(eps=0.1)
    coarse = profile_residual(integrate_r_eps(p, Grid1D(22.0, 401)))
    fine = profile_residual(integrate_r_eps(p, Grid1D(22.0, 801)))
    assert coarse / fine > 3.0


if __name__ == '__main__':
    print("=" * 60)
    print("REFERENCE WAVE TESTS")
    print("=" * 60)
    for name, test in sorted(globals().items()):
        if name.startswith('test_') and callable(test):
            test()
            print(f"  ✓ {name}")
    print("=" * 60)
