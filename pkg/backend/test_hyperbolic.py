#!/usr/bin/env python3
"""
Hyperbolic Solver Test Script
Finite-volume stepping, the explicit eps = 0 measure and the Psi bookkeeping
"""

import math

import numpy as np
import pytest

from numerics import Grid1D, HorizonError, StepSizeError, UnsupportedParameterError
from solvers import (
    MeasureSolution,
    cn_transport_step,
    explicit_v_eps0,
    jump_source,
    lf_step_burgers,
    lf_step_linear,
    psi_update,
    traces,
)


GRID = Grid1D(10.0, 401)
SHOCK_TRACES = (1.0, -1.0)


def _shock_coeff(grid):
    return -2.0 * np.sign(grid.x)


def test_burgers_keeps_constant_state():
    v = np.ones(GRID.n_nodes)
    new = lf_step_burgers(v, None, 0.4 * GRID.h, 0.1, GRID)
    assert np.allclose(new, 1.0)


def test_burgers_conserves_total_amount():
    v = np.exp(-GRID.x ** 2)
    u = np.exp(-(GRID.x - 1.0) ** 2) + 0j
    total = v.sum()
    for _ in range(20):
        v = lf_step_burgers(v, u, 0.4 * GRID.h, 0.1, GRID)
    assert v.sum() == pytest.approx(total, rel=1e-12)


def test_burgers_rejects_large_step():
    v = np.ones(GRID.n_nodes)
    with pytest.raises(StepSizeError) as info:
        lf_step_burgers(v, None, GRID.h, 0.0, GRID)
    assert info.value.dt_max == pytest.approx(GRID.h / 2)


def test_explicit_measure_amplitude():
    grid = Grid1D(22.0, 4001)
    v0 = np.exp(-grid.x ** 2)
    for t in (0.1, 0.5, 1.0):
        ms = explicit_v_eps0(v0, t, grid)
        assert ms.psi_now == pytest.approx(math.sqrt(math.pi) * math.erf(2 * t), rel=1e-4)
        assert ms.v_tilde[grid.center] == 0.0
    assert explicit_v_eps0(v0, 0.0, grid).psi_now == 0.0


def test_explicit_measure_horizon():
    v0 = np.exp(-GRID.x ** 2)
    with pytest.raises(HorizonError):
        explicit_v_eps0(v0, 6.0, GRID)
    with pytest.raises(HorizonError):
        explicit_v_eps0(v0, -0.1, GRID)


def test_decomposed_transport_needs_entering_characteristics():
    ms = MeasureSolution.from_data(np.exp(-GRID.x ** 2), GRID)
    with pytest.raises(UnsupportedParameterError):
        lf_step_linear(ms, 2.0 * np.sign(GRID.x), None, 0.25 * GRID.h, GRID)


def test_unit_courant_transport_is_exact_shift():
    v0 = np.exp(-(GRID.x + 2.0) ** 2) + 0.5 * np.exp(-(GRID.x - 3.0) ** 2)
    dt = GRID.h / 2
    steps = 40
    ms = MeasureSolution.from_data(v0, GRID)
    for _ in range(steps):
        ms = lf_step_linear(ms, _shock_coeff(GRID), None, dt, GRID)
    exact = explicit_v_eps0(v0, steps * dt, GRID)
    # the flank nodes close on extrapolated traces and are not a pure shift
    away = np.ones(GRID.n_nodes, dtype=bool)
    away[[GRID.center - 1, GRID.center + 1]] = False
    assert np.allclose(ms.v_tilde[away], exact.v_tilde[away], atol=1e-12)


def _shock_run(grid, v0, dt, steps, source=None):
    ms = MeasureSolution.from_data(v0, grid, SHOCK_TRACES)
    jumps = [ms.last_jump]
    for _ in range(steps):
        ms = lf_step_linear(ms, _shock_coeff(grid), source, dt, grid)
        ms = psi_update(ms, dt, SHOCK_TRACES, grid)
        jumps.append(ms.last_jump)
    return ms, np.array(jumps)


def test_psi_tracks_explicit_amplitude():
    grid = Grid1D(10.0, 2001)
    v0 = np.exp(-grid.x ** 2)
    dt = grid.h / 2
    ms, _ = _shock_run(grid, v0, dt, int(round(0.5 / dt)))
    assert ms.t == pytest.approx(0.5)
    assert ms.psi_now == pytest.approx(explicit_v_eps0(v0, 0.5, grid).psi_now, abs=grid.h)


def test_psi_tracks_explicit_amplitude_at_small_courant_number():
    grid = Grid1D(10.0, 2001)
    v0 = np.exp(-grid.x ** 2)
    dt = 0.05 * grid.h
    ms, _ = _shock_run(grid, v0, dt, int(round(0.5 / dt)))
    assert ms.t == pytest.approx(0.5)
    assert ms.psi_now == pytest.approx(explicit_v_eps0(v0, 0.5, grid).psi_now, abs=2 * grid.h)
    assert grid.h * ms.v_tilde.sum() + ms.psi_now == pytest.approx(grid.h * v0.sum(), abs=1e-11)


def test_decomposed_transport_conserves_total_mass():
    v0 = np.exp(-(GRID.x + 1.0) ** 2) + 0.5 * np.exp(-(GRID.x - 0.5) ** 2)
    source = 0.3 * np.exp(-GRID.x ** 2)
    dt = 0.05 * GRID.h
    steps = 200
    ms, _ = _shock_run(GRID, v0, dt, steps, source)
    injected = steps * dt * GRID.h * source[1:-1].sum()
    total = GRID.h * ms.v_tilde.sum() + ms.psi_now
    assert total == pytest.approx(GRID.h * v0.sum() + injected, abs=1e-11)
    assert ms.v_tilde[GRID.center] == 0.0
    assert ms.absorbed == 0.0


def test_center_sample_moves_into_psi():
    v0 = np.zeros(GRID.n_nodes)
    v0[GRID.center] = 1.0
    ms, jumps = _shock_run(GRID, v0, 0.25 * GRID.h, 1)
    assert np.all(ms.v_tilde == 0.0)
    assert np.all(jumps == 0.0)
    assert ms.psi_now == pytest.approx(GRID.h)


def test_entering_mass_makes_jump_nonpositive():
    v0 = np.exp(-GRID.x ** 2)
    ms, jumps = _shock_run(GRID, v0, 0.25 * GRID.h, 100)
    assert np.all(jumps <= 0.0)
    assert np.all(np.diff(ms.psi.values) >= 0.0)
    assert ms.psi_now > 0.0


def test_burgers_keeps_stationary_shock():
    v = -np.sign(GRID.x)
    variation = np.sum(np.abs(np.diff(v)))
    for _ in range(1000):
        v = lf_step_burgers(v, None, 0.4 * GRID.h, 0.0, GRID)
        next_variation = np.sum(np.abs(np.diff(v)))
        assert next_variation <= variation + 1e-12
        assert np.max(np.abs(v)) <= 1.0 + 1e-12
        variation = next_variation
    assert v[GRID.center] == 0.0


def test_traces_and_jump_on_linear_data():
    grid = Grid1D(1.0, 11)
    v = np.where(grid.x < 0, 3.0 + grid.x, 5.0 - grid.x)
    ms = MeasureSolution.from_data(v, grid, SHOCK_TRACES)
    left, right = traces(ms, grid)
    assert left == pytest.approx(3.0)
    assert right == pytest.approx(5.0)
    assert jump_source(ms, SHOCK_TRACES, grid) == pytest.approx(-16.0)
    assert ms.last_jump == pytest.approx(-16.0)
    dt = 0.01
    ms = psi_update(ms, dt, SHOCK_TRACES, grid)
    assert ms.psi_now == pytest.approx(16.0 * dt)
    assert ms.t == pytest.approx(dt)


def test_trace_extrapolation_is_second_order():
    errors = []
    for n in (101, 201):
        grid = Grid1D(1.0, n)
        v = np.where(grid.x > 0, np.exp(-grid.x ** 2), 0.0)
        _, right = traces(MeasureSolution.from_data(v, grid), grid)
        errors.append(abs(right - 1.0))
    assert errors[0] == pytest.approx(2 * Grid1D(1.0, 101).h ** 2, rel=0.05)
    assert errors[0] / errors[1] > 3.5


def test_centered_transport_is_regularized_only():
    ms = MeasureSolution.from_data(np.exp(-GRID.x ** 2), GRID)
    with pytest.raises(UnsupportedParameterError):
        cn_transport_step(ms, np.ones(GRID.n_nodes), None, GRID.h, GRID)


def test_centered_transport_invariants():
    coeff = 1.0 + 0.5 * np.exp(-GRID.x ** 2)
    ms = MeasureSolution.from_data(np.exp(-(GRID.x - 1.0) ** 2), GRID, decomposed=False)
    total = ms.v_tilde.sum()
    weighted = np.sum(coeff * ms.v_tilde ** 2)
    for _ in range(50):
        ms = cn_transport_step(ms, coeff, None, GRID.h, GRID)
    assert ms.v_tilde.sum() == pytest.approx(total, rel=1e-11)
    assert np.sum(coeff * ms.v_tilde ** 2) == pytest.approx(weighted, rel=1e-11)


if __name__ == '__main__':
    print("=" * 60)
    print("HYPERBOLIC SOLVER TESTS")
    print("=" * 60)
    for name, test in sorted(globals().items()):
        if name.startswith('test_') and callable(test):
            test()
            print(f"  ✓ {name}")
    print("=" * 60)
