#!/usr/bin/env python3
"""
Coupled Run Test Script
Full and linearized time loops on a coarse grid
"""

import numpy as np
import pytest

from commands.common import gaussian
from commands.full import full_initial_data, mass_balance
from numerics import DivergenceError, DomainError, l2_norm
from solvers import (
    FULL_RUN_NOTES,
    NORM_COLUMNS,
    MeasureSolution,
    RunBundle,
    build_reference_wave,
    explicit_v_eps0,
    lf_step_linear,
    psi_update,
    reference_boundary,
    run_full,
    run_linearized,
    run_linearized_eps,
    run_linearized_eps0,
    weighted_shock_energy,
)
from utils import build_config


COARSE = {'n_nodes': 401, 'dt': 0.01, 'T': 0.2, 'output_every': 5}


def _config(**overrides):
    return build_config({**COARSE, **overrides})


def _perturbation(sim_cfg):
    bump = gaussian(sim_cfg.grid)
    return bump.astype(complex), bump.copy()


def test_zero_perturbation_stays_zero():
    for overrides in ({}, {'v_mode': 'regularized'}, {'eps': 0.0}):
        sim_cfg = _config(**overrides)
        g = sim_cfg.grid
        bundle = run_linearized(sim_cfg, g.zeros(complex), g.zeros())
        assert np.all(bundle.state.u == 0)
        assert np.all(bundle.state.v.v_tilde == 0)
        assert bundle.state.v.psi_now == 0.0


def test_linearized_run_is_linear():
    for eps in (0.1, 0.0):
        sim_cfg = _config(eps=eps)
        u_bar, v_bar = _perturbation(sim_cfg)
        once = run_linearized(sim_cfg, u_bar, v_bar).state
        twice = run_linearized(sim_cfg, 2 * u_bar, 2 * v_bar).state
        assert np.allclose(twice.u, 2 * once.u, rtol=1e-8, atol=1e-12)
        assert np.allclose(twice.v.v_tilde, 2 * once.v.v_tilde, rtol=1e-8, atol=1e-12)
        assert twice.v.psi_now == pytest.approx(2 * once.v.psi_now, rel=1e-8, abs=1e-12)


def test_full_run_mass_balance():
    for eps in (0.1, 0.0):
        sim_cfg = _config(eps=eps)
        wave = build_reference_wave(sim_cfg.wave, sim_cfg.grid)
        u0, v0 = full_initial_data(wave, sim_cfg.delta, *_perturbation(sim_cfg))
        bundle = run_full(sim_cfg, u0, v0, boundary=reference_boundary(wave))
        assert bundle.steps == 20
        assert bundle.times[-1] == pytest.approx(0.2)
        assert mass_balance(bundle) <= 1e-9


def test_full_run_columns_describe_the_whole_long_wave():
    sim_cfg = _config(eps=0.0, T=0.05)
    wave = build_reference_wave(sim_cfg.wave, sim_cfg.grid)
    u0, v0 = full_initial_data(wave, sim_cfg.delta, *_perturbation(sim_cfg))
    bundle = run_full(sim_cfg, u0, v0, boundary=reference_boundary(wave), keep_snapshots=True)
    frame = bundle.norms_frame()
    assert frame['l2_vtilde'].iloc[-1] == pytest.approx(l2_norm(bundle.snapshots[-1].v, sim_cfg.grid))
    assert frame['shock_energy'].iloc[0] == 0.0
    assert frame['shock_energy'].iloc[-1] > 0.0
    assert any('l2_vtilde' in note for note in FULL_RUN_NOTES)
    assert any('shock_energy' in note for note in FULL_RUN_NOTES)


def test_regularized_centered_run_conserves_energy():
    sim_cfg = _config(v_mode='regularized', transport_scheme='crank_nicolson')
    bundle = run_linearized(sim_cfg, *_perturbation(sim_cfg))
    energy = bundle.norms['energy'].values
    assert abs(energy[-1] - energy[0]) <= 1e-9 * max(1.0, abs(energy[0]))


def test_decomposed_run_accumulates_measure():
    sim_cfg = _config()
    bundle = run_linearized(sim_cfg, *_perturbation(sim_cfg))
    assert bundle.state.v.psi_now > 0
    assert bundle.state.v.v_tilde[sim_cfg.grid.center] == 0.0
    assert np.all(np.isfinite(bundle.norms_frame()[list(NORM_COLUMNS)].to_numpy()))


def test_shock_energy_decays_without_coupling():
    sim_cfg = _config()
    g = sim_cfg.grid
    wave = build_reference_wave(sim_cfg.wave, g)
    coeff = 2.0 * wave.phi
    dt = 0.4 * g.h / float(np.max(np.abs(coeff)))
    ms = MeasureSolution.from_data(gaussian(g, center=-1.0), g, wave.phi_traces)
    energies = [weighted_shock_energy(ms, wave.phi, g)]
    for _ in range(100):
        ms = lf_step_linear(ms, coeff, None, dt, g)
        ms = psi_update(ms, dt, wave.phi_traces, g)
        energies.append(weighted_shock_energy(ms, wave.phi, g))
    energies = np.array(energies)
    assert np.all(np.diff(energies) <= g.h * energies[0])
    assert energies[-1] < 0.5 * energies[0]


def _fixed_point_residual(n_nodes, dt):
    sim_cfg = _config(n_nodes=n_nodes, dt=dt)
    g = sim_cfg.grid
    wave = build_reference_wave(sim_cfg.wave, g)
    bundle = run_full(sim_cfg, wave.r.astype(complex), wave.phi.copy(), boundary=reference_boundary(wave))
    drift = bundle.state.u * np.exp(-1j * sim_cfg.wave.b * bundle.state.t) - wave.r
    window = np.abs(g.x) <= 5.0
    return float(np.sqrt(g.h * np.sum(np.abs(drift[window]) ** 2)))


def test_reference_wave_is_a_discrete_fixed_point():
    coarse = _fixed_point_residual(401, 0.01)
    fine = _fixed_point_residual(801, 0.005)
    assert fine < coarse


def test_eps_dispatch_is_checked():
    zero = _config(eps=0.0)
    positive = _config()
    g = zero.grid
    with pytest.raises(DomainError):
        run_linearized_eps(zero, g.zeros(complex), g.zeros())
    with pytest.raises(DomainError):
        run_linearized_eps0(positive, g.zeros(complex), g.zeros())


def test_eps0_measure_is_the_explicit_solution():
    sim_cfg = _config(eps=0.0)
    u_bar, v_bar = _perturbation(sim_cfg)
    bundle = run_linearized(sim_cfg, u_bar, v_bar)
    exact = explicit_v_eps0(v_bar, sim_cfg.T, sim_cfg.grid)
    assert bundle.state.v.psi_now == pytest.approx(exact.psi_now, rel=1e-12)
    assert np.allclose(bundle.state.v.v_tilde, exact.v_tilde)


def test_non_finite_norm_is_divergence():
    bundle = RunBundle()
    values = {name: 1.0 for name in NORM_COLUMNS}
    bundle.record(0.0, values)
    values['energy'] = float('nan')
    with pytest.raises(DivergenceError):
        bundle.record(0.1, values)


def test_snapshots_at_output_steps():
    sim_cfg = _config()
    bundle = run_linearized(sim_cfg, *_perturbation(sim_cfg), keep_snapshots=True)
    assert [round(s.t, 10) for s in bundle.snapshots] == [0.0, 0.05, 0.1, 0.15, 0.2]
    assert len(bundle.norms_frame()) == 5
    assert bundle.snapshots[-1].psi == bundle.state.v.psi_now


if __name__ == '__main__':
    print("=" * 60)
    print("COUPLED RUN TESTS")
    print("=" * 60)
    for name, test in sorted(globals().items()):
        if name.startswith('test_') and callable(test):
            test()
            print(f"  ✓ {name}")
    print("=" * 60)
