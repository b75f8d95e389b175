"""
validate: the acceptance suite.

CRITERIA lists the ten acceptance checks in order; each check returns
(passed, detail, value). The fast suite runs the same checks on a coarser
grid and shorter horizons, within FAST_SUITE_BUDGET_S of wall clock.
"""
import logging
import os
import time
from dataclasses import dataclass, replace

import numpy as np
import pandas as pd
from scipy.integrate import trapezoid

import config as cfg
from numerics import (
    EXIT_CRITERION_FAILURE,
    EXIT_OK,
    Grid1D,
    integrate,
    l1_norm,
    measure_pairing,
)
from solvers import (
    MeasureSolution,
    NORM_COLUMNS,
    WaveParams,
    build_reference_wave,
    closed_form_jump,
    closed_form_r,
    explicit_v_eps0,
    integrate_r_eps,
    lf_step_linear,
    phi_of,
    psi_update,
    reference_boundary,
    run_full,
    run_linearized,
)
from utils import build_config, ensure_dir, write_frame
from .common import gaussian, print_banner
from .full import full_initial_data, mass_balance
from .report import ExperimentReport, write_report
from .stability import cmd_stability

logger = logging.getLogger(__name__)

# norms quadratic in the data; the rest are homogeneous of degree one
QUADRATIC_NORMS = ('mass', 'energy', 'shock_energy')

# relative energy drift indistinguishable from accumulated round-off
ENERGY_FLOOR = 1e-10


@dataclass(frozen=True)
class Suite:
    name: str
    n_nodes: int
    dt: float
    T: float
    energy_T: float
    oracle_nodes: tuple
    output_every: int


SUITES = {
    'fast': Suite('fast', n_nodes=1001, dt=1e-3, T=1.0, energy_T=0.5, oracle_nodes=(1001, 2001), output_every=10),
    'full': Suite('full', n_nodes=cfg.N_NODES, dt=cfg.DT, T=cfg.T_FINAL, energy_T=cfg.T_FINAL,
                  oracle_nodes=(2001, 4001), output_every=40),
}


@dataclass(frozen=True)
class Context:
    suite: Suite
    out_dir: str
    workers: int = 1

    def config(self, **overrides):
        values = {
            'n_nodes': self.suite.n_nodes,
            'dt': self.suite.dt,
            'T': self.suite.T,
            'output_every': self.suite.output_every,
        }
        values.update(overrides)
        return build_config(values)


def _protocol_data(grid):
    bump = gaussian(grid)
    return bump.astype(complex), bump.copy()


# ---------------------------------------------------------------------------
# Criteria
# ---------------------------------------------------------------------------

def check_reference_oracle(ctx):
    grid = Grid1D(cfg.X_MAX, ctx.suite.n_nodes)
    window = np.abs(grid.x) <= 5.0
    errors, jumps = [], []
    for b in (-1.5, -0.5):
        p = WaveParams(b=b, eps=0.0, A=1.0, C=1.0)
        ode = integrate_r_eps(p, grid, substeps=10)
        exact = closed_form_r(p, grid)
        errors.append(float(np.max(np.abs(ode.r - exact.r)[window])))
        jumps.append(closed_form_jump(p))
    worst, worst_jump = max(errors), max(jumps)
    return (
        worst <= 1e-6 and worst_jump <= 1e-12,
        f"sup error on [-5,5] = {worst:.3e}; jump of (r, r') at 0 = {worst_jump:.3e}",
        worst,
    )


def check_eps_limit(ctx):
    grid = Grid1D(cfg.X_MAX, ctx.suite.n_nodes)
    window = np.abs(grid.x) <= 2.0
    limit = closed_form_r(WaveParams(b=cfg.B, eps=0.0, A=cfg.A, C=cfg.C), grid).r
    gaps = []
    for eps in (1e-1, 1e-2, 1e-3):
        r_eps = integrate_r_eps(WaveParams(b=cfg.B, eps=eps, A=cfg.A, C=cfg.C), grid).r
        gaps.append(float(np.max(np.abs(r_eps - limit)[window])))
    decreasing = all(a > b for a, b in zip(gaps, gaps[1:]))
    return (
        decreasing and gaps[-1] <= 1e-2,
        "sup_[-2,2] |r_eps - r| = " + ", ".join(f"{g:.3e}" for g in gaps),
        gaps[-1],
    )


def check_mass(ctx):
    sim_cfg = ctx.config()
    wave = build_reference_wave(sim_cfg.wave, sim_cfg.grid)
    u_bar, v_bar = _protocol_data(sim_cfg.grid)
    u0, v0 = full_initial_data(wave, sim_cfg.delta, u_bar, v_bar)
    bundle = run_full(sim_cfg, u0, v0, boundary=reference_boundary(wave))
    drift = mass_balance(bundle)
    return drift <= 1e-6, f"relative mass drift (boundary inflow removed) = {drift:.3e}", drift


def _energy_drift(ctx, dt):
    sim_cfg = ctx.config(v_mode='regularized', transport_scheme='crank_nicolson',
                         dt=dt, T=ctx.suite.energy_T, output_every=10)
    g = sim_cfg.grid
    bundle = run_linearized(sim_cfg, gaussian(g).astype(complex), gaussian(g, center=-4.0))
    energy = bundle.norms['energy'].values
    return float(np.max(np.abs(energy - energy[0])) / abs(energy[0]))


def check_energy(ctx):
    coarse = _energy_drift(ctx, 5e-4)
    fine = _energy_drift(ctx, 2.5e-4)
    improves = fine <= coarse / 3.0 or fine <= ENERGY_FLOOR
    return (
        coarse <= 1e-3 and improves,
        f"relative drift {coarse:.3e} at dt=5e-4, {fine:.3e} at dt=2.5e-4",
        coarse,
    )


# eps = 0 shock: coefficient -2 sgn(x), traces (phi(0-), phi(0+))
SHOCK_TRACES = (1.0, -1.0)


def _lf_measure_run(grid, v0, dt, steps):
    """eps = 0 decomposed transport with coefficient -2 sgn(x); returns the final MeasureSolution"""
    coeff = 2.0 * phi_of(grid.zeros(), 0.0, grid)
    ms = MeasureSolution.from_data(v0, grid, SHOCK_TRACES)
    for _ in range(steps):
        ms = lf_step_linear(ms, coeff, None, dt, grid)
        ms = psi_update(ms, dt, SHOCK_TRACES, grid)
    return ms


def _jump_path_psi(grid, v0, dt, steps):
    """Psi accumulated from the flux jump with v_tilde taken from the explicit solution"""
    ms = MeasureSolution.from_data(v0, grid, SHOCK_TRACES)
    for n in range(1, steps + 1):
        ms = replace(ms, v_tilde=explicit_v_eps0(v0, n * dt, grid).v_tilde)
        ms = psi_update(ms, dt, SHOCK_TRACES, grid)
    return ms.psi


def check_explicit_oracle(ctx):
    T, dt = ctx.suite.T, ctx.suite.dt
    steps = int(round(T / dt))
    l1_constants, psi_constants, drift = [], [], 0.0
    for n in ctx.suite.oracle_nodes:
        grid = Grid1D(cfg.X_MAX, n)
        v0 = gaussian(grid)
        ms = _lf_measure_run(grid, v0, dt, steps)
        exact = explicit_v_eps0(v0, T, grid)
        l1_constants.append(l1_norm(ms.v_tilde - exact.v_tilde, grid) / grid.h)
        psi_constants.append(abs(ms.psi_now - exact.psi_now) / grid.h)
        total = grid.h * (np.sum(ms.v_tilde) - np.sum(v0)) + ms.psi_now
        drift = max(drift, abs(total) / (grid.h * np.sum(v0)))
    l1_ratio = l1_constants[1] / l1_constants[0]
    psi_ratio = psi_constants[1] / psi_constants[0]

    grid = Grid1D(cfg.X_MAX, ctx.suite.oracle_nodes[-1])
    v0 = gaussian(grid)
    psi = _jump_path_psi(grid, v0, dt, steps)
    psi_error = max(abs(value - explicit_v_eps0(v0, t, grid).psi_now) for t, value in zip(psi.t, psi.values))

    return (
        0.5 <= l1_ratio <= 2.0 and 0.5 <= psi_ratio <= 2.0 and drift <= 1e-10 and psi_error <= 1e-3,
        f"L1 constants C = {l1_constants[0]:.4g}, {l1_constants[1]:.4g}; "
        f"|Psi - Psi_exact| / h = {psi_constants[0]:.4g}, {psi_constants[1]:.4g}; "
        f"relative drift of h sum(v_tilde) + Psi = {drift:.3e}; "
        f"max |Psi - Psi_exact| along the jump path = {psi_error:.3e}",
        psi_error,
    )


TEST_FUNCTIONS = (
    lambda t, x: np.exp(-x ** 2),
    lambda t, x: x * np.exp(-x ** 2),
    lambda t, x: np.exp(-x ** 2 / 4.0),
    lambda t, x: np.cos(x) * np.exp(-x ** 2 / 2.0),
    lambda t, x: (1.0 + t) * np.exp(-(x - 1.0) ** 2),
)


def _pairings(bundle, grid):
    """int_0^T <v(t), f(t, .)> dt for each test function, Dirac part included"""
    t = np.array([snap.t for snap in bundle.snapshots])
    psi = bundle.state.v.psi
    result = []
    for f in TEST_FUNCTIONS:
        values = [float(integrate(snap.v * f(snap.t, grid.x), grid)) for snap in bundle.snapshots]
        dirac = measure_pairing(psi, lambda s, f=f: f(s, 0.0))
        result.append(float(trapezoid(values, t)) + dirac)
    return np.array(result)


def width_scaling_ok(widths, mismatches):
    """Mismatch non-increasing as the width shrinks, mismatch / width within 2x of its widest value"""
    ratios = [m / w for m, w in zip(mismatches, widths)]
    # a width-independent mismatch fails both tests
    shrinking = all(b <= a for a, b in zip(mismatches, mismatches[1:]))
    bounded = all(np.isfinite(ratios)) and ratios[-1] <= 2.0 * ratios[0]
    return shrinking and bounded, ratios


def check_cross_validation(ctx):
    base = ctx.config()
    h = base.grid.h
    u_bar, v_bar = _protocol_data(base.grid)
    widths, mismatches = [], []
    for cells in (20, 10, 5):
        width = cells * h
        pair = {}
        for mode in ('decomposed', 'regularized'):
            sim_cfg = base.with_values(v_mode=mode, mollify_width=width)
            bundle = run_linearized(sim_cfg, u_bar, v_bar, keep_snapshots=True)
            pair[mode] = _pairings(bundle, base.grid)
        widths.append(width)
        mismatches.append(float(np.max(np.abs(pair['decomposed'] - pair['regularized']))))
    ok, ratios = width_scaling_ok(widths, mismatches)
    return (
        ok,
        "mismatch at 20h, 10h, 5h = " + ", ".join(f"{m:.4g}" for m in mismatches)
        + "; mismatch / width = " + ", ".join(f"{r:.4g}" for r in ratios),
        max(ratios),
    )


def _scaling_error(frame_1, frame_a, alpha):
    worst = 0.0
    for name in NORM_COLUMNS:
        power = 2 if name in QUADRATIC_NORMS else 1
        expected = alpha ** power * frame_1[name].to_numpy()
        scale = float(np.max(np.abs(expected)))
        if scale == 0:
            continue
        worst = max(worst, float(np.max(np.abs(frame_a[name].to_numpy() - expected))) / scale)
    return worst


def check_linearity(ctx):
    worst = 0.0
    for eps in (cfg.EPS, 0.0):
        sim_cfg = ctx.config(eps=eps)
        u_bar, v_bar = _protocol_data(sim_cfg.grid)
        wave = build_reference_wave(sim_cfg.wave, sim_cfg.grid)
        reference = run_linearized(sim_cfg, u_bar, v_bar, wave).norms_frame()
        for alpha in (2.0, 4.0):
            scaled = run_linearized(sim_cfg, alpha * u_bar, alpha * v_bar, wave).norms_frame()
            worst = max(worst, _scaling_error(reference, scaled, alpha))
    return worst <= 1e-8, f"max relative deviation from exact scaling = {worst:.3e}", worst


def check_zero_stability(ctx):
    worst = 0.0
    for eps, mode in ((cfg.EPS, 'decomposed'), (cfg.EPS, 'regularized'), (0.0, 'decomposed')):
        sim_cfg = ctx.config(eps=eps, v_mode=mode)
        g = sim_cfg.grid
        bundle = run_linearized(sim_cfg, g.zeros(complex), g.zeros())
        frame = bundle.norms_frame()
        worst = max(worst, float(np.max(np.abs(frame[list(NORM_COLUMNS)].to_numpy()))))
        worst = max(worst, float(np.max(np.abs(bundle.state.u))), float(np.max(np.abs(bundle.state.v.v_tilde))))
    return worst <= 1e-12, f"largest norm from zero data = {worst:.3e}", worst


def check_protocol(ctx):
    sim_cfg = ctx.config()
    u_bar, v_bar = _protocol_data(sim_cfg.grid)
    out_dir = ensure_dir(os.path.join(ctx.out_dir, 'stability'))
    report = cmd_stability(sim_cfg, out_dir, u_bar, v_bar, cfg.STABILITY_SWEEP, ctx.workers)
    details = "; ".join(f"{c.name}: {'pass' if c.passed else 'fail'}" for c in report.criteria)
    return report.passed, f"{details} (artifacts in {out_dir})", report.summary['sup_D']


def check_width_independence(ctx):
    base = ctx.config(eps=0.0)
    h = base.grid.h
    u_bar, v_bar = _protocol_data(base.grid)
    sups = []
    for cells in (20, 10, 5):
        bundle = run_linearized(base.with_values(mollify_width=cells * h), u_bar, v_bar)
        sups.append(bundle.sup('h1_u'))
    change = max(abs(s - sups[0]) for s in sups) / sups[0]
    return (
        change <= 0.1,
        "sup_t ||u||_H1 at widths 20h, 10h, 5h = " + ", ".join(f"{s:.6g}" for s in sups),
        change,
    )


CRITERIA = (
    ('reference_wave_oracle', check_reference_oracle),
    ('eps_limit', check_eps_limit),
    ('mass_conservation', check_mass),
    ('energy_conservation', check_energy),
    ('explicit_solution_oracle', check_explicit_oracle),
    ('regularized_vs_decomposed', check_cross_validation),
    ('linearity', check_linearity),
    ('zero_stability', check_zero_stability),
    ('stability_protocol', check_protocol),
    ('width_independence', check_width_independence),
)


def cmd_validate(suite, out_dir, workers=1, only=None):
    """
    Run the acceptance criteria of a suite.

    Wall-clock timings stay out of the report so that report.json,
    report.xlsx and report.pdf depend on the numerics only; they are
    logged and written to timing.csv instead.

    Args:
        suite: 'fast' or 'full'
        out_dir: directory for the report and sub-run artifacts
        workers: processes for the stability sweep
        only: optional iterable of criterion names to run

    Returns:
        (ExperimentReport with one flag per criterion run,
         DataFrame of seconds per criterion with a closing 'total' row)
    """
    settings = SUITES[suite]
    ctx = Context(settings, out_dir, workers)
    report = ExperimentReport(
        title=f"Acceptance suite ({suite})",
        config={k: v if not isinstance(v, tuple) else ','.join(map(str, v)) for k, v in vars(settings).items()},
    )
    rows = []
    started = time.perf_counter()
    for name, check in CRITERIA:
        if only and name not in only:
            continue
        logger.info("Checking %s", name)
        t0 = time.perf_counter()
        passed, detail, value = check(ctx)
        report.add(name, passed, detail, value)
        rows.append((name, time.perf_counter() - t0))
        logger.info("%s took %.1f s", name, rows[-1][1])

    rows.append(('total', time.perf_counter() - started))
    timing = pd.DataFrame(rows, columns=['criterion', 'seconds'])
    write_report(report, out_dir)
    write_frame(timing, os.path.join(out_dir, 'timing.csv'))
    return report, timing


def within_budget(suite, timing):
    """Only the fast suite carries a wall-clock budget"""
    if suite != 'fast':
        return True
    elapsed = float(timing['seconds'].iloc[-1])
    if elapsed > cfg.FAST_SUITE_BUDGET_S:
        logger.warning("Fast suite took %.1f s, budget is %d s", elapsed, cfg.FAST_SUITE_BUDGET_S)
        return False
    return True


def handle(args):
    out_dir = ensure_dir(args.out or os.path.join(cfg.DEFAULT_OUT_DIR, f'validate_{args.suite}'))
    print_banner(f"Acceptance suite: {args.suite}", out_dir=out_dir)
    report, timing = cmd_validate(args.suite, out_dir, args.workers, args.only)
    for criterion in report.criteria:
        print(f"  {'PASS' if criterion.passed else 'FAIL'}  {criterion.name}: {criterion.detail}")
    print(f"\n  elapsed: {timing['seconds'].iloc[-1]:.1f} s")
    ok = report.passed and within_budget(args.suite, timing)
    return EXIT_OK if ok else EXIT_CRITERION_FAILURE


def register(subparsers):
    parser = subparsers.add_parser('validate', help='run the acceptance criteria')
    parser.add_argument('--suite', choices=sorted(SUITES), default='fast')
    parser.add_argument('--out', metavar='DIR', default=None, help='output directory')
    parser.add_argument('--workers', type=int, default=1, help='processes for the stability sweep')
    parser.add_argument('--only', nargs='+', metavar='NAME', choices=[name for name, _ in CRITERIA],
                        help='run a subset of the criteria')
    parser.set_defaults(handler=handle)
    return parser
