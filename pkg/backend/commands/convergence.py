"""
convergence: self-convergence orders of the building blocks.

Each study runs three levels and compares successive differences, so no
exact solution is needed: ratio = |q_1 - q_2| / |q_2 - q_3|, order = log2(ratio).
"""
import logging
import math
import os

import numpy as np
import pandas as pd

from numerics import EXIT_CRITERION_FAILURE, EXIT_OK, Grid1D, l2_norm
from solvers import (
    SchrodingerProblem,
    build_reference_wave,
    cn_step,
    integrate_r_eps,
    profile_residual,
    run_linearized,
)
from utils import write_frame
from .common import add_run_arguments, config_from_args, gaussian, output_dir, print_banner, write_config_echo
from .report import ExperimentReport, write_report

logger = logging.getLogger(__name__)

# minimum observed order per study
EXPECTED_ORDERS = {
    'strang_dt': 1.5,
    'lie_dt': 0.7,
    'cn_space': 1.5,
    'profile_space': 1.5,
    'rk4_substeps': 3.0,
}

RK4_GRID_NODES = 401
CN_BASE_NODES = 401
CN_T = 0.5
CN_DT = 1e-3


def _row(name, e_coarse, e_fine):
    ratio = e_coarse / e_fine if e_fine > 0 else float('inf')
    order = math.log2(ratio) if 0 < ratio < float('inf') else float('nan')
    return {'study': name, 'error_coarse': e_coarse, 'error_fine': e_fine, 'ratio': ratio, 'order': order}


def splitting_study(sim_cfg, splitting):
    """Final-state differences under dt-halving for smooth regularized runs"""
    base = sim_cfg.with_values(v_mode='regularized', transport_scheme='crank_nicolson', splitting=splitting)
    g = base.grid
    wave = build_reference_wave(base.wave, g, base.substeps, base.ode_method)
    u0 = gaussian(g).astype(complex)
    v0 = gaussian(g, center=-4.0)

    finals = []
    for level in range(3):
        level_cfg = base.with_values(dt=base.dt / 2 ** level, output_every=10 ** 9)
        state = run_linearized(level_cfg, u0, v0, wave).state
        finals.append((state.u, state.v.v_tilde))

    def diff(a, b):
        return l2_norm(a[0] - b[0], g) + l2_norm(a[1] - b[1], g)

    return _row(f'{splitting}_dt', diff(finals[0], finals[1]), diff(finals[1], finals[2]))


def cn_space_study(x_max):
    """CN Schrodinger in a smooth well, fixed dt, grid halved twice"""
    solutions = []
    grid = Grid1D(x_max, CN_BASE_NODES)
    for _ in range(3):
        prob = SchrodingerProblem(grid, a1=-2.0 * np.exp(-grid.x ** 2))
        u = np.exp(-grid.x ** 2 + 1j * grid.x)
        u[0] = u[-1] = 0.0
        steps = int(round(CN_T / CN_DT))
        for n in range(steps):
            u = cn_step(u, n * CN_DT, CN_DT, prob)
        solutions.append((grid, u))
        grid = grid.refined()

    (g0, u0), (g1, u1), (_, u2) = solutions
    return _row('cn_space', l2_norm(u0 - u1[::2], g0), l2_norm(u1 - u2[::2], g1))


def profile_space_study(sim_cfg):
    """Residual of the sampled profile against the 3-point second difference"""
    residuals = []
    grid = sim_cfg.grid
    for _ in range(2):
        wave = integrate_r_eps(sim_cfg.wave, grid, sim_cfg.substeps, 'rk4')
        residuals.append(profile_residual(wave))
        grid = grid.refined()
    return _row('profile_space', residuals[0], residuals[1])


def rk4_substep_study(sim_cfg, window=5.0):
    grid = Grid1D(sim_cfg.grid.x_max, RK4_GRID_NODES)
    mask = np.abs(grid.x) <= window
    profiles = [integrate_r_eps(sim_cfg.wave, grid, s, 'rk4').r for s in (1, 2, 4)]
    return _row(
        'rk4_substeps',
        float(np.max(np.abs(profiles[0] - profiles[1])[mask])),
        float(np.max(np.abs(profiles[1] - profiles[2])[mask])),
    )


def cmd_convergence(sim_cfg, out_dir):
    """Run every study, write convergence.csv and the report"""
    rows = [
        splitting_study(sim_cfg, 'strang'),
        splitting_study(sim_cfg, 'lie'),
        cn_space_study(sim_cfg.grid.x_max),
        profile_space_study(sim_cfg),
        rk4_substep_study(sim_cfg),
    ]
    table = pd.DataFrame(rows, columns=['study', 'error_coarse', 'error_fine', 'ratio', 'order'])
    write_config_echo(sim_cfg, out_dir)
    write_frame(table, os.path.join(out_dir, 'convergence.csv'))

    report = ExperimentReport(title="Convergence study", config=sim_cfg.to_flat(), tables={'convergence': table})
    for row in rows:
        expected = EXPECTED_ORDERS[row['study']]
        report.summary[f"order_{row['study']}"] = row['order']
        report.add(
            f"order_{row['study']}",
            row['order'] >= expected,
            f"ratio {row['ratio']:.4g}, order {row['order']:.3f} (expected >= {expected})",
            row['order'],
        )
    write_report(report, out_dir)
    return report


def handle(args):
    sim_cfg = config_from_args(args)
    out_dir = output_dir(args, 'convergence')
    print_banner("Convergence study", sim_cfg, out_dir)
    report = cmd_convergence(sim_cfg, out_dir)
    for criterion in report.criteria:
        print(f"  {'PASS' if criterion.passed else 'FAIL'}  {criterion.name}: {criterion.detail}")
    return EXIT_OK if report.passed else EXIT_CRITERION_FAILURE


def register(subparsers):
    parser = subparsers.add_parser('convergence', help='measure self-convergence orders')
    add_run_arguments(parser)
    parser.set_defaults(handler=handle)
    return parser
