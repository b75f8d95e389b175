"""
full: the nonlinear system started from the perturbed reference wave
"""
import logging
import os

from numerics import EXIT_OK
from solvers import FULL_RUN_NOTES, build_reference_wave, reference_boundary, run_full
from utils import emit_field_plots, emit_norm_plots, write_norms, write_reference, write_snapshots
from .common import (
    add_run_arguments,
    config_from_args,
    output_dir,
    perturbation_data,
    print_banner,
    write_config_echo,
)
from .report import ExperimentReport, write_report

logger = logging.getLogger(__name__)


def full_initial_data(wave, delta, u_bar, v_bar):
    """(r + delta u_bar, phi + delta v_bar)"""
    return wave.r + delta * u_bar, wave.phi + delta * v_bar


def mass_balance(bundle):
    """Relative mass drift after removing the mass that entered through the endpoints"""
    m = bundle.norms['mass']
    m0 = m.values[0]
    if m0 == 0:
        return 0.0
    return abs(m.last - m0 - bundle.boundary_flux.last) / m0


def cmd_full(sim_cfg, out_dir, u_bar, v_bar):
    """Run, write fields snapshots, norms and plots; returns (report, bundle)"""
    wave = build_reference_wave(sim_cfg.wave, sim_cfg.grid, sim_cfg.substeps, sim_cfg.ode_method)
    u0, v0 = full_initial_data(wave, sim_cfg.delta, u_bar, v_bar)
    bundle = run_full(sim_cfg, u0, v0, boundary=reference_boundary(wave), keep_snapshots=True)

    write_config_echo(sim_cfg, out_dir)
    write_reference(os.path.join(out_dir, 'reference.csv'), wave)
    write_norms(os.path.join(out_dir, 'norms.csv'), bundle)
    rows = write_snapshots(out_dir, sim_cfg.grid, bundle.snapshots)
    emit_norm_plots(out_dir)
    emit_field_plots(out_dir, rows[-1]['file'], 'full', (-10.0, 10.0))

    report = ExperimentReport(title="Full nonlinear run", config=sim_cfg.to_flat(), norms=bundle.norms_frame(),
                              notes=list(FULL_RUN_NOTES))
    report.summary.update({
        'steps': bundle.steps,
        'mass_balance_drift': mass_balance(bundle),
        'boundary_inflow': bundle.boundary_flux.last,
        'sup_h1_u': bundle.sup('h1_u'),
        'sup_l2_v': bundle.sup('l2_vtilde'),
    })
    write_report(report, out_dir)
    return report, bundle


def handle(args):
    sim_cfg = config_from_args(args)
    out_dir = output_dir(args, 'full')
    print_banner("Full nonlinear run", sim_cfg, out_dir)
    u_bar, v_bar = perturbation_data(sim_cfg, args.perturbation, args.perturbation_file)
    report, _ = cmd_full(sim_cfg, out_dir, u_bar, v_bar)
    print(f"  mass balance drift: {report.summary['mass_balance_drift']:.3e}")
    return EXIT_OK


def register(subparsers):
    parser = subparsers.add_parser('full', help='run the full nonlinear system')
    add_run_arguments(parser)
    parser.set_defaults(handler=handle)
    return parser
