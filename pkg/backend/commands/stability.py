"""
stability: linearized-stability protocol around the reference wave.

1. linearized run from the perturbation (u_bar, v_bar)
2. full run from (r + delta u_bar, phi + delta v_bar)
3. discrepancy D(t) between the full run and the first-order prediction
   e^{ibt}(r + delta u_lin), phi + delta v_lin

D(t) = ||u_full - e^{ibt}(r + delta u_lin)||_2
     + ||v_full - phi - delta v_lin||_2 outside |x| <= SPIKE_WINDOW_WIDTHS * w
     + |int_{|x| <= SPIKE_WINDOW_WIDTHS * w} (v_full - phi - delta v_lin) - delta Psi(t)|

The last term compares the mass the full run piles up near the shock with
the measure of the linearized solution. The delta = 0 full run is the
baseline: the scheme's own error on the unperturbed wave.
"""
import logging
import math
import os
from concurrent.futures import ProcessPoolExecutor

import numpy as np
import pandas as pd

import config as cfg
from numerics import EXIT_CRITERION_FAILURE, EXIT_OK, ConfigError, integrate, l2_norm
from solvers import build_reference_wave, reference_boundary, run_full, run_linearized
from utils import emit_field_plots, emit_plot_script, write_fields, write_frame, write_measure, write_norms
from .common import (
    add_run_arguments,
    config_from_args,
    output_dir,
    perturbation_data,
    print_banner,
    write_config_echo,
)
from .full import full_initial_data
from .report import ExperimentReport, write_report

logger = logging.getLogger(__name__)


def parse_sweep(text):
    """'0.2,0.1,0.05' -> (0.2, 0.1, 0.05)"""
    try:
        values = tuple(float(part) for part in text.split(',') if part.strip())
    except ValueError as exc:
        raise ConfigError(f"bad --sweep value {text!r}") from exc
    if not values or any(d < 0 for d in values):
        raise ConfigError(f"--sweep needs nonnegative amplitudes, got {text!r}")
    return values


def discrepancy(full_snap, lin_snap, wave, delta, width):
    """Return (D, D_u, D_v, D_spike) at one output time"""
    g = wave.grid
    phase = np.exp(1j * wave.params.b * full_snap.t)
    du = full_snap.u - phase * (wave.r + delta * lin_snap.u)
    dv = full_snap.v - wave.phi - delta * lin_snap.v
    near = np.abs(g.x) <= cfg.SPIKE_WINDOW_WIDTHS * width
    d_u = l2_norm(du, g)
    d_v = l2_norm(np.where(near, 0.0, dv), g)
    d_spike = abs(float(integrate(np.where(near, dv, 0.0), g)) - delta * lin_snap.psi)
    return d_u + d_v + d_spike, d_u, d_v, d_spike


def discrepancy_frame(full_snaps, lin_snaps, wave, delta, width):
    if len(full_snaps) != len(lin_snaps):
        raise ConfigError("full and linearized runs have different output times")
    rows = []
    for full_snap, lin_snap in zip(full_snaps, lin_snaps):
        d, d_u, d_v, d_spike = discrepancy(full_snap, lin_snap, wave, delta, width)
        rows.append({'t': full_snap.t, 'D': d, 'D_u': d_u, 'D_v': d_v, 'D_spike': d_spike})
    return pd.DataFrame(rows, columns=['t', 'D', 'D_u', 'D_v', 'D_spike'])


def _full_run_job(job):
    """Full run for one delta; top level so worker processes can import it"""
    sim_cfg, delta, u_bar, v_bar = job
    wave = build_reference_wave(sim_cfg.wave, sim_cfg.grid, sim_cfg.substeps, sim_cfg.ode_method)
    u0, v0 = full_initial_data(wave, delta, u_bar, v_bar)
    bundle = run_full(sim_cfg, u0, v0, boundary=reference_boundary(wave), keep_snapshots=True)
    return delta, bundle.snapshots, bundle.norms_frame()


def _full_runs(sim_cfg, deltas, u_bar, v_bar, workers):
    jobs = [(sim_cfg, delta, u_bar, v_bar) for delta in deltas]
    if workers > 1 and len(jobs) > 1:
        logger.info("Running %d full runs on %d workers", len(jobs), workers)
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_full_run_job, jobs))
    else:
        results = [_full_run_job(job) for job in jobs]
    return {delta: (snaps, norms) for delta, snaps, norms in results}


def sweep_table(discrepancies, baseline):
    """One row per delta > 0: D(T), sup D and the baseline-corrected D(T)/delta"""
    base_final = float(baseline['D'].iloc[-1])
    rows = []
    for delta, frame in discrepancies.items():
        if delta == 0:
            continue
        final = float(frame['D'].iloc[-1])
        rows.append({
            'delta': delta,
            'D_T': final,
            'sup_D': float(frame['D'].max()),
            'D_T_over_delta': final / delta,
            'corrected_ratio': (final - base_final) / delta,
        })
    table = pd.DataFrame(rows, columns=['delta', 'D_T', 'sup_D', 'D_T_over_delta', 'corrected_ratio'])
    return table.sort_values('delta', ascending=False, ignore_index=True)


def ratio_non_increasing(table):
    """corrected_ratio does not grow as delta decreases"""
    ratios = table['corrected_ratio'].to_numpy()
    slack = 1e-12 * max(1.0, float(np.max(np.abs(ratios)))) if ratios.size else 0.0
    return bool(np.all(np.diff(ratios) <= slack))


def overlay_frame(grid, wave, delta, full_snap, lin_snap):
    """Fields at the final time: full run against the first-order prediction"""
    phase = np.exp(1j * wave.params.b * full_snap.t)
    predicted_u = phase * (wave.r + delta * lin_snap.u)
    return pd.DataFrame({
        'x': grid.x,
        're_u_full': full_snap.u.real,
        'im_u_full': full_snap.u.imag,
        're_u_pred': predicted_u.real,
        'im_u_pred': predicted_u.imag,
        'v_full': full_snap.v,
        'v_pred': wave.phi + delta * lin_snap.v,
    })


def cmd_stability(sim_cfg, out_dir, u_bar, v_bar, deltas=None, workers=1):
    """
    Run the protocol for sim_cfg.delta, or for every amplitude in deltas.

    Returns:
        ExperimentReport with sup D, D(T)/delta and the sweep table
    """
    g = sim_cfg.grid
    main_delta = sim_cfg.delta
    deltas = tuple(deltas) if deltas else (main_delta,)
    if main_delta not in deltas:
        main_delta = deltas[0]

    wave = build_reference_wave(sim_cfg.wave, g, sim_cfg.substeps, sim_cfg.ode_method)
    lin = run_linearized(sim_cfg, u_bar, v_bar, wave, keep_snapshots=True)
    fulls = _full_runs(sim_cfg, sorted(set(deltas) | {0.0}, reverse=True), u_bar, v_bar, workers)

    width = sim_cfg.mollify_width
    discrepancies = {
        delta: discrepancy_frame(snaps, lin.snapshots, wave, delta, width)
        for delta, (snaps, _) in fulls.items()
    }
    baseline = discrepancies[0.0]
    main = discrepancies[main_delta]

    write_config_echo(sim_cfg, out_dir)
    write_norms(os.path.join(out_dir, 'norms_linearized.csv'), lin)
    write_frame(fulls[main_delta][1], os.path.join(out_dir, 'norms_full.csv'))
    write_measure(os.path.join(out_dir, 'measure.csv'), lin.state.v.psi)
    write_frame(main, os.path.join(out_dir, 'discrepancy.csv'))
    write_frame(baseline, os.path.join(out_dir, 'baseline.csv'))
    overlay = overlay_frame(g, wave, main_delta, fulls[main_delta][0][-1], lin.snapshots[-1])
    write_frame(overlay, os.path.join(out_dir, 'overlay.csv'))

    emit_plot_script(out_dir, 'overlay_u', 'Short wave: full run vs first-order prediction', 'overlay.csv', 'x',
                     [('re_u_full', 'Re u full', '-'), ('re_u_pred', 'Re u predicted', '--')], 'Re u',
                     (-10.0, 10.0))
    emit_plot_script(out_dir, 'overlay_v', 'Long wave: full run vs first-order prediction', 'overlay.csv', 'x',
                     [('v_full', 'v full', '-'), ('v_pred', 'v predicted', '--')], 'v', (-10.0, 10.0))
    emit_plot_script(out_dir, 'discrepancy', 'Discrepancy D(t)', 'discrepancy.csv', 't',
                     [('D', 'D', '-'), ('D_u', 'u part', '--'), ('D_v', 'v part', ':'),
                      ('D_spike', 'spike mass', '-.')], 'D')
    if lin.snapshots:
        write_fields(os.path.join(out_dir, 'fields_linearized.csv'), g,
                     lin.snapshots[-1].u, lin.snapshots[-1].v)
        emit_field_plots(out_dir, 'fields_linearized.csv', 'linearized', (-10.0, 10.0))

    sup_d = float(main['D'].max())
    report = ExperimentReport(
        title=f"Linearized stability (eps={sim_cfg.wave.eps}, b={sim_cfg.wave.b}, delta={main_delta})",
        config=sim_cfg.to_flat(),
        norms=lin.norms_frame(),
        tables={'discrepancy': main, 'baseline': baseline},
        notes=[
            f"Spike-mass window: |x| <= {cfg.SPIKE_WINDOW_WIDTHS} * mollify_width = "
            f"{cfg.SPIKE_WINDOW_WIDTHS * width:.4g}.",
            "Figure reproduction is qualitative: compare overlay shapes and the spike at x = 0.",
        ],
    )
    report.summary.update({
        'sup_D': sup_d,
        'D_T': float(main['D'].iloc[-1]),
        'D_T_over_delta': float(main['D'].iloc[-1]) / main_delta if main_delta > 0 else float('nan'),
        'baseline_D_T': float(baseline['D'].iloc[-1]),
        'psi_T': lin.state.v.psi.last,
        'sup_h1_u_linearized': lin.sup('h1_u'),
    })
    report.add('sup_D_finite', math.isfinite(sup_d), f"sup_t D(t) = {sup_d:.6g}", sup_d)

    if len(deltas) > 1:
        table = sweep_table(discrepancies, baseline)
        write_frame(table, os.path.join(out_dir, 'sweep.csv'))
        report.tables['sweep'] = table
        report.add(
            'sweep_non_increasing',
            ratio_non_increasing(table),
            "baseline-corrected D(T)/delta along delta = "
            + ", ".join(f"{d:g}" for d in table['delta']) + ": "
            + ", ".join(f"{r:.4g}" for r in table['corrected_ratio']),
        )
    write_report(report, out_dir)
    return report


def handle(args):
    sim_cfg = config_from_args(args)
    out_dir = output_dir(args, 'stability')
    print_banner("Linearized stability protocol", sim_cfg, out_dir)
    u_bar, v_bar = perturbation_data(sim_cfg, args.perturbation, args.perturbation_file)
    deltas = parse_sweep(args.sweep) if args.sweep else None
    report = cmd_stability(sim_cfg, out_dir, u_bar, v_bar, deltas, args.workers)
    print(f"  sup D(t) = {report.summary['sup_D']:.6g}")
    print(f"  D(T)/delta = {report.summary['D_T_over_delta']:.6g}")
    for criterion in report.criteria:
        print(f"  {'PASS' if criterion.passed else 'FAIL'}  {criterion.name}")
    return EXIT_OK if report.passed else EXIT_CRITERION_FAILURE


def register(subparsers):
    parser = subparsers.add_parser('stability', help='run the linearized-stability protocol')
    add_run_arguments(parser)
    parser.add_argument('--sweep', metavar='"a,b,c"', default=None, help='delta sweep, e.g. "0.2,0.1,0.05"')
    parser.add_argument('--workers', type=int, default=1, help='processes for the full runs of a sweep')
    parser.set_defaults(handler=handle)
    return parser
