"""
Helpers shared by the subcommands: CLI flags, config resolution, data
"""
import logging
import os

import numpy as np

import config as cfg
from numerics import ConfigError
from utils import ensure_dir, format_config, load_config, read_perturbation

logger = logging.getLogger(__name__)

PERTURBATIONS = ('gaussian', 'file')


def add_run_arguments(parser):
    """Flags every run-type subcommand accepts"""
    parser.add_argument('--config', metavar='PATH', help='key = value configuration file')
    parser.add_argument('--out', metavar='DIR', default=None, help='output directory')
    parser.add_argument('--mode', choices=cfg.V_MODES, default=None, help='linearized v mode')
    parser.add_argument('--delta', type=float, default=None, help='perturbation amplitude')
    parser.add_argument('--grid', type=int, default=None, metavar='N', help='number of grid nodes (odd)')
    parser.add_argument('--dt', type=float, default=None, help='time step')
    parser.add_argument('--T', type=float, default=None, help='final time')
    parser.add_argument('--eps', type=float, default=None, help='coupling eps')
    parser.add_argument('--perturbation', choices=PERTURBATIONS, default='gaussian')
    parser.add_argument('--perturbation-file', metavar='PATH', default=None,
                        help='fields CSV (x,re_u,im_u,v_tilde) used with --perturbation file')


def config_from_args(args):
    overrides = {
        'n_nodes': args.grid,
        'dt': args.dt,
        'T': args.T,
        'delta': args.delta,
        'v_mode': args.mode,
        'eps': args.eps,
    }
    return load_config(args.config, overrides)


def output_dir(args, name):
    return ensure_dir(args.out or os.path.join(cfg.DEFAULT_OUT_DIR, name))


def write_config_echo(sim_cfg, out_dir):
    path = os.path.join(out_dir, 'config_echo.txt')
    try:
        with open(path, 'w', encoding='utf-8') as f:
            f.write(format_config(sim_cfg))
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc
    return path


def gaussian(grid, center=0.0):
    return np.exp(-(grid.x - center) ** 2)


def perturbation_data(sim_cfg, kind='gaussian', path=None):
    """(u_bar, v_bar): the Gaussian e^{-x^2} in both components, or a file"""
    grid = sim_cfg.grid
    if kind == 'gaussian':
        bump = gaussian(grid)
        return bump.astype(complex), bump.copy()
    if kind == 'file':
        if not path:
            raise ConfigError("--perturbation file needs --perturbation-file PATH")
        return read_perturbation(path, grid)
    raise ConfigError(f"unknown perturbation {kind!r}")


def print_banner(title, sim_cfg=None, out_dir=None):
    print("=" * 60)
    print(title)
    print("=" * 60)
    if sim_cfg is not None:
        flat = sim_cfg.to_flat()
        print(f"Grid: {flat['n_nodes']} nodes on (-{flat['x_max']}, {flat['x_max']}), h = {sim_cfg.grid.h:.4g}")
        print(f"Time: dt = {flat['dt']}, T = {flat['T']}")
        print(f"Wave: eps = {flat['eps']}, b = {flat['b']}, A = {flat['A']}, C = {flat['C']}")
    if out_dir is not None:
        print(f"Output directory: {out_dir}")
    print()
