"""
CSV emission and parsing for fields, measures, norms and tables.

Floats are written with 17 significant digits and parsed back with
round-trip precision, so parse(emit(x)) == x bit for bit.
"""
import logging
import os

import numpy as np
import pandas as pd

import config as cfg
from numerics import ConfigError

logger = logging.getLogger(__name__)

FIELDS_COLUMNS = ['x', 're_u', 'im_u', 'v_tilde']
MEASURE_COLUMNS = ['t', 'psi']


def ensure_dir(path):
    """Create an output directory"""
    try:
        os.makedirs(path, exist_ok=True)
    except OSError as exc:
        raise OSError(f"cannot create output directory {path}: {exc}") from exc
    return path


def write_frame(df, path):
    """Write a DataFrame with the fixed float format"""
    try:
        df.to_csv(path, index=False, float_format=cfg.CSV_FLOAT_FORMAT, lineterminator='\n')
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc
    logger.debug("Wrote %s (%d rows)", path, len(df))
    return path


def read_frame(path):
    try:
        return pd.read_csv(path, float_precision='round_trip')
    except OSError as exc:
        raise OSError(f"cannot read {path}: {exc}") from exc


def fields_frame(grid, u, v):
    u = np.asarray(u, dtype=complex)
    return pd.DataFrame({
        'x': grid.x,
        're_u': u.real,
        'im_u': u.imag,
        'v_tilde': np.asarray(v, dtype=float),
    })


def write_fields(path, grid, u, v):
    return write_frame(fields_frame(grid, u, v), path)


def read_fields(path):
    """Return (x, u, v) from a fields file"""
    df = read_frame(path)
    missing = [c for c in FIELDS_COLUMNS if c not in df.columns]
    if missing:
        raise ConfigError(f"{path} lacks columns {missing}")
    u = df['re_u'].to_numpy() + 1j * df['im_u'].to_numpy()
    return df['x'].to_numpy(), u, df['v_tilde'].to_numpy()


def write_measure(path, psi):
    return write_frame(psi.to_frame('psi'), path)


def write_reference(path, wave):
    df = pd.DataFrame({
        'x': wave.grid.x,
        'r': wave.r,
        'r_prime': wave.r_prime,
        'phi': wave.phi,
    })
    return write_frame(df, path)


def write_norms(path, bundle):
    return write_frame(bundle.norms_frame(), path)


def write_snapshots(out_dir, grid, snapshots, prefix='fields'):
    """One fields file per snapshot plus an index of output times"""
    rows = []
    for index, snap in enumerate(snapshots):
        name = f"{prefix}_{index:04d}.csv"
        write_fields(os.path.join(out_dir, name), grid, snap.u, snap.v)
        rows.append({'index': index, 't': snap.t, 'psi': snap.psi, 'file': name})
    write_frame(pd.DataFrame(rows), os.path.join(out_dir, f"{prefix}_index.csv"))
    return rows


def read_perturbation(path, grid):
    """Perturbation (u_bar, v_bar) from a fields file sampled on this grid"""
    x, u, v = read_fields(path)
    if x.shape[0] != grid.n_nodes or not np.allclose(x, grid.x, rtol=0, atol=1e-9 * grid.x_max):
        raise ConfigError(f"perturbation file {path} is not sampled on the configured grid")
    return u, v
