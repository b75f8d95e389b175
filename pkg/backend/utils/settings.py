"""
Run configuration: the SimConfig record and its flat `key = value` files
"""
import logging
from dataclasses import dataclass

import config as cfg
from numerics import ConfigError, Grid1D, SimulationError
from solvers import WaveParams

logger = logging.getLogger(__name__)

# flat key -> parser, in echo order
CONFIG_KEYS = {
    'x_max': float,
    'n_nodes': int,
    'dt': float,
    'T': float,
    'eps': float,
    'b': float,
    'A': float,
    'C': float,
    'delta': float,
    'mollify_width': float,
    'v_mode': str,
    'newton_tol': float,
    'newton_max_iter': int,
    'splitting': str,
    'transport_scheme': str,
    'output_every': int,
    'substeps': int,
    'ode_method': str,
}

DEFAULTS = {
    'x_max': cfg.X_MAX,
    'n_nodes': cfg.N_NODES,
    'dt': cfg.DT,
    'T': cfg.T_FINAL,
    'eps': cfg.EPS,
    'b': cfg.B,
    'A': cfg.A,
    'C': cfg.C,
    'delta': cfg.DELTA,
    'mollify_width': None,  # resolves to MOLLIFY_CELLS * h
    'v_mode': cfg.V_MODES[0],
    'newton_tol': cfg.NEWTON_TOL,
    'newton_max_iter': cfg.NEWTON_MAX_ITER,
    'splitting': cfg.SPLITTINGS[0],
    'transport_scheme': cfg.TRANSPORT_SCHEMES[0],
    'output_every': cfg.OUTPUT_EVERY,
    'substeps': cfg.RK_SUBSTEPS,
    'ode_method': cfg.ODE_METHODS[0],
}


@dataclass(frozen=True)
class SimConfig:
    grid: Grid1D
    dt: float
    T: float
    wave: WaveParams
    delta: float
    mollify_width: float
    v_mode: str
    newton_tol: float
    newton_max_iter: int
    splitting: str
    transport_scheme: str
    output_every: int
    substeps: int
    ode_method: str

    def __post_init__(self):
        h = self.grid.h
        checks = [
            (self.dt > 0, f"dt must be positive, got {self.dt}"),
            (self.dt <= h * (1 + 1e-12), f"dt={self.dt} exceeds the accuracy cap dt <= h = {h:.6g}"),
            (self.T > 0, f"T must be positive, got {self.T}"),
            (self.delta >= 0, f"delta must be nonnegative, got {self.delta}"),
            (self.mollify_width >= cfg.MIN_MOLLIFY_CELLS * h * (1 - 1e-12),
             f"mollify_width={self.mollify_width} spans fewer than {cfg.MIN_MOLLIFY_CELLS} cells"),
            (self.v_mode in cfg.V_MODES, f"v_mode must be one of {cfg.V_MODES}"),
            (self.splitting in cfg.SPLITTINGS, f"splitting must be one of {cfg.SPLITTINGS}"),
            (self.transport_scheme in cfg.TRANSPORT_SCHEMES,
             f"transport_scheme must be one of {cfg.TRANSPORT_SCHEMES}"),
            (not (self.transport_scheme == 'crank_nicolson' and self.v_mode == 'decomposed'),
             "crank_nicolson transport is only available in regularized mode"),
            (self.newton_tol > 0, "newton_tol must be positive"),
            (self.newton_max_iter >= 1, "newton_max_iter must be at least 1"),
            (self.output_every >= 1, "output_every must be at least 1"),
            (self.substeps >= 1, "substeps must be at least 1"),
            (self.ode_method in cfg.ODE_METHODS, f"ode_method must be one of {cfg.ODE_METHODS}"),
        ]
        for ok, message in checks:
            if not ok:
                raise ConfigError(message)

    def to_flat(self):
        """Every setting as a flat dict, keys in echo order"""
        return {
            'x_max': self.grid.x_max,
            'n_nodes': self.grid.n_nodes,
            'dt': self.dt,
            'T': self.T,
            'eps': self.wave.eps,
            'b': self.wave.b,
            'A': self.wave.A,
            'C': self.wave.C,
            'delta': self.delta,
            'mollify_width': self.mollify_width,
            'v_mode': self.v_mode,
            'newton_tol': self.newton_tol,
            'newton_max_iter': self.newton_max_iter,
            'splitting': self.splitting,
            'transport_scheme': self.transport_scheme,
            'output_every': self.output_every,
            'substeps': self.substeps,
            'ode_method': self.ode_method,
        }

    def with_values(self, **overrides):
        """New config with flat keys replaced; a grid change re-derives an unset width"""
        flat = self.to_flat()
        if ('x_max' in overrides or 'n_nodes' in overrides) and 'mollify_width' not in overrides:
            flat['mollify_width'] = None
        flat.update(overrides)
        return build_config(flat)


def build_config(values=None):
    """SimConfig from flat values, missing keys taken from config.py"""
    flat = dict(DEFAULTS)
    for key, value in (values or {}).items():
        if key not in CONFIG_KEYS:
            raise ConfigError(f"unknown configuration key {key!r}")
        flat[key] = value
    try:
        grid = Grid1D(float(flat['x_max']), int(flat['n_nodes']))
        wave = WaveParams(float(flat['b']), float(flat['eps']), float(flat['A']), float(flat['C']))
        width = flat['mollify_width']
        width = cfg.MOLLIFY_CELLS * grid.h if width is None else float(width)
        rest = {
            name: CONFIG_KEYS[name](flat[name])
            for name in ('dt', 'T', 'delta', 'v_mode', 'newton_tol', 'newton_max_iter',
                         'splitting', 'transport_scheme', 'output_every', 'substeps', 'ode_method')
        }
        return SimConfig(grid=grid, wave=wave, mollify_width=width, **rest)
    except ConfigError:
        raise
    except (SimulationError, ValueError, TypeError) as exc:
        raise ConfigError(str(exc)) from exc


def parse_config_text(text):
    """Parse `key = value` lines; '#' starts a comment"""
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split('#', 1)[0].strip()
        if not line:
            continue
        if '=' not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw.strip()!r}")
        key, value = (part.strip() for part in line.split('=', 1))
        if key not in CONFIG_KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        try:
            values[key] = CONFIG_KEYS[key](value)
        except ValueError as exc:
            raise ConfigError(f"line {lineno}: bad value for {key}: {value!r}") from exc
    return values


def load_config(path=None, overrides=None):
    """Defaults, then the file at path, then overrides (CLI flags)"""
    values = {}
    if path:
        try:
            with open(path, 'r', encoding='utf-8') as f:
                values.update(parse_config_text(f.read()))
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        logger.info("Loaded config from %s", path)
    values.update({k: v for k, v in (overrides or {}).items() if v is not None})
    return build_config(values)


def format_config(sim_cfg):
    """Echo of every setting, defaults included, in the config file format"""
    lines = ["# effective configuration"]
    for key, value in sim_cfg.to_flat().items():
        lines.append(f"{key} = {value!r}" if isinstance(value, float) else f"{key} = {value}")
    return "\n".join(lines) + "\n"

