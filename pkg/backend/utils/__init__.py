# Utils package
from .settings import (
    SimConfig,
    CONFIG_KEYS,
    DEFAULTS,
    build_config,
    parse_config_text,
    load_config,
    format_config,
)
from .csv_io import (
    ensure_dir,
    write_frame,
    read_frame,
    write_fields,
    read_fields,
    write_measure,
    write_reference,
    write_norms,
    write_snapshots,
    read_perturbation,
)
from .plots import emit_plot_script, emit_norm_plots, emit_field_plots

__all__ = [
    'SimConfig',
    'CONFIG_KEYS',
    'DEFAULTS',
    'build_config',
    'parse_config_text',
    'load_config',
    'format_config',
    'ensure_dir',
    'write_frame',
    'read_frame',
    'write_fields',
    'read_fields',
    'write_measure',
    'write_reference',
    'write_norms',
    'write_snapshots',
    'read_perturbation',
    'emit_plot_script',
    'emit_norm_plots',
    'emit_field_plots',
]
