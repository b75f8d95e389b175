# Solvers package
from .reference_wave import (
    WaveParams,
    ReferenceWave,
    closed_form_initial_data,
    closed_form_jump,
    closed_form_r,
    integrate_r_eps,
    phi_of,
    build_reference_wave,
    profile_residual,
)
from .schrodinger import (
    SchrodingerProblem,
    cn_step,
    mass,
    mass_rate_diagnostic,
    energy_diagnostic,
    gradient_energy,
    nls_energy,
    boundary_mass_flux,
)
from .hyperbolic import (
    MeasureSolution,
    lf_step_burgers,
    explicit_v_eps0,
    lf_step_linear,
    cn_transport_step,
    traces,
    jump_source,
    psi_update,
)
from .coupled import (
    NORM_COLUMNS,
    FULL_RUN_NOTES,
    FullState,
    LinearizedState,
    Snapshot,
    RunBundle,
    weighted_shock_energy,
    run_full,
    run_linearized_eps0,
    run_linearized_eps,
    run_linearized,
    reference_boundary,
)

__all__ = [
    'WaveParams',
    'ReferenceWave',
    'closed_form_initial_data',
    'closed_form_jump',
    'closed_form_r',
    'integrate_r_eps',
    'phi_of',
    'build_reference_wave',
    'profile_residual',
    'SchrodingerProblem',
    'cn_step',
    'mass',
    'mass_rate_diagnostic',
    'energy_diagnostic',
    'gradient_energy',
    'nls_energy',
    'boundary_mass_flux',
    'MeasureSolution',
    'lf_step_burgers',
    'explicit_v_eps0',
    'lf_step_linear',
    'cn_transport_step',
    'traces',
    'jump_source',
    'psi_update',
    'NORM_COLUMNS',
    'FULL_RUN_NOTES',
    'FullState',
    'LinearizedState',
    'Snapshot',
    'RunBundle',
    'weighted_shock_energy',
    'run_full',
    'run_linearized_eps0',
    'run_linearized_eps',
    'run_linearized',
    'reference_boundary',
]
