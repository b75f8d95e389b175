# Commands package - one module per CLI subcommand
from . import reference, full, linearized, stability, convergence, validate
from .report import Criterion, ExperimentReport, write_report
from .reference import cmd_reference
from .full import cmd_full
from .linearized import cmd_linearized
from .stability import cmd_stability, discrepancy
from .convergence import cmd_convergence
from .validate import CRITERIA, SUITES, cmd_validate

COMMAND_MODULES = (reference, full, linearized, stability, convergence, validate)

__all__ = [
    'COMMAND_MODULES',
    'Criterion',
    'ExperimentReport',
    'write_report',
    'cmd_reference',
    'cmd_full',
    'cmd_linearized',
    'cmd_stability',
    'discrepancy',
    'cmd_convergence',
    'CRITERIA',
    'SUITES',
    'cmd_validate',
]
