"""
Schrodinger-Burgers shock-stability simulator - command line entry point

All subcommands are organized in the commands/ package.
Commands: reference, full, linearized, stability, convergence, validate.
"""

import argparse
import logging
import sys

from numerics import EXIT_CONFIG_ERROR, ConfigError, SimulationError

# Import all commands
from commands import COMMAND_MODULES

logger = logging.getLogger(__name__)

LOG_FORMAT = '%(asctime)s %(levelname)s %(name)s: %(message)s'


def create_parser():
    """Parser factory: one subparser per command module"""
    parser = argparse.ArgumentParser(
        prog='app.py',
        description='Schrodinger-Burgers shock-stability simulator',
    )
    parser.add_argument('--log-level', default='INFO',
                        choices=['DEBUG', 'INFO', 'WARNING', 'ERROR'])
    subparsers = parser.add_subparsers(dest='command', required=True, metavar='COMMAND')

    # Register all command modules
    for module in COMMAND_MODULES:
        module.register(subparsers)

    return parser


def main(argv=None):
    """Parse arguments, run the chosen command and return its exit code"""
    parser = create_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=getattr(logging, args.log_level), format=LOG_FORMAT)

    try:
        return args.handler(args)
    except ConfigError as exc:
        logger.error("Configuration error: %s", exc)
        return EXIT_CONFIG_ERROR
    except SimulationError as exc:
        logger.error("%s: %s", type(exc).__name__, exc)
        return exc.exit_code
    except OSError as exc:
        logger.error("I/O error: %s", exc)
        return EXIT_CONFIG_ERROR


if __name__ == '__main__':
    print("=" * 60)
    print("Schrodinger-Burgers Simulator")
    print("=" * 60)
    sys.exit(main())
