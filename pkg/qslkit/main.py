"""
qslkit - Quantum speed limits for open qubit dynamics

Command-line entry point.
"""

import argparse
import logging
import sys
from typing import List, Optional

from qslkit import config
from qslkit.commands import preset, scan, unruh, verify
from qslkit.services.channels import DecayRatePoleError
from qslkit.services.numerics import QuadratureError
from qslkit.services.scan_runner import GridPointError

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NUMERICAL = 2


class CliParser(argparse.ArgumentParser):
    """Usage errors exit with status 1."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = CliParser(
        prog="qslkit",
        description="Unified ML/MT quantum speed limits for damped JC and Ohmic dephasing qubits",
    )
    parser.add_argument("--log-level", dest="log_level", default=config.LOG_LEVEL,
                        choices=["DEBUG", "INFO", "WARNING", "ERROR"], type=str.upper)
    parser.add_argument("--workers", type=int, default=config.WORKERS,
                        help="Threads used to evaluate grid points")
    parser.add_argument("--config", help="JSON config file; flags override its values")

    subparsers = parser.add_subparsers(dest="command", required=True)
    for command in (scan, unruh, preset, verify):
        command.register(subparsers)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    # Configure logging
    logging.basicConfig(
        level=args.log_level,
        format=config.LOG_FORMAT,
        stream=sys.stderr,
        force=True,
    )
    if args.workers < 1:
        logger.error(f"--workers must be at least 1, got {args.workers}")
        return EXIT_CONFIG

    try:
        return args.handler(args)
    except (GridPointError, QuadratureError, DecayRatePoleError) as e:
        logger.error(f"Numerical failure: {e}")
        return EXIT_NUMERICAL
    except (ValueError, OSError) as e:
        logger.error(f"Invalid configuration: {e}")
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
