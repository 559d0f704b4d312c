"""
qslkit Verify Command
Handles `verify`: runs every oracle cross-check and prints a pass/fail table.
"""

import argparse
import logging
import sys

from qslkit.commands import options
from qslkit.models import QuadratureSpec
from qslkit.services.verification import DEFAULT_SEED, VerifyOptions, run_verification

logger = logging.getLogger(__name__)

# Exit status when any check fails
EXIT_FAILED = 2


def register(subparsers):
    parser = subparsers.add_parser("verify", help="Run the oracle cross-checks")
    parser.add_argument("--kappa", type=float, default=1.0,
                        help="Dephasing exponent convention multiplier")
    parser.add_argument("--seed", type=int, default=DEFAULT_SEED, help="Seed for randomized checks")
    options.add_quadrature_flags(parser)
    parser.set_defaults(handler=handle)


def handle(args: argparse.Namespace) -> int:
    opts = VerifyOptions(
        kappa=args.kappa,
        quadrature=QuadratureSpec(**options.quadrature_overrides(args)),
        seed=args.seed,
    )
    results = run_verification(opts)

    width = max(len(r.name) for r in results)
    for r in results:
        line = f"{r.status}  {r.name:<{width}}  max_dev={r.max_deviation:.3e}  tol={r.tolerance:.1e}"
        if r.note:
            line += f"  # {r.note}"
        sys.stdout.write(line + "\n")

    failed = [r.name for r in results if not r.passed and not r.skipped]
    skipped = sum(1 for r in results if r.skipped)
    sys.stdout.write(f"{len(results) - len(failed) - skipped} passed, {len(failed)} failed, {skipped} skipped\n")
    if failed:
        logger.error(f"Verification failed: {', '.join(failed)}")
        return EXIT_FAILED
    return 0
