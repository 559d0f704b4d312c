"""
qslkit Unruh Command
Handles `unruh`: tau sweeps repeated over an acceleration grid.
"""

import argparse
import logging

from qslkit.commands import options
from qslkit.services.output_writer import write_result
from qslkit.services.scan_runner import run_unruh_sweep

logger = logging.getLogger(__name__)


def register(subparsers):
    parser = subparsers.add_parser("unruh", help="Speed-limit sweep seen from accelerated frames")
    options.add_model_flags(parser)
    frame = parser.add_argument_group("frame")
    frame.add_argument("--a-grid", dest="a_grid", required=True,
                       help="Accelerations 'start:stop:step' or 'a1,a2,...'")
    frame.add_argument("--varpi", type=float, default=1.0, help="Mode frequency")
    frame.add_argument("--c", type=float, default=1.0, help="Speed of light")
    options.add_quadrature_flags(parser)
    options.add_output_flags(parser)
    parser.set_defaults(handler=handle)


def handle(args: argparse.Namespace) -> int:
    base = options.load_config_file(args.config)
    accelerations = options.parse_accelerations(args.a_grid)
    values = options.s_values(args)
    fan_out = len(values) > 1

    for s in values:
        cfg = options.build_scan_config(args, base, s=s)
        path = options.suffixed_path(cfg.output_path, s if fan_out else None)
        logger.info(f"Unruh sweep over {len(accelerations)} accelerations")
        result = run_unruh_sweep(cfg, accelerations, varpi=args.varpi, c=args.c, workers=args.workers)
        write_result(result, path, cfg.format, with_frame=True)
    return 0
