"""
qslkit Scan Command
Handles `scan`: one tau sweep per requested Ohmicity value.
"""

import argparse

from qslkit.commands import options
from qslkit.services.output_writer import write_result
from qslkit.services.scan_runner import run_scan


def register(subparsers):
    parser = subparsers.add_parser("scan", help="Sweep the speed-limit time over a tau grid")
    options.add_model_flags(parser)
    options.add_quadrature_flags(parser)
    options.add_output_flags(parser)
    parser.set_defaults(handler=handle)


def handle(args: argparse.Namespace) -> int:
    base = options.load_config_file(args.config)
    values = options.s_values(args)
    fan_out = len(values) > 1

    for s in values:
        cfg = options.build_scan_config(args, base, s=s)
        path = options.suffixed_path(cfg.output_path, s if fan_out else None)
        result = run_scan(cfg, workers=args.workers)
        write_result(result, path, cfg.format)
    return 0
