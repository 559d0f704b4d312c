"""
qslkit Preset Command
Handles `preset fig1a|fig1b|fig2`: fixed figure-parameter scans written to a directory.

fig1a and fig1b are the damped JC scans at weak (gamma0 = 0.1) and strong
(gamma0 = 10) coupling from the excited state. fig2 is the dephasing family
over s in {0.5, 1, 3} and coherence C in {0.25, 0.5, 1}, one file per pair.
"""

import argparse
import logging
from pathlib import Path
from typing import List, Tuple

from qslkit import config
from qslkit.commands import options
from qslkit.models import (
    BlochVector,
    ChannelKind,
    DampedJCParams,
    OhmicParams,
    OutputFormat,
    QuadratureSpec,
    ScanConfig,
    UniformGrid,
)
from qslkit.services.output_writer import write_result
from qslkit.services.scan_runner import run_scan

logger = logging.getLogger(__name__)

JC_GRID = UniformGrid(start=0.0, stop=20.0, step=0.02)
DEPHASING_GRID = UniformGrid(start=0.0, stop=30.0, step=0.02)
FIG2_S = (0.5, 1.0, 3.0)
FIG2_COHERENCE = (0.25, 0.5, 1.0)

EXTENSIONS = {OutputFormat.CSV: ".csv", OutputFormat.PLOTDATA: ".dat"}


def _jc_preset(gamma0: float, quadrature: QuadratureSpec, fmt: OutputFormat) -> ScanConfig:
    return ScanConfig(
        channel=ChannelKind.JC,
        jc=DampedJCParams(gamma0=gamma0, lam=1.0, omega0=1.0),
        v0=BlochVector(v_z=-1.0),
        tau_grid=JC_GRID,
        tau_d=1.0,
        quadrature=quadrature,
        format=fmt,
    )


def preset_configs(name: str, quadrature: QuadratureSpec, fmt: OutputFormat) -> List[Tuple[str, ScanConfig]]:
    """(file stem, config) pairs for one preset, in output order."""
    if name == "fig1a":
        return [("fig1a", _jc_preset(0.1, quadrature, fmt))]
    if name == "fig1b":
        return [("fig1b", _jc_preset(10.0, quadrature, fmt))]
    if name == "fig2":
        return [
            (f"fig2_s{s:g}_coh{coh:g}", ScanConfig(
                channel=ChannelKind.DEPHASING,
                ohmic=OhmicParams(eta=1.0, s=s, omega_c=1.0),
                v0=BlochVector.from_coherence(coh),
                tau_grid=DEPHASING_GRID,
                tau_d=1.0,
                quadrature=quadrature,
                format=fmt,
            ))
            for s in FIG2_S
            for coh in FIG2_COHERENCE
        ]
    raise ValueError(f"Unknown preset: {name}")


def register(subparsers):
    parser = subparsers.add_parser("preset", help="Reproduce a figure's parameter scan")
    parser.add_argument("name", choices=["fig1a", "fig1b", "fig2"])
    options.add_quadrature_flags(parser)
    options.add_output_flags(parser, out_help=f"Output directory (default {config.OUTPUT_DIR})")
    parser.set_defaults(handler=handle)


def handle(args: argparse.Namespace) -> int:
    quadrature = QuadratureSpec(**options.quadrature_overrides(args))
    fmt = OutputFormat(args.format or OutputFormat.CSV.value)
    out_dir = Path(args.out) if args.out else config.OUTPUT_DIR

    configs = preset_configs(args.name, quadrature, fmt)
    for stem, cfg in configs:
        path = out_dir / f"{stem}{EXTENSIONS[fmt]}"
        write_result(run_scan(cfg, workers=args.workers), path, fmt)
    logger.info(f"Preset {args.name}: wrote {len(configs)} file(s) to {out_dir}")
    return 0
