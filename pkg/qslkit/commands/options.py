"""
qslkit Command Options
Shared flag groups and the flags-over-file merge that builds a ScanConfig.
"""

import argparse
import copy
import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional

from qslkit.models import BlochVector, ScanConfig, UniformGrid

logger = logging.getLogger(__name__)


def parse_float_list(text: str) -> List[float]:
    """Parse '0.5,1,3'."""
    values = [float(part) for part in text.split(",") if part.strip()]
    if not values:
        raise ValueError(f"Expected a comma-separated list of numbers, got '{text}'")
    return values


def parse_accelerations(text: str) -> List[float]:
    """Acceleration grid as 'start:stop:step' or a comma list; every value must be positive."""
    values = UniformGrid.parse(text).points() if ":" in text else parse_float_list(text)
    if any(a <= 0.0 for a in values):
        raise ValueError(f"Accelerations must be positive, got '{text}'")
    return values


def load_config_file(path: Optional[str]) -> Dict[str, Any]:
    """Read a JSON config shaped like ScanConfig; missing path means no file."""
    if not path:
        return {}
    with open(path, "r", encoding="utf-8") as f:
        data = json.load(f)
    if not isinstance(data, dict):
        raise ValueError(f"Config file {path} must hold a JSON object")
    logger.info(f"Loaded config file {path}")
    return data


def add_model_flags(parser: argparse.ArgumentParser):
    group = parser.add_argument_group("model")
    group.add_argument("--model", choices=["jc", "dephasing"], help="Channel model (default jc)")
    group.add_argument("--gamma0", type=float, help="JC coupling strength")
    group.add_argument("--lambda", dest="lam", type=float, help="JC spectral width")
    group.add_argument("--omega0", type=float, help="JC system frequency")
    group.add_argument("--eta", type=float, help="Dephasing coupling")
    group.add_argument("--s", help="Ohmicity parameter; a comma list runs one scan per value")
    group.add_argument("--omega-c", dest="omega_c", type=float, help="Dephasing cutoff frequency")
    group.add_argument("--kappa", type=float, help="Decoherence exponent convention multiplier")

    state = parser.add_mutually_exclusive_group()
    state.add_argument("--coh", type=float, help="Initial coherence C; sets v0 = (sqrt C, 0, 0)")
    state.add_argument("--bloch", help="Initial Bloch vector 'vx,vy,vz'")

    window = parser.add_argument_group("window")
    window.add_argument("--tau-grid", dest="tau_grid", help="Initial times 'start:stop:step'")
    window.add_argument("--tau-d", dest="tau_d", type=float, help="Driving time")
    window.add_argument("--mode", choices=["exact", "ideal-markov"], help="JC dynamics mode")


def add_quadrature_flags(parser: argparse.ArgumentParser):
    group = parser.add_argument_group("quadrature")
    group.add_argument("--abs-tol", dest="abs_tol", type=float, help="Absolute quadrature tolerance")
    group.add_argument("--rel-tol", dest="rel_tol", type=float, help="Relative quadrature tolerance")
    group.add_argument("--max-depth", dest="max_depth", type=int, help="Quadrature refinement depth")


def add_output_flags(parser: argparse.ArgumentParser, out_help: str = "Output file (default stdout)"):
    group = parser.add_argument_group("output")
    group.add_argument("--out", help=out_help)
    group.add_argument("--format", choices=["csv", "plotdata"], help="Output format (default csv)")


def quadrature_overrides(args: argparse.Namespace) -> Dict[str, Any]:
    keys = ("abs_tol", "rel_tol", "max_depth")
    return {k: getattr(args, k) for k in keys if getattr(args, k, None) is not None}


def build_scan_config(
    args: argparse.Namespace,
    base: Optional[Dict[str, Any]] = None,
    s: Optional[float] = None,
) -> ScanConfig:
    """
    Merge command-line flags over a config-file dict and validate.

    Flags left unset (None) keep the file value, which in turn falls back to
    the ScanConfig defaults.

    Raises:
        ValueError: on any invalid combination (pydantic ValidationError included)
    """
    data = copy.deepcopy(base or {})

    def put(section: str, key: str, value: Any):
        if value is not None:
            data.setdefault(section, {})[key] = value

    if getattr(args, "model", None):
        data["channel"] = args.model
    put("jc", "gamma0", getattr(args, "gamma0", None))
    put("jc", "lambda", getattr(args, "lam", None))
    put("jc", "omega0", getattr(args, "omega0", None))
    put("ohmic", "eta", getattr(args, "eta", None))
    put("ohmic", "s", s)
    put("ohmic", "omega_c", getattr(args, "omega_c", None))
    put("ohmic", "kappa", getattr(args, "kappa", None))
    for key, value in quadrature_overrides(args).items():
        put("quadrature", key, value)

    if getattr(args, "coh", None) is not None:
        data["v0"] = BlochVector.from_coherence(args.coh)
    elif getattr(args, "bloch", None):
        data["v0"] = args.bloch
    if getattr(args, "tau_grid", None):
        data["tau_grid"] = args.tau_grid
    if getattr(args, "tau_d", None) is not None:
        data["tau_d"] = args.tau_d
    if getattr(args, "mode", None):
        data["mode"] = args.mode.replace("-", "_")
    if getattr(args, "out", None):
        data["output_path"] = args.out
    if getattr(args, "format", None):
        data["format"] = args.format

    return ScanConfig.model_validate(data)


def s_values(args: argparse.Namespace) -> List[Optional[float]]:
    """Ohmicity values requested with --s, or [None] to keep the configured one."""
    if getattr(args, "s", None):
        return parse_float_list(args.s)
    return [None]


def suffixed_path(path: Optional[str], s: Optional[float]) -> Optional[Path]:
    """Insert '_s<value>' before the extension when a scan fans out over several s."""
    if path is None:
        return None
    path = Path(path)
    if s is None:
        return path
    return path.with_name(f"{path.stem}_s{s:g}{path.suffix}")
