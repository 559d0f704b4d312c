"""
qslkit Scan Runner Service
Evaluates the speed-limit engine over tau grids (and acceleration grids).

Grid points are independent; they may run on a thread pool, and results are
always collected in grid order so output never depends on the worker count.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence

from qslkit.models import (
    BlochVector,
    ChannelKind,
    DynamicsMode,
    QuadratureSpec,
    ScanConfig,
    SpeedLimitReport,
    UnruhParams,
)
from qslkit.services.channels import ChannelModel, JaynesCummingsChannel, OhmicDephasingChannel
from qslkit.services.speed_limit import critical_time, qsl_unified
from qslkit.services.unruh import cos_r, transform_initial_state

logger = logging.getLogger(__name__)


class GridPointError(RuntimeError):
    """A numerical failure at one grid point."""

    def __init__(self, tau: float, cause: Exception, a: Optional[float] = None):
        where = f"tau={tau:.12g}" if a is None else f"a={a:.12g}, tau={tau:.12g}"
        super().__init__(f"Numerical failure at {where}: {cause}")
        self.tau = tau
        self.a = a
        self.cause = cause


@dataclass(frozen=True)
class ScanRow:
    tau: float
    signal: float
    report: SpeedLimitReport
    a: Optional[float] = None
    cos_r: Optional[float] = None


@dataclass
class ScanResult:
    rows: List[ScanRow]
    critical_time: Optional[float] = None
    notes: List[str] = field(default_factory=list)

    def argmin(self, rows: Optional[Sequence[ScanRow]] = None) -> ScanRow:
        """First row with the smallest tau_qsl."""
        candidates = self.rows if rows is None else rows
        return min(candidates, key=lambda row: row.report.tau_qsl)


def build_channel(cfg: ScanConfig) -> ChannelModel:
    if cfg.channel == ChannelKind.JC:
        return JaynesCummingsChannel(cfg.jc, markovian=cfg.mode == DynamicsMode.IDEAL_MARKOV)
    return OhmicDephasingChannel(cfg.ohmic)


def _ordered_map(fn: Callable, items: Sequence, workers: int) -> list:
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def evaluate_grid(
    model: ChannelModel,
    v0: BlochVector,
    taus: Sequence[float],
    tau_d: float,
    spec: QuadratureSpec,
    workers: int = 1,
) -> List[ScanRow]:
    """
    Evaluate the unified bound at every tau.

    Raises:
        GridPointError: naming the first tau (in grid order) that failed
    """

    def evaluate(tau: float) -> ScanRow:
        try:
            report = qsl_unified(model, v0, tau, tau_d, spec)
            return ScanRow(tau=tau, signal=model.signal(tau), report=report)
        except (ArithmeticError, RuntimeError) as e:
            raise GridPointError(tau, e) from e

    return _ordered_map(evaluate, list(taus), workers)


def run_scan(cfg: ScanConfig, workers: int = 1) -> ScanResult:
    """Evaluate one configured tau sweep."""
    model = build_channel(cfg)
    taus = cfg.tau_grid.points()
    logger.info(f"Scanning {model.kind} ({cfg.mode.value}) over {len(taus)} tau points, tau_d={cfg.tau_d}")

    rows = evaluate_grid(model, cfg.v0, taus, cfg.tau_d, cfg.quadrature, workers)
    result = ScanResult(rows=rows)
    if cfg.channel == ChannelKind.JC and cfg.mode == DynamicsMode.IDEAL_MARKOV:
        result.critical_time = critical_time(cfg.jc.gamma0)

    best = result.argmin()
    result.notes.append(f"argmin tau={best.tau:.12g} tau_qsl={best.report.tau_qsl:.12g}")
    if result.critical_time is not None:
        result.notes.append(f"critical_time tau_c={result.critical_time:.12g}")
    logger.info(f"Scan finished: {result.notes[0]}")
    return result


def run_unruh_sweep(
    cfg: ScanConfig,
    accelerations: Sequence[float],
    varpi: float = 1.0,
    c: float = 1.0,
    workers: int = 1,
) -> ScanResult:
    """Scan every acceleration in turn; rows are ordered by (a, tau)."""
    model = build_channel(cfg)
    taus = cfg.tau_grid.points()
    rows: List[ScanRow] = []
    result = ScanResult(rows=rows)

    for a in accelerations:
        frame = UnruhParams(a=a, varpi=varpi, c=c)
        factor = cos_r(frame)
        v_frame = transform_initial_state(cfg.v0, frame)
        logger.info(f"Unruh sweep a={a:.6g}: cos r={factor:.12g}")
        try:
            block = evaluate_grid(model, v_frame, taus, cfg.tau_d, cfg.quadrature, workers)
        except GridPointError as e:
            raise GridPointError(e.tau, e.cause, a=a) from e.cause
        block = [
            ScanRow(tau=row.tau, signal=row.signal, report=row.report, a=a, cos_r=factor)
            for row in block
        ]
        rows.extend(block)
        best = result.argmin(block)
        result.notes.append(f"a={a:.12g} argmin tau={best.tau:.12g} tau_qsl={best.report.tau_qsl:.12g}")
    return result
