"""
qslkit Output Writer Service
CSV and plot-data emission for scan results.

Both formats carry the same columns; floats use 12 significant digits and
'\n' line endings, so identical scans produce identical bytes.
"""

import logging
import sys
from pathlib import Path
from typing import List, Optional

import pandas as pd

from qslkit.models import OutputFormat
from qslkit.services.scan_runner import ScanResult, ScanRow

logger = logging.getLogger(__name__)

SCAN_COLUMNS = [
    "tau", "tau_qsl", "tau_qsl_over_tau_d", "signal",
    "numerator", "d_ml", "d_mt", "dominant", "degenerate",
]
UNRUH_COLUMNS = ["a", "cos_r"] + SCAN_COLUMNS
FLOAT_FORMAT = "%.12g"


def _row_record(row: ScanRow) -> dict:
    report = row.report
    record = {
        "tau": row.tau,
        "tau_qsl": report.tau_qsl,
        "tau_qsl_over_tau_d": report.tau_qsl / report.tau_d,
        "signal": row.signal,
        "numerator": report.numerator,
        "d_ml": report.d_ml,
        "d_mt": report.d_mt,
        "dominant": report.dominant.value,
        "degenerate": str(report.degenerate).lower(),
    }
    if row.a is not None:
        record["a"] = row.a
        record["cos_r"] = row.cos_r
    return record


def result_to_frame(result: ScanResult, with_frame: bool = False) -> pd.DataFrame:
    columns = UNRUH_COLUMNS if with_frame else SCAN_COLUMNS
    return pd.DataFrame([_row_record(row) for row in result.rows], columns=columns)


def _write(handle, frame: pd.DataFrame, fmt: OutputFormat, footer: List[str]):
    if fmt == OutputFormat.PLOTDATA:
        handle.write("# " + " ".join(frame.columns) + "\n")
        frame.to_csv(handle, sep=" ", header=False, index=False,
                     float_format=FLOAT_FORMAT, lineterminator="\n")
    else:
        frame.to_csv(handle, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    for line in footer:
        handle.write(f"# {line}\n")


def write_result(
    result: ScanResult,
    path: Optional[Path],
    fmt: OutputFormat = OutputFormat.CSV,
    with_frame: bool = False,
) -> None:
    """Write a scan (or Unruh sweep) to path, or to stdout when path is None."""
    frame = result_to_frame(result, with_frame=with_frame)
    if path is None:
        _write(sys.stdout, frame, fmt, result.notes)
        return
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as handle:
        _write(handle, frame, fmt, result.notes)
    logger.info(f"Wrote {len(frame)} rows to {path}")
