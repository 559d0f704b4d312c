"""Tests for grid evaluation, Unruh sweeps and result emission."""

import math

import pytest
from pydantic import ValidationError

from qslkit.models import (
    BlochVector,
    ChannelKind,
    DampedJCParams,
    DynamicsMode,
    OhmicParams,
    OutputFormat,
    ScanConfig,
    UniformGrid,
)
from qslkit.services import scan_runner
from qslkit.services.numerics import QuadratureError
from qslkit.services.output_writer import SCAN_COLUMNS, UNRUH_COLUMNS, result_to_frame, write_result
from qslkit.services.scan_runner import GridPointError, run_scan, run_unruh_sweep


def _jc_config(**overrides) -> ScanConfig:
    data = dict(
        channel=ChannelKind.JC,
        jc=DampedJCParams(gamma0=0.1, lam=1.0),
        v0=BlochVector(v_z=-1.0),
        tau_grid=UniformGrid(start=0.0, stop=2.0, step=0.25),
        tau_d=1.0,
    )
    data.update(overrides)
    return ScanConfig(**data)


class TestUniformGrid:
    def test_points_include_stop(self):
        assert UniformGrid(start=0.0, stop=1.0, step=0.1).points()[-1] == pytest.approx(1.0)
        assert len(UniformGrid(start=0.0, stop=20.0, step=0.02).points()) == 1001

    def test_single_point(self):
        assert UniformGrid(start=3.0, stop=3.0, step=0.5).points() == [3.0]

    def test_parse_and_validation(self):
        assert UniformGrid.parse("0:30:0.02").stop == 30.0
        with pytest.raises(ValidationError):
            UniformGrid(start=2.0, stop=1.0, step=0.1)
        with pytest.raises(ValidationError):
            UniformGrid(start=0.0, stop=1.0, step=0.0)
        with pytest.raises(ValueError):
            UniformGrid.parse("0:1")


class TestScanConfig:
    def test_parses_text_fields(self):
        cfg = ScanConfig(tau_grid="0:5:0.5", v0="0.6,0,0")
        assert cfg.tau_grid.step == 0.5
        assert cfg.v0.v_x == 0.6

    def test_ideal_markov_requires_jc(self):
        with pytest.raises(ValidationError, match="ideal_markov"):
            ScanConfig(channel=ChannelKind.DEPHASING, mode=DynamicsMode.IDEAL_MARKOV)

    def test_rejects_non_positive_driving_time(self):
        with pytest.raises(ValidationError):
            ScanConfig(tau_d=0.0)

    def test_lambda_alias(self):
        cfg = ScanConfig.model_validate({"jc": {"gamma0": 10, "lambda": 2}})
        assert cfg.jc.lam == 2.0


class TestRunScan:
    def test_rows_follow_grid(self):
        result = run_scan(_jc_config())
        assert [row.tau for row in result.rows] == UniformGrid(start=0.0, stop=2.0, step=0.25).points()
        assert result.rows[0].signal == pytest.approx(1.0)
        assert result.notes[0].startswith("argmin tau=")

    def test_ideal_markov_reports_critical_time(self):
        cfg = _jc_config(mode=DynamicsMode.IDEAL_MARKOV, tau_grid=UniformGrid(start=0.0, stop=30.0, step=0.01))
        result = run_scan(cfg)
        assert result.critical_time == pytest.approx(10 * math.log(2.0))
        assert abs(result.argmin().tau - result.critical_time) <= 0.01
        assert any(note.startswith("critical_time tau_c=") for note in result.notes)

    def test_parallel_matches_serial(self):
        cfg = ScanConfig(
            channel=ChannelKind.DEPHASING,
            ohmic=OhmicParams(s=3.0),
            v0=BlochVector.from_coherence(0.5),
            tau_grid=UniformGrid(start=0.0, stop=4.0, step=0.1),
        )
        serial = run_scan(cfg, workers=1)
        parallel = run_scan(cfg, workers=4)
        assert [r.tau for r in serial.rows] == [r.tau for r in parallel.rows]
        assert [r.report for r in serial.rows] == [r.report for r in parallel.rows]

    def test_failure_names_grid_point(self, monkeypatch):
        real = scan_runner.qsl_unified

        def flaky(model, v0, tau, tau_d, spec):
            if tau == 0.5:
                raise QuadratureError("maximum number of subdivisions", tau, tau + tau_d)
            return real(model, v0, tau, tau_d, spec)

        monkeypatch.setattr(scan_runner, "qsl_unified", flaky)
        with pytest.raises(GridPointError, match="tau=0.5") as info:
            run_scan(_jc_config(), workers=2)
        assert info.value.tau == 0.5


class TestUnruhSweep:
    def test_rows_ordered_by_acceleration_then_tau(self):
        result = run_unruh_sweep(_jc_config(v0=BlochVector(v_z=1.0)), [0.5, 2.0])
        keys = [(row.a, row.tau) for row in result.rows]
        assert keys == sorted(keys)
        assert len(result.notes) == 2

    def test_near_inertial_block_matches_scan(self):
        cfg = ScanConfig(
            channel=ChannelKind.DEPHASING,
            v0=BlochVector.from_coherence(1.0),
            tau_grid=UniformGrid(start=0.0, stop=3.0, step=0.5),
        )
        inertial = run_scan(cfg)
        sweep = run_unruh_sweep(cfg, [1e-3, 1.0])
        first = [row for row in sweep.rows if row.a == 1e-3]
        for a, b in zip(first, inertial.rows):
            assert a.report.tau_qsl == pytest.approx(b.report.tau_qsl, abs=1e-12)
            assert a.cos_r == 1.0

    def test_failure_names_acceleration(self, monkeypatch):
        def broken(model, v0, tau, tau_d, spec):
            raise ZeroDivisionError("pole")

        monkeypatch.setattr(scan_runner, "qsl_unified", broken)
        with pytest.raises(GridPointError, match="a=2"):
            run_unruh_sweep(_jc_config(), [2.0])


class TestOutputWriter:
    def test_csv_schema(self, tmp_path):
        path = tmp_path / "out" / "scan.csv"
        write_result(run_scan(_jc_config()), path)
        lines = path.read_text(encoding="utf-8").split("\n")
        assert lines[0] == ",".join(SCAN_COLUMNS)
        first = lines[1].split(",")
        assert first[0] == "0"
        assert first[-2] == "ML"
        assert first[-1] in ("true", "false")
        assert lines[-2].startswith("# argmin tau=")
        assert "\r" not in path.read_text(encoding="utf-8")

    def test_twelve_significant_digits(self, capsys):
        write_result(run_scan(_jc_config()), None)
        rows = [line.split(",") for line in capsys.readouterr().out.splitlines()[1:] if not line.startswith("#")]
        digits = [
            len(field.split("e")[0].lstrip("-").replace(".", "").lstrip("0"))
            for row in rows for field in row[:7]
        ]
        assert max(digits) == 12

    def test_frame_columns(self):
        frame = result_to_frame(run_scan(_jc_config()))
        assert list(frame.columns) == SCAN_COLUMNS
        assert (frame["tau_qsl_over_tau_d"] == frame["tau_qsl"]).all()

    def test_plotdata(self, tmp_path):
        path = tmp_path / "scan.dat"
        write_result(run_scan(_jc_config()), path, OutputFormat.PLOTDATA)
        lines = path.read_text(encoding="utf-8").splitlines()
        assert lines[0] == "# " + " ".join(SCAN_COLUMNS)
        assert len(lines[1].split(" ")) == len(SCAN_COLUMNS)

    def test_unruh_columns(self, tmp_path):
        path = tmp_path / "unruh.csv"
        write_result(run_unruh_sweep(_jc_config(), [1.0]), path, with_frame=True)
        assert path.read_text(encoding="utf-8").split("\n")[0] == ",".join(UNRUH_COLUMNS)

    def test_stdout(self, capsys):
        write_result(run_scan(_jc_config()), None)
        assert capsys.readouterr().out.startswith("tau,tau_qsl,")

    def test_bit_identical_reruns(self, tmp_path):
        first, second = tmp_path / "a.csv", tmp_path / "b.csv"
        write_result(run_scan(_jc_config()), first)
        write_result(run_scan(_jc_config(), workers=3), second)
        assert first.read_bytes() == second.read_bytes()
