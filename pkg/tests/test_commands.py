"""End-to-end tests for the command-line surface."""

import json
import math

import pytest

from qslkit.commands import preset
from qslkit.commands.options import parse_accelerations, suffixed_path
from qslkit.main import main
from qslkit.models import ChannelKind, OutputFormat, QuadratureSpec, UniformGrid
from qslkit.services import scan_runner, verification
from qslkit.services.numerics import QuadratureError
from qslkit.services.output_writer import SCAN_COLUMNS, UNRUH_COLUMNS
from qslkit.services.verification import VerifyOptions


def _header(path) -> str:
    return path.read_text(encoding="utf-8").split("\n")[0]


class TestScanCommand:
    def test_writes_csv(self, tmp_path):
        out = tmp_path / "jc.csv"
        code = main(["scan", "--model", "jc", "--gamma0", "0.1", "--lambda", "1",
                     "--tau-grid", "0:1:0.5", "--out", str(out)])
        assert code == 0
        lines = out.read_text(encoding="utf-8").splitlines()
        assert lines[0] == ",".join(SCAN_COLUMNS)
        assert len([line for line in lines if not line.startswith("#")]) == 4

    def test_s_list_fans_out(self, tmp_path):
        out = tmp_path / "deph.csv"
        code = main(["scan", "--model", "dephasing", "--s", "0.5,3", "--coh", "0.25",
                     "--tau-grid", "0:1:0.5", "--out", str(out)])
        assert code == 0
        assert (tmp_path / "deph_s0.5.csv").exists()
        assert (tmp_path / "deph_s3.csv").exists()

    def test_stdout_and_plotdata(self, capsys):
        code = main(["--log-level", "warning", "scan", "--tau-grid", "0:0.5:0.5", "--format", "plotdata"])
        assert code == 0
        assert capsys.readouterr().out.startswith("# " + " ".join(SCAN_COLUMNS))

    def test_config_file_with_flag_override(self, tmp_path):
        config_path = tmp_path / "cfg.json"
        config_path.write_text(json.dumps({
            "channel": "dephasing",
            "ohmic": {"eta": 1.0, "s": 3.0},
            "v0": "1,0,0",
            "tau_grid": "0:2:1",
        }), encoding="utf-8")
        out = tmp_path / "cfg.csv"
        code = main(["--config", str(config_path), "scan", "--tau-grid", "0:1:1", "--out", str(out)])
        assert code == 0
        rows = [line for line in out.read_text(encoding="utf-8").splitlines()[1:] if not line.startswith("#")]
        assert len(rows) == 2

    def test_invalid_configuration_exits_1(self, tmp_path):
        assert main(["scan", "--tau-d", "-1", "--out", str(tmp_path / "x.csv")]) == 1
        assert main(["scan", "--model", "dephasing", "--mode", "ideal-markov"]) == 1
        assert main(["scan", "--bloch", "1,1,1"]) == 1
        assert main(["scan", "--tau-grid", "2:1:0.1"]) == 1

    def test_usage_error_exits_1(self):
        with pytest.raises(SystemExit) as info:
            main(["scan", "--coh", "0.5", "--bloch", "1,0,0"])
        assert info.value.code == 1
        with pytest.raises(SystemExit) as info:
            main(["scan", "--model", "qutrit"])
        assert info.value.code == 1

    def test_numerical_failure_exits_2(self, monkeypatch, capsys):
        def failing(model, v0, tau, tau_d, spec):
            raise QuadratureError("roundoff error detected", tau, tau + tau_d)

        monkeypatch.setattr(scan_runner, "qsl_unified", failing)
        assert main(["scan", "--tau-grid", "0.25:1:0.25"]) == 2
        assert "tau=0.25" in capsys.readouterr().err


class TestUnruhCommand:
    def test_writes_frame_columns(self, tmp_path):
        out = tmp_path / "unruh.csv"
        code = main(["unruh", "--model", "dephasing", "--coh", "1", "--a-grid", "0.5,1,2",
                     "--tau-grid", "0:1:0.5", "--out", str(out)])
        assert code == 0
        assert _header(out) == ",".join(UNRUH_COLUMNS)
        rows = [line for line in out.read_text(encoding="utf-8").splitlines()[1:] if not line.startswith("#")]
        assert len(rows) == 9

    def test_rejects_non_positive_acceleration(self):
        assert main(["unruh", "--a-grid", "0,1"]) == 1

    def test_acceleration_grid_forms(self):
        assert parse_accelerations("1:3:1") == [1.0, 2.0, 3.0]
        assert parse_accelerations("0.5, 4") == [0.5, 4.0]


class TestPresetCommand:
    def test_figure_parameters(self):
        spec = QuadratureSpec()
        (stem, fig1a), = preset.preset_configs("fig1a", spec, OutputFormat.CSV)
        assert stem == "fig1a"
        assert (fig1a.jc.gamma0, fig1a.jc.lam, fig1a.jc.omega0, fig1a.tau_d) == (0.1, 1.0, 1.0, 1.0)
        assert fig1a.v0.v_z == -1.0
        assert fig1a.tau_grid == UniformGrid(start=0.0, stop=20.0, step=0.02)
        (_, fig1b), = preset.preset_configs("fig1b", spec, OutputFormat.CSV)
        assert fig1b.jc.gamma0 == 10.0

        fig2 = preset.preset_configs("fig2", spec, OutputFormat.CSV)
        assert len(fig2) == 9
        for stem, cfg in fig2:
            assert cfg.channel == ChannelKind.DEPHASING
            assert (cfg.ohmic.eta, cfg.ohmic.omega_c, cfg.tau_d) == (1.0, 1.0, 1.0)
        assert fig2[0][0] == "fig2_s0.5_coh0.25"

    def test_writes_files(self, tmp_path, monkeypatch):
        monkeypatch.setattr(preset, "DEPHASING_GRID", UniformGrid(start=0.0, stop=1.0, step=0.5))
        assert main(["preset", "fig2", "--out", str(tmp_path), "--format", "plotdata"]) == 0
        written = sorted(p.name for p in tmp_path.iterdir())
        assert len(written) == 9
        assert "fig2_s3_coh1.dat" in written

    def test_reruns_are_bit_identical(self, tmp_path, monkeypatch):
        monkeypatch.setattr(preset, "JC_GRID", UniformGrid(start=0.0, stop=3.0, step=0.1))
        serial, parallel = tmp_path / "serial", tmp_path / "parallel"
        assert main(["preset", "fig1b", "--out", str(serial)]) == 0
        assert main(["--workers", "4", "preset", "fig1b", "--out", str(parallel)]) == 0
        assert (serial / "fig1b.csv").read_bytes() == (parallel / "fig1b.csv").read_bytes()

    @pytest.mark.slow
    def test_full_fig1a(self, tmp_path):
        assert main(["preset", "fig1a", "--out", str(tmp_path)]) == 0
        rows = (tmp_path / "fig1a.csv").read_text(encoding="utf-8").splitlines()
        assert len([row for row in rows if not row.startswith("#")]) == 1002


class TestVerifyCommand:
    def _only(self, monkeypatch, *names):
        checks = {name: verification._CHECKS[name] for name in names}
        monkeypatch.setattr(verification, "_CHECKS", checks)

    def test_passing_subset(self, monkeypatch, capsys):
        self._only(monkeypatch, "semi_infinite_closed_forms", "singular_values_vs_svd", "unruh_identities")
        assert main(["verify"]) == 0
        out = capsys.readouterr().out
        assert out.count("PASS") == 3
        assert "3 passed, 0 failed, 0 skipped" in out

    def test_loose_tolerance_is_a_failure(self, monkeypatch, capsys):
        self._only(monkeypatch, "quadrature_closed_forms", "semi_infinite_closed_forms")
        assert main(["verify", "--abs-tol", "1"]) == 2
        out = capsys.readouterr().out
        assert out.count("FAIL") == 2
        assert out.count("exceeds check tolerance 1e-08; observed max_dev") == 2
        assert "max_dev=inf" not in out

    def test_loose_tolerance_still_runs_the_oracle(self, monkeypatch):
        self._only(monkeypatch, "jc_population_vs_rate_integral")
        loose = VerifyOptions(quadrature=QuadratureSpec(abs_tol=1e-3, rel_tol=1e-3))
        (result,) = verification.run_verification(loose)
        assert result.status == "FAIL"
        assert math.isfinite(result.max_deviation)
        assert f"observed max_dev {result.max_deviation:.3e}" in result.note

    def test_kappa_override_skips_integral_oracle(self, monkeypatch, capsys):
        self._only(monkeypatch, "dephasing_exponent_vs_integral", "dephasing_ohmic_closed_form")
        assert main(["verify", "--kappa", "2"]) == 0
        out = capsys.readouterr().out
        assert "SKIP" in out
        assert "kappa=2" in out
        assert "observed ratio 2.000000" in out

    def test_raising_check_is_reported(self, monkeypatch, capsys):
        def explode(opts):
            raise QuadratureError("diverged", 0.0, 1.0)

        monkeypatch.setattr(verification, "_CHECKS", {"exploding": explode})
        assert main(["verify"]) == 2
        assert "raised QuadratureError" in capsys.readouterr().out

    @pytest.mark.slow
    def test_full_suite_passes(self):
        assert main(["verify"]) == 0


def test_suffixed_path():
    assert suffixed_path(None, 0.5) is None
    assert suffixed_path("out/a.csv", None).name == "a.csv"
    assert suffixed_path("out/a.csv", 0.5).name == "a_s0.5.csv"
