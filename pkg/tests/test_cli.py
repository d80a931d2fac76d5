import pathlib
import shutil
import pytest
from leslie import cli, coefficients, diagnostics
from leslie.cli import PARSER, main


def _main(*argv):
    return main(PARSER.parse_args(list(argv)))


def _summary(directory):
    lines = (directory / "summary.txt").read_text(encoding="utf-8").splitlines()
    return dict(line.split("=", 1) for line in lines)


def test_check_coefficients(support_config, capsys):
    assert _main("check-coefficients", "--config", str(support_config / "derive_example.cfg")) == 0
    lines = capsys.readouterr().out.splitlines()
    assert "gamma1=3" in lines
    assert "gamma2=1" in lines
    assert "mu1=0.333333333333" in lines
    assert "beta2=2" in lines
    assert "a=1" in lines
    assert lines[-1] == "admissible (2-D)"


def test_coefficient_report_inadmissible():
    alphas = coefficients.LeslieCoefficients(0, -1, 2, -1, 0, 1, gamma=0.5, reynolds=1)
    derived = coefficients.derive(alphas)
    assert cli.coefficient_report(derived)[-1] == "inadmissible (2-D)"


class TestRun:
    def test_zero_duration(self, support_config, tmp_path):
        out = tmp_path / "run"
        assert _main("run", "--config", str(support_config / "minimal.cfg"), "--out", str(out)) == 0
        ledger = (out / "ledger.csv").read_text(encoding="utf-8").splitlines()
        assert ledger[0] == diagnostics.LEDGER_HEADER
        assert len(ledger) == 2
        assert sorted(path.name for path in (out / "snapshots").iterdir()) == [
            "director_000000.el2d",
            "velocity_000000.el2d",
        ]
        assert "solver.scheme = rk4" in (out / "config.cfg").read_text(encoding="utf-8")
        assert "gamma1=3" in (out / "coefficients.txt").read_text(encoding="utf-8")
        summary = _summary(out)
        assert summary["steps"] == "0"
        assert summary["admissible"] == "yes"
        assert summary["monotonicity_sup_ratio[3.14159 3.14159]"] == "0"

    def test_short_run(self, support_config, tmp_path):
        out = tmp_path / "run"
        config_path = str(support_config / "derive_example.cfg")
        assert _main("run", "--config", config_path, "--out", str(out)) == 0
        with open(out / "ledger.csv", encoding="utf-8") as ledger_file:
            rows = diagnostics.read_ledger(ledger_file)
        assert [row.ledger.t for row in rows] == pytest.approx([0, 0.001, 0.002, 0.003, 0.004])
        assert rows[0].residual == 0
        assert (out / "snapshots" / "director_000004.el2d").exists()
        summary = _summary(out)
        assert summary["steps"] == "4"
        assert float(summary["largest_energy_increase"]) <= 0
        assert float(summary["energy_law_residual"]) < 1e-3

    def test_is_deterministic(self, support_config, tmp_path):
        for name in ("first", "second"):
            _main(
                "run",
                "--config",
                str(support_config / "derive_example.cfg"),
                "--out",
                str(tmp_path / name),
            )
        assert (tmp_path / "first" / "ledger.csv").read_bytes() == (
            tmp_path / "second" / "ledger.csv"
        ).read_bytes()

    def test_output_directory_from_config(self, support_config, tmp_path, monkeypatch):
        shutil.copy(support_config / "minimal.cfg", tmp_path / "minimal.cfg")
        monkeypatch.chdir(tmp_path)
        assert _main("run", "--config", "minimal.cfg") == 0
        assert (tmp_path / "run" / "summary.txt").exists()

    def test_numerical_failure(self, support_config, tmp_path, capsys):
        text = (support_config / "derive_example.cfg").read_text(encoding="utf-8")
        text = text.replace("solver.dt = 0.001", "solver.dt = 5").replace(
            "solver.t_end = 0.004", "solver.t_end = 5"
        )
        path = tmp_path / "unstable.cfg"
        path.write_text(text, encoding="utf-8")
        assert _main("run", "--config", str(path), "--out", str(tmp_path / "run")) == 3
        assert "numerical failure" in capsys.readouterr().err


class TestConfigErrors:
    def test_parodi(self, support_config, tmp_path, capsys):
        config = str(support_config / "parodi_violation.cfg")
        assert _main("run", "--config", config, "--out", str(tmp_path)) == 2
        assert "Parodi" in capsys.readouterr().err

    def test_unknown_key(self, support_config, capsys):
        assert _main("check-coefficients", "--config", str(support_config / "unknown_key.cfg")) == 2
        assert "foo" in capsys.readouterr().err

    def test_missing_config_option(self, capsys):
        assert _main("check-coefficients") == 2
        assert "--config" in capsys.readouterr().err

    def test_missing_ledger(self, tmp_path):
        assert _main("certify-ledger", str(tmp_path / "absent.csv")) == 2

    def test_zero_length(self, support_config, tmp_path, capsys):
        text = (support_config / "minimal.cfg").read_text(encoding="utf-8")
        path = tmp_path / "zero_length.cfg"
        path.write_text(
            text.replace("grid.length = 6.283185307179586", "grid.length = 0"), encoding="utf-8"
        )
        assert _main("check-coefficients", "--config", str(path)) == 2
        assert "length must be positive" in capsys.readouterr().err


class TestParser:
    def test_certify_ledger_takes_only_the_path(self):
        args = PARSER.parse_args(["certify-ledger", "ledger.csv"])
        assert args.LEDGER == pathlib.Path("ledger.csv")
        assert not hasattr(args, "seed")

    def test_seed_belongs_to_verify_identities(self):
        args = PARSER.parse_args(["verify-identities", "--seed", "7"])
        assert args.seed == 7
        for command in ("run", "check-coefficients"):
            with pytest.raises(SystemExit):
                PARSER.parse_args([command, "--config", "run.cfg", "--seed", "7"])


class TestCertifyLedger:
    def test_reproduces_the_run(self, support_config, tmp_path, capsys):
        out = tmp_path / "run"
        _main("run", "--config", str(support_config / "derive_example.cfg"), "--out", str(out))
        capsys.readouterr()
        assert _main("certify-ledger", str(out / "ledger.csv")) == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == "rows=5"
        assert lines[1] == f"energy_law_residual={_summary(out)['energy_law_residual']}"

    def test_judges_rows_like_the_run(self, support_config, tmp_path, monkeypatch):
        calls = []
        sign_violations = diagnostics.sign_violations

        def recording(entry, *args, **kwargs):
            calls.append((entry, args, kwargs))
            return sign_violations(entry, *args, **kwargs)

        monkeypatch.setattr(diagnostics, "sign_violations", recording)
        out = tmp_path / "run"
        _main("run", "--config", str(support_config / "derive_example.cfg"), "--out", str(out))
        during_run = list(calls)
        calls.clear()
        assert _main("certify-ledger", str(out / "ledger.csv")) == 0
        assert len(during_run) == 5
        assert calls == during_run

    def test_sign_violation(self, tmp_path, capsys):
        rows = [
            diagnostics.LedgerRow(
                diagnostics.EnergyLedger(t, 1.0, d_visc, 0, 0, 0, 0), 0, 0, 0, 0, 0
            )
            for (t, d_visc) in [(0.0, 0.0), (0.5, -1.0)]
        ]
        path = tmp_path / "ledger.csv"
        path.write_text(
            "\n".join([diagnostics.LEDGER_HEADER] + [row.to_line() for row in rows]) + "\n",
            encoding="utf-8",
        )
        assert _main("certify-ledger", str(path)) == 4
        assert "t=0.5: d_visc" in capsys.readouterr().out.splitlines()


def test_verify_identities(capsys):
    assert _main("verify-identities", "--seed", "3", "--n-points", "128", "--cases", "2") == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "check,status,passed,total,worst,tolerance"
    assert len(lines) == 9
