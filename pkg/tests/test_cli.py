"""Command-line front end: subcommands, exit codes, CSV round trips."""

import math

import numpy as np
import pytest

from fpkin import cli, equilibrium, kinetics, specfun

QUICK_CONFIG = """\
[grid]
x_nodes = 16
v_nodes = 32
length = 1.0
v_max = 8.0

[model]
k = -0.5
rho = 1.0

[time]
dt = auto
t_final = 0.5
output_interval = 0.1

[initial]
kind = modulated
amplitude = 0.3
mode = 1

[boundary]
kind = bounce_back
"""


class TestEquilibriumCommand:
    def test_classical_constant(self, capsys):
        code = cli.main(["equilibrium", "--k", "0", "--n", "3",
                         "--vol", "1", "--rho", "1"])
        out = capsys.readouterr().out
        assert code == cli.EXIT_OK
        assert f"{(2 * math.pi) ** -1.5:.6g}"[:8] in out.replace("\n", " ")

    def test_fermion_verdict(self, capsys):
        code = cli.main(["equilibrium", "--k", "-1", "--n", "3"])
        out = capsys.readouterr().out
        assert code == cli.EXIT_OK
        assert "fermion > classical" in out

    def test_supercritical_exit_code(self, capsys):
        k = 2.0 * (2 * math.pi) ** 1.5 * specfun.polylog(1.5, 1.0)
        code = cli.main(["equilibrium", "--k", str(k), "--n", "3"])
        err = capsys.readouterr().err
        assert code == cli.EXIT_SUPERCRITICAL
        assert "k*C = 1" in err

    def test_csv_output(self, tmp_path, capsys):
        out = tmp_path / "eq.csv"
        code = cli.main(["equilibrium", "--k", "-0.5", "--out", str(out)])
        assert code == cli.EXIT_OK
        rows = cli.read_sweep_csv(out)
        assert len(rows) == 1
        assert rows[0]["status"] == "ok"


class TestSweepCommand:
    def test_fermion_range(self, tmp_path, capsys):
        out = tmp_path / "sweep.csv"
        code = cli.main(["sweep", "--k-min", "-0.5", "--k-max", "0",
                         "--steps", "11", "--n", "1", "--out", str(out)])
        stdout = capsys.readouterr().out
        assert code == cli.EXIT_OK
        assert "11 rows, 0 inequality violations" in stdout
        assert len(cli.read_sweep_csv(out)) == 11

    def test_degenerate_range_single_row(self, tmp_path):
        out = tmp_path / "one.csv"
        assert cli.main(["sweep", "--k-min", "-1", "--k-max", "-1",
                         "--out", str(out)]) == cli.EXIT_OK
        assert len(cli.read_sweep_csv(out)) == 1

    def test_supercritical_rows_do_not_fail_the_sweep(self, tmp_path, capsys):
        k_top = 3.0 * (2 * math.pi) ** 1.5 * specfun.polylog(1.5, 1.0)
        out = tmp_path / "crossing.csv"
        code = cli.main(["sweep", "--k-min", "0.1", "--k-max", str(k_top),
                         "--steps", "8", "--n", "3", "--out", str(out)])
        stdout = capsys.readouterr().out
        assert code == cli.EXIT_OK
        assert "supercritical" in stdout
        rows = cli.read_sweep_csv(out)
        assert any(r["status"] == "supercritical" for r in rows)

    def test_unwritable_path(self, capsys):
        code = cli.main(["sweep", "--k-min", "-1", "--k-max", "0",
                         "--out", "/nonexistent-dir/sweep.csv"])
        assert code == cli.EXIT_IO

    def test_round_trip_bit_for_bit(self, tmp_path):
        out = tmp_path / "roundtrip.csv"
        cli.main(["sweep", "--k-min", "-0.8", "--k-max", "0.4",
                  "--steps", "7", "--n", "2", "--out", str(out)])
        rows = equilibrium.sweep(np.linspace(-0.8, 0.4, 7), n=2)
        parsed = cli.read_sweep_csv(out)
        assert len(parsed) == len(rows)
        for row, back in zip(rows, parsed):
            for col in ("k", "C_k", "kC", "E_q", "S_q", "F_q", "residual"):
                assert back[col] == getattr(row, col)  # exact, 17 sig digits
            assert back["in_window"] == row.in_window


class TestSimulateCommand:
    def test_quick_run(self, tmp_path, capsys):
        cfg = tmp_path / "run.ini"
        cfg.write_text(QUICK_CONFIG)
        diag = tmp_path / "diag.csv"
        fieldp = tmp_path / "field.csv"
        code = cli.main(["simulate", "--config", str(cfg),
                         "--diagnostics", str(diag),
                         "--field-out", str(fieldp)])
        stdout = capsys.readouterr().out
        assert code == cli.EXIT_OK
        assert "conservative" in stdout
        assert "decay violations     = 0" in stdout

        lines = diag.read_text().splitlines()
        comments = [l for l in lines if l.startswith("#")]
        assert any("x_nodes = 16" in c for c in comments)
        header = next(l for l in lines if not l.startswith("#"))
        assert header == "t,rho,E,S,F,G,Gtilde,A,B,U,mass_error"
        data = [l for l in lines if not l.startswith("#")][1:]
        assert len(data) == 6  # t = 0.0 .. 0.5 every 0.1
        first = [float(c) for c in data[0].split(",")]
        assert first[1] == pytest.approx(1.0, rel=1e-12)  # rho column

        matrix = np.loadtxt(fieldp, delimiter=",", comments="#")
        assert matrix.shape == (16, 32)

    def test_oversized_dt_exits_solver_code(self, tmp_path, capsys):
        cfg = tmp_path / "bad.ini"
        cfg.write_text(QUICK_CONFIG.replace("dt = auto", "dt = 0.5"))
        diag = tmp_path / "partial.csv"
        code = cli.main(["simulate", "--config", str(cfg),
                         "--diagnostics", str(diag)])
        assert code == cli.EXIT_SOLVER
        # partial series (the initial record) is retained
        data = [l for l in diag.read_text().splitlines()
                if l and not l.startswith("#")]
        assert len(data) == 2  # header + t=0 record

    def test_missing_config_is_io_error(self):
        assert cli.main(["simulate", "--config", "/no/such/file.ini"]) \
            == cli.EXIT_IO


class TestVerifyCommand:
    def test_quick_passes(self, capsys):
        code = cli.main(["verify", "--quick"])
        out = capsys.readouterr().out
        assert code == cli.EXIT_OK
        assert "all criteria passed" in out
        assert "SKIP" in out  # the long simulation is skipped

    def test_tampered_polylog_fails_named_criterion(self, capsys,
                                                    monkeypatch):
        true_polylog = specfun.polylog

        def bent(s, z, method="auto"):
            value = true_polylog(s, z, method)
            return value + 0.01 if z == 1.0 else value

        monkeypatch.setattr(specfun, "polylog", bent)
        code = cli.main(["verify", "--quick"])
        captured = capsys.readouterr()
        assert code == cli.EXIT_VERIFY_FAILED
        assert "zeta" in captured.err


class TestExitCodes:
    def test_documented_values(self):
        assert cli.EXIT_OK == 0
        assert cli.EXIT_VERIFY_FAILED == 1
        assert cli.EXIT_SUPERCRITICAL == 2
        assert cli.EXIT_IO == 3
        assert cli.EXIT_SOLVER == 4
