"""Command-line interface: flags, outputs, exit codes, reproducibility."""

import json
import os
import subprocess
import sys
from pathlib import Path

GOLDEN = Path(__file__).parent / "data"


def run_cli(*args, env_extra=None, cwd=None):
    env = {**os.environ, "COLUMNS": "100"}
    if env_extra:
        env.update(env_extra)
    return subprocess.run(
        [sys.executable, "-m", "dotbounds.cli", *args],
        capture_output=True, text=True, env=env, cwd=cwd,
    )


class TestReport:
    def test_same_sign_report(self):
        out = run_cli("report", "--family", "same-sign", "--n", "1000", "--seed", "1",
                      "--delta", "1e-16")
        assert out.returncode == 0
        assert "kappa_1" in out.stdout
        # same-sign: kappa_1 exactly 1, det_trad equals gamma_1000
        assert "kappa_1" in out.stdout and "1.0" in out.stdout
        assert "crossover[martingale]" in out.stdout
        assert "violated roundoff bounds: none" in out.stdout

    def test_crossover_verdict_flips_at_76(self):
        tight = run_cli("report", "--family", "mixed", "--n", "76", "--seed", "1")
        loose = run_cli("report", "--family", "mixed", "--n", "75", "--seed", "1")
        assert "crossover[perturbation]: probabilistic tighter" in tight.stdout
        assert "crossover[perturbation]: probabilistic not tighter" in loose.stdout

    def test_json_output(self, tmp_path):
        path = tmp_path / "report.json"
        out = run_cli("report", "--family", "mixed", "--n", "64", "--json", str(path))
        assert out.returncode == 0
        payload = json.loads(path.read_text())
        assert payload["n"] == 64
        assert "prob_martingale" in payload

    def test_input_file(self, tmp_path):
        csv = tmp_path / "v.csv"
        csv.write_text("x,y\n1.0,2.0\n0.5,4.0\n")
        out = run_cli("report", "--input", str(csv))
        assert out.returncode == 0
        assert "n" in out.stdout

    def test_missing_file_is_runtime_error(self):
        out = run_cli("report", "--input", "/nonexistent/file.csv")
        assert out.returncode == 2
        assert "error" in out.stderr

    def test_ragged_file_is_runtime_error(self, tmp_path):
        csv = tmp_path / "bad.csv"
        csv.write_text("x,y\n1.0,2.0\n0.5\n")
        out = run_cli("report", "--input", str(csv))
        assert out.returncode == 2

    def test_zero_inner_product_is_runtime_error(self, tmp_path):
        csv = tmp_path / "zero.csv"
        csv.write_text("x,y\n1.0,1.0\n1.0,-1.0\n")
        out = run_cli("report", "--input", str(csv))
        assert out.returncode == 2
        assert "zero" in out.stderr.lower()


class TestUsageErrors:
    def test_unknown_flag_exits_1(self):
        out = run_cli("report", "--frobnicate")
        assert out.returncode == 1

    def test_unknown_experiment_exits_1(self):
        out = run_cli("sweep", "--experiment", "nope")
        assert out.returncode == 1

    def test_no_command_exits_1(self):
        out = run_cli()
        assert out.returncode == 1


class TestSweepScanTrace:
    def test_sweep_row_contract(self, tmp_path):
        out_csv = tmp_path / "out.csv"
        out = run_cli("sweep", "--experiment", "roundoff-general", "--family", "mixed",
                      "--n-min", "10", "--n-max", "1e4", "--delta", "1e-16",
                      "--seeds", "3", "-o", str(out_csv))
        assert out.returncode == 0, out.stderr
        lines = out_csv.read_text().strip().splitlines()
        assert len(lines) == 1 + 4 * 3  # header + 4 grid points x 3 seeds
        assert (tmp_path / "out.csv.config.json").exists()

    def test_scientific_notation_accepted(self, tmp_path):
        out = run_cli("sweep", "--n-min", "1e1", "--n-max", "1e3", "--seeds", "1",
                      "-o", str(tmp_path / "s.csv"))
        assert out.returncode == 0

    def test_config_round_trip_byte_identical(self, tmp_path):
        first = tmp_path / "first.csv"
        out = run_cli("sweep", "--experiment", "perturbation", "--family", "mixed",
                      "--n-min", "10", "--n-max", "1000", "--seeds", "2", "-o", str(first))
        assert out.returncode == 0, out.stderr
        second = tmp_path / "second.csv"
        out = run_cli("sweep", "--config", str(first) + ".config.json", "-o", str(second))
        assert out.returncode == 0, out.stderr
        assert first.read_bytes() == second.read_bytes()

    def test_out_dir_env(self, tmp_path):
        out = run_cli("sweep", "--n-min", "10", "--n-max", "100", "--seeds", "1",
                      "-o", "rel.csv", env_extra={"DOTBOUNDS_OUT_DIR": str(tmp_path)})
        assert out.returncode == 0, out.stderr
        assert (tmp_path / "rel.csv").exists()

    def test_trace_row_contract(self, tmp_path):
        out_csv = tmp_path / "tr.csv"
        out = run_cli("trace", "--family", "mixed", "--n", "8", "--seed", "1",
                      "-o", str(out_csv))
        assert out.returncode == 0
        lines = out_csv.read_text().strip().splitlines()
        assert len(lines) == 1 + 16
        first = lines[1].split(",")
        assert float(first[4]) == 0.0  # Z starts at zero

    def test_scan_small(self, tmp_path):
        out_csv = tmp_path / "scan.csv"
        out = run_cli("scan", "--family", "same-sign", "--n-min", "100",
                      "--n-max", "1e4", "--seeds", "1", "-o", str(out_csv))
        assert out.returncode == 0, out.stderr
        assert "first violation" in out.stdout
        assert out_csv.exists()

    def test_azuma_contract(self):
        out = run_cli("azuma", "--delta", "0.05", "--trials", "20000",
                      "--coeffs", "equal:100")
        assert out.returncode == 0
        assert "within slack: True" in out.stdout

    def test_azuma_explicit_coeffs(self):
        out = run_cli("azuma", "--delta", "0.73", "--trials", "1000", "--coeffs", "3,4")
        assert out.returncode == 0


class TestHelp:
    def test_help_golden(self):
        out = run_cli("--help")
        assert out.returncode == 0
        golden = (GOLDEN / "help.txt").read_text()
        assert out.stdout == golden

    def test_subcommand_help_documents_defaults(self):
        for sub in ("report", "sweep", "scan", "azuma", "trace"):
            out = run_cli(sub, "--help")
            assert out.returncode == 0
            assert "default" in out.stdout, sub
