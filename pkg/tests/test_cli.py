import json

from stirap_gates.cli import (
    EXIT_NUMERICAL,
    EXIT_OK,
    EXIT_USAGE,
    cli_main,
)


def run_cli(capsys, *argv):
    code = cli_main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestSimulate:
    def test_headline_numbers(self, capsys):
        code, out, _ = run_cli(
            capsys, "simulate", "--initial", "uniform", "--kappa", "0.1", "--gamma", "0.1"
        )
        assert code == EXIT_OK
        assert "p_suc=0.8455" in out
        assert "F=0.9912" in out

    def test_trajectory_output(self, capsys, tmp_path):
        out_file = tmp_path / "traj.csv"
        code, out, _ = run_cli(
            capsys,
            "simulate", "--initial", "010", "--kappa", "0", "--gamma", "0",
            "--T", "60", "--t0", "12", "--tau", "15", "--out", str(out_file),
        )
        assert code == EXIT_OK
        lines = out_file.read_text().splitlines()
        assert lines[0].startswith("t,p_suc,")
        assert len(lines) > 10

    def test_custom_amplitudes(self, capsys):
        code, out, _ = run_cli(
            capsys,
            "simulate", "--initial", "0.5,0.5,0.5,0.5",
            "--kappa", "0.1", "--gamma", "0.1",
        )
        assert code == EXIT_OK
        assert "p_suc=0.8455" in out

    def test_bad_initial_is_numerical_error(self, capsys):
        code, _, err = run_cli(capsys, "simulate", "--initial", "nonsense")
        assert code == EXIT_NUMERICAL
        assert "error" in err

    def test_unstable_step_is_numerical_error(self, capsys):
        code, _, err = run_cli(
            capsys, "simulate", "--initial", "010", "--step", "5.0"
        )
        assert code == EXIT_NUMERICAL
        assert "norm grew" in err


class TestSweepCommand:
    def test_small_sweep_to_file(self, capsys, tmp_path):
        config = {
            "kappa_grid": {"min": 0.0, "max": 0.1, "points": 2},
            "gamma_grid": {"min": 0.0, "max": 0.1, "points": 2},
            "initial": "010",
            "integrator": {"step": 0.04},
        }
        config_path = tmp_path / "sweep.json"
        config_path.write_text(json.dumps(config))
        out_path = tmp_path / "table.csv"
        code, out, _ = run_cli(
            capsys, "sweep", "--config", str(config_path), "--out", str(out_path)
        )
        assert code == EXIT_OK
        lines = out_path.read_text().splitlines()
        assert lines[0] == "kappa_over_g,gamma_over_g,p_suc,fidelity"
        assert len(lines) == 5

    def test_missing_config_file_is_usage_error(self, capsys):
        code, _, err = run_cli(capsys, "sweep", "--config", "/no/such/file.json")
        assert code == EXIT_USAGE


class TestGateCommand:
    def test_truth_table_signs(self, capsys):
        code, out, _ = run_cli(
            capsys, "gate", "--target", "01", "--mode", "ideal",
            "--kappa", "0", "--gamma", "0",
        )
        assert code == EXIT_OK
        assert "signs: +,-,+,+" in out

    def test_target_00_ideal(self, capsys):
        code, out, _ = run_cli(
            capsys, "gate", "--target", "00", "--mode", "ideal",
            "--kappa", "0", "--gamma", "0",
        )
        assert code == EXIT_OK
        assert "signs: -,+,+,+" in out

    def test_invalid_target_is_usage_error(self, capsys):
        code, _, _ = run_cli(capsys, "gate", "--target", "22")
        assert code == EXIT_USAGE


class TestGroverCommand:
    def test_ideal_distribution(self, capsys):
        code, out, _ = run_cli(capsys, "grover", "--target", "10", "--mode", "ideal")
        assert code == EXIT_OK
        assert "P(10)=1.000000" in out
        assert "best=10" in out

    def test_simulated_reports_cumulative(self, capsys):
        code, out, _ = run_cli(
            capsys, "grover", "--target", "01", "--mode", "simulated",
            "--kappa", "0", "--gamma", "0",
        )
        assert code == EXIT_OK
        assert "cumulative_p_suc=" in out
        assert "best=01" in out


class TestDarkstatesCommand:
    def test_prints_both_states(self, capsys):
        code, out, _ = run_cli(
            capsys, "darkstates", "--omega01", "1.0", "--omegasigma2", "1.0"
        )
        assert code == EXIT_OK
        assert "D00:" in out and "D01:" in out
        assert "0,0,0: +0.707107" in out
        assert "1,0,1: -0.707107" in out

    def test_degenerate_input_is_numerical_error(self, capsys):
        code, _, err = run_cli(
            capsys, "darkstates", "--omega01", "0", "--omegasigma2", "0"
        )
        assert code == EXIT_NUMERICAL


class TestUsageHandling:
    def test_no_command(self, capsys):
        assert run_cli(capsys)[0] == EXIT_USAGE

    def test_unknown_command(self, capsys):
        assert run_cli(capsys, "teleport")[0] == EXIT_USAGE

    def test_unknown_flag(self, capsys):
        assert run_cli(capsys, "simulate", "--frequency", "2")[0] == EXIT_USAGE

    def test_help_exits_zero(self, capsys):
        assert run_cli(capsys, "--help")[0] == EXIT_OK


def test_verify_command_passes_on_clean_build(capsys):
    code, out, _ = run_cli(capsys, "verify")
    assert code == EXIT_OK
    assert "FAIL" not in out
    assert "checks passed" in out
