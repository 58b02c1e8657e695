"""Unit tests for main.py - command-line entry point."""

import json
import logging

import pytest

from src.harness.export import SchemaId, read_csv
from src.main import EXIT_OK, EXIT_RUNTIME, EXIT_USAGE, build_parser, main, setup_logging
from src.utils.constants import (
    CELL_RUNLOG_FILE,
    FITS_CSV_FILE,
    GAPS_FILE,
    RUNLOG_FILE,
    TASKS_FILE,
)

SETTING_VARS = (
    "METABOUND_PARALLEL",
    "METABOUND_OUTPUT_DIR",
    "METABOUND_LOG_LEVEL",
    "ENVIRONMENT",
)


@pytest.fixture(autouse=True)
def isolated(monkeypatch, tmp_path):
    """No .env file and no settings variables."""
    monkeypatch.chdir(tmp_path)
    for name in SETTING_VARS:
        monkeypatch.delenv(name, raising=False)


@pytest.fixture
def results_dir(config_file):
    return config_file.parent / "results"


def stdout_json(capsys):
    return json.loads(capsys.readouterr().out)


class TestSetupLogging:
    """Test logging configuration."""

    def test_debug_level(self):
        """Debug mode logs everything."""
        setup_logging(debug=True)
        assert logging.getLogger().level == logging.DEBUG

    def test_quiet_level(self):
        """Quiet mode keeps warnings and errors."""
        setup_logging(quiet=True)
        assert logging.getLogger().level == logging.WARNING

    def test_named_level(self):
        """Level names from settings are honoured."""
        setup_logging(level_name="ERROR")
        assert logging.getLogger().level == logging.ERROR


class TestParser:
    """Test argument parsing."""

    def test_sweep_arguments(self):
        """Global flags precede the command."""
        args = build_parser().parse_args(["--quiet", "sweep", "exp.json", "--parallel", "3"])
        assert args.command == "sweep"
        assert args.parallel == 3
        assert args.quiet

    def test_missing_command(self, capsys):
        """No command is a usage error."""
        assert main([]) == EXIT_USAGE
        assert "error" in capsys.readouterr().err

    def test_unknown_option(self):
        """Unknown options are usage errors."""
        assert main(["validate", "exp.json", "--frobnicate"]) == EXIT_USAGE

    def test_unknown_command(self, capsys):
        """Unknown subcommands print usage and exit 1."""
        assert main(["frobnicate"]) == EXIT_USAGE
        assert "usage:" in capsys.readouterr().err

    def test_sweep_help_names_parallel_variable(self, capsys):
        """The --parallel help mentions the overriding environment variable."""
        with pytest.raises(SystemExit):
            build_parser().parse_args(["sweep", "--help"])
        assert "METABOUND_PARALLEL" in capsys.readouterr().out


class TestValidate:
    """Test the validate command."""

    def test_valid(self, config_file, capsys):
        """A valid document prints ok."""
        assert main(["--quiet", "validate", str(config_file)]) == EXIT_OK
        assert capsys.readouterr().out.strip() == "ok"

    def test_missing(self, tmp_path):
        """A missing document is a usage error."""
        assert main(["--quiet", "validate", str(tmp_path / "absent.json")]) == EXIT_USAGE

    def test_invalid(self, tmp_path, capsys):
        """Unknown fields are reported by path."""
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"n_train_grid": [4], "sigma_grid": [0.5], "seeds": 3}))
        assert main(["--quiet", "validate", str(path)]) == EXIT_USAGE
        assert "seeds: unknown field" in capsys.readouterr().err


class TestRun:
    """Test the single-cell command."""

    def test_run_cell(self, config_file, results_dir, capsys):
        """The cell record is printed and its run log written."""
        assert main(["--quiet", "run", str(config_file), "--cell", "0.5,2,1"]) == EXIT_OK
        record = stdout_json(capsys)
        assert record["n_train"] == 2
        assert record["seed_index"] == 1
        rows = read_csv(results_dir / CELL_RUNLOG_FILE, SchemaId.RUNLOG)
        assert len(rows) == record["meta_iters"]

    @pytest.mark.parametrize("cell", ["0.5,2", "a,b,c", "0.3,2,0", "0.5,2,9"])
    def test_bad_cell(self, config_file, cell):
        """Malformed or off-grid cells are usage errors."""
        assert main(["--quiet", "run", str(config_file), "--cell", cell]) == EXIT_USAGE


class TestSweep:
    """Test the sweep command."""

    def test_sweep_and_refit(self, config_file, results_dir, tmp_path, capsys):
        """fit-bound reproduces the sweep's fit file byte for byte."""
        assert main(["--quiet", "sweep", str(config_file)]) == EXIT_OK
        summary = stdout_json(capsys)
        assert summary["cells"] == 6

        refit_dir = tmp_path / "refit"
        gaps = str(results_dir / GAPS_FILE)
        assert main(["--quiet", "--output-dir", str(refit_dir), "fit-bound", gaps]) == EXIT_OK
        refit = (refit_dir / FITS_CSV_FILE).read_bytes()
        assert refit == (results_dir / FITS_CSV_FILE).read_bytes()

    def test_environment_parallel_wins(self, config_file, monkeypatch, mocker):
        """METABOUND_PARALLEL overrides --parallel."""
        monkeypatch.setenv("METABOUND_PARALLEL", "1")
        run_sweep = mocker.patch("src.main.run_sweep")
        assert main(["--quiet", "sweep", str(config_file), "--parallel", "4"]) == EXIT_OK
        assert run_sweep.call_args.args[2] == 1

    def test_flag_parallel(self, config_file, mocker):
        """Without the variable the flag is used."""
        run_sweep = mocker.patch("src.main.run_sweep")
        assert main(["--quiet", "sweep", str(config_file), "--parallel", "4"]) == EXIT_OK
        assert run_sweep.call_args.args[2] == 4

    def test_output_dir_flag(self, config_file, tmp_path, mocker):
        """--output-dir beats the document's output_dir."""
        run_sweep = mocker.patch("src.main.run_sweep")
        main(["--quiet", "--output-dir", str(tmp_path / "elsewhere"), "sweep", str(config_file)])
        assert run_sweep.call_args.args[1] == tmp_path / "elsewhere"

    def test_zero_parallel(self, config_file):
        """At least one worker."""
        assert main(["--quiet", "sweep", str(config_file), "--parallel", "0"]) == EXIT_USAGE

    def test_invalid_environment_value(self, config_file, monkeypatch):
        """A bad METABOUND_PARALLEL is a configuration error."""
        monkeypatch.setenv("METABOUND_PARALLEL", "zero")
        assert main(["--quiet", "sweep", str(config_file)]) == EXIT_USAGE


class TestAnalysisCommands:
    """Test fit-bound, diagnose, compare, dump-tasks and stability."""

    def test_fit_bound_missing_file(self, tmp_path):
        """Unreadable inputs are runtime failures."""
        assert main(["--quiet", "fit-bound", str(tmp_path / "gaps.csv")]) == EXIT_RUNTIME

    def test_diagnose(self, config_file, results_dir, capsys):
        """One report per run in the log."""
        main(["--quiet", "sweep", str(config_file)])
        capsys.readouterr()
        argv = ["--quiet", "diagnose", str(results_dir / RUNLOG_FILE), "--window", "3"]
        assert main(argv) == EXIT_OK
        runs = stdout_json(capsys)["runs"]
        assert len(runs) == 6
        assert all(run["window"] == 3 for run in runs)

    def test_diagnose_bad_window(self, tmp_path):
        """Windows shorter than 2 are refused."""
        argv = ["--quiet", "diagnose", str(tmp_path / "runlog.csv"), "--window", "1"]
        assert main(argv) == EXIT_USAGE

    def test_compare(self, config_file, capsys):
        """One summary per sigma."""
        assert main(["--quiet", "compare", str(config_file), "--n-train", "4"]) == EXIT_OK
        comparison = stdout_json(capsys)["comparison"]
        assert [entry["n_train"] for entry in comparison] == [4]

    def test_compare_off_grid(self, config_file):
        """--n-train must be on the grid."""
        assert main(["--quiet", "compare", str(config_file), "--n-train", "3"]) == EXIT_USAGE

    def test_dump_tasks(self, config_file, results_dir):
        """Tasks are written as JSON."""
        assert main(["--quiet", "dump-tasks", str(config_file), "--count", "3"]) == EXIT_OK
        data = json.loads((results_dir / TASKS_FILE).read_text())
        assert [task["task_index"] for task in data["tasks"]] == [0, 1, 2]

    def test_stability(self, config_file, capsys):
        """The smoothness report includes the schedule check."""
        assert main(["--quiet", "stability", str(config_file)]) == EXIT_OK
        report = stdout_json(capsys)
        assert report["lipschitz"] >= 0.0
        assert report["schedule_valid"] is True
