"""Test sweep orchestration."""

import pytest

from src.exceptions import ExportError, InvalidArgumentError
from src.harness.cells import enumerate_cells
from src.harness.export import SchemaId, read_csv
from src.harness.sweep import (
    FIT_INSUFFICIENT,
    FIT_OK,
    compare_across_sigma,
    execute_cells,
    fit_gap_rows,
    run_sweep,
)
from src.utils.constants import (
    COMPARISON_FILE,
    COMPLEXITY_FILE,
    FITS_CSV_FILE,
    FITS_JSON_FILE,
    GAPS_FILE,
    RUNLOG_FILE,
)

RESULT_FILES = (
    GAPS_FILE,
    COMPARISON_FILE,
    RUNLOG_FILE,
    COMPLEXITY_FILE,
    FITS_CSV_FILE,
    FITS_JSON_FILE,
)


class TestRunSweep:
    """Test full sweeps on a tiny design."""

    def test_writes_every_file(self, tiny_config, tmp_path):
        """Gaps, comparison, run log, complexity and fits are written."""
        outcome = run_sweep(tiny_config, tmp_path)
        assert sorted(p.name for p in outcome.files) == sorted(RESULT_FILES)
        gaps = read_csv(tmp_path / GAPS_FILE, SchemaId.GAPS)
        assert len(gaps) == 6
        assert [(r["n_train"], r["seed_index"]) for r in gaps][:2] == [(2, 0), (2, 1)]
        assert len(read_csv(tmp_path / COMPARISON_FILE, SchemaId.COMPARISON)) == 6 * 4
        runlog = read_csv(tmp_path / RUNLOG_FILE, SchemaId.RUNLOG)
        assert len(runlog) == sum(r["meta_iters"] for r in gaps)
        assert min(r["iteration"] for r in runlog) == 1
        complexity = read_csv(tmp_path / COMPLEXITY_FILE, SchemaId.COMPLEXITY)
        assert complexity[0]["n_tasks_used"] == 6

    def test_fit_over_three_sizes(self, tiny_config, tmp_path):
        """Three N values support a fit per sigma."""
        outcome = run_sweep(tiny_config, tmp_path)
        assert [f.status for f in outcome.fits] == [FIT_OK]
        fits = read_csv(tmp_path / FITS_CSV_FILE, SchemaId.FITS)
        assert fits[0]["n_points"] == 3

    def test_insufficient_grid(self, tiny_config, tmp_path):
        """Two N values are recorded, not fitted."""
        small = tiny_config.model_copy(update={"n_train_grid": [2, 4]})
        outcome = run_sweep(small, tmp_path)
        assert outcome.fits[0].status == FIT_INSUFFICIENT
        fits = read_csv(tmp_path / FITS_CSV_FILE, SchemaId.FITS)
        assert fits[0]["status"] == "insufficient grid for fit"
        assert fits[0]["fitted_exponent"] is None

    def test_parallel_matches_sequential(self, tiny_config, tmp_path):
        """Worker count never changes a byte of output."""
        run_sweep(tiny_config, tmp_path / "one", parallel=1)
        run_sweep(tiny_config, tmp_path / "two", parallel=2)
        for name in RESULT_FILES:
            assert (tmp_path / "one" / name).read_bytes() == (tmp_path / "two" / name).read_bytes()

    def test_failure_removes_partial_files(self, tiny_config, tmp_path, mocker):
        """A late failure leaves no result files behind."""
        mocker.patch("src.harness.sweep.write_fits", side_effect=ExportError("disk full"))
        with pytest.raises(ExportError):
            run_sweep(tiny_config, tmp_path)
        assert not any((tmp_path / name).exists() for name in RESULT_FILES)


class TestExecuteCells:
    """Test cell scheduling."""

    def test_rejects_zero_workers(self, tiny_config):
        """At least one worker."""
        with pytest.raises(InvalidArgumentError):
            execute_cells(enumerate_cells(tiny_config), tiny_config, parallel=0)

    def test_results_follow_cell_order(self, tiny_config):
        """Results come back in cell order."""
        cells = enumerate_cells(tiny_config)[:3]
        results = execute_cells(cells, tiny_config)
        assert [r.cell for r in results] == cells


class TestFitGapRows:
    """Test fitting from exported gap rows."""

    def test_needs_complexity(self):
        """Every sigma needs a measured complexity."""
        rows = [{"sigma": 0.5, "n_train": 4, "seed_index": 0, "epsilon_gen_abs": 0.1}]
        with pytest.raises(InvalidArgumentError):
            fit_gap_rows(rows, {})

    def test_groups_by_sigma(self):
        """One record per sigma, fitted where the grid allows."""
        rows = [
            {"sigma": s, "n_train": n, "seed_index": 0, "epsilon_gen_abs": 1.0 / n}
            for s in (0.1, 0.5)
            for n in ((4, 8, 16) if s == 0.1 else (4, 8))
        ]
        records = fit_gap_rows(rows, {0.1: 0.2, 0.5: 0.4})
        assert [r.sigma for r in records] == [0.1, 0.5]
        assert records[0].fit.fitted_exponent == pytest.approx(-1.0)
        assert records[1].status == FIT_INSUFFICIENT
        assert records[1].to_row()["n_points"] == 0


class TestCompareAcrossSigma:
    """Test the cross-sigma comparison summary."""

    def test_summary(self, tiny_config):
        """One entry per sigma at the largest N by default."""
        summary = compare_across_sigma(tiny_config)
        assert len(summary) == 1
        assert summary[0]["n_train"] == 8
        assert summary[0]["n_seeds"] == 2
        assert 0.0 <= summary[0]["mean_meta_win_fraction"] <= 1.0
