"""Sweep orchestration over the N x sigma x seed grid.

Cells run sequentially or on a process pool. Results are collected in cell
order and every file is sorted on write, so outputs do not depend on the
degree of parallelism.
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
import structlog

from ..baselines.scratch import CurveOrigin
from ..bounds.scaling import BoundFit, fit_bound_scaling
from ..exceptions import InsufficientDataError, InvalidArgumentError, MetaBoundError
from ..tasks.complexity import ComplexityEstimate, estimate_complexity
from ..tasks.sampling import TaskRole, sample_task_set
from ..utils.constants import (
    COMPARISON_FILE,
    COMPLEXITY_FILE,
    FITS_CSV_FILE,
    FITS_JSON_FILE,
    GAPS_FILE,
    RUNLOG_FILE,
)
from .cells import CellResult, SweepCell, cell_at, enumerate_cells, run_cell, run_comparison
from .config import ExperimentConfig
from .export import SchemaId, emit_csv, remove_files, write_json

logger = structlog.get_logger()

FIT_OK = "ok"
FIT_INSUFFICIENT = "insufficient grid for fit"


@dataclass
class FitRecord:
    """Scaling fit of one sigma, or the reason it could not be made."""

    sigma: float
    complexity: float
    status: str = FIT_OK
    fit: Optional[BoundFit] = None

    def to_row(self) -> Dict[str, Any]:
        fit = self.fit
        return {
            "sigma": self.sigma,
            "complexity": self.complexity,
            "fitted_exponent": fit.fitted_exponent if fit else None,
            "fitted_intercept": fit.fitted_intercept if fit else None,
            "r_squared": fit.r_squared if fit else None,
            "constant_k": fit.constant_k if fit else None,
            "n_points": len(fit.grid) if fit else 0,
            "status": self.status,
        }

    def to_dict(self) -> Dict[str, Any]:
        return {
            "sigma": self.sigma,
            "complexity": self.complexity,
            "status": self.status,
            "fit": self.fit.to_dict() if self.fit else None,
        }


@dataclass
class SweepOutcome:
    """Cell results, per-sigma complexity and fits, and the files written."""

    results: List[CellResult] = field(default_factory=list)
    complexities: Dict[float, ComplexityEstimate] = field(default_factory=dict)
    fits: List[FitRecord] = field(default_factory=list)
    files: List[Path] = field(default_factory=list)


def gap_row(result: CellResult) -> Dict[str, Any]:
    cell, gap = result.cell, result.gap
    return {
        "family": result.family_kind,
        "sigma": cell.sigma,
        "n_train": cell.n_train,
        "seed_index": cell.seed_index,
        "derived_seed": cell.derived_seed,
        "mean_train_return": gap.mean_train_return,
        "mean_test_return": gap.mean_test_return,
        "epsilon_gen_signed": gap.epsilon_gen_signed,
        "epsilon_gen_abs": gap.epsilon_gen_abs,
        "hoeffding_radius_test": gap.hoeffding_radius_test,
        "subopt_gap": result.subopt_gap,
        "meta_iters": result.meta_iters,
        "final_grad_norm": result.convergence.final_grad_norm,
        "rate_class": result.convergence.rate_class.value,
        "meta_win_fraction": result.comparison.meta_win_fraction,
    }


def comparison_rows(result: CellResult) -> List[Dict[str, Any]]:
    cell = result.cell
    return [
        {
            "sigma": cell.sigma,
            "n_train": cell.n_train,
            "seed_index": cell.seed_index,
            "task_index": row.task_index,
            "final_return_meta": row.final_return_meta,
            "final_return_scratch": row.final_return_scratch,
            "steps_to_target_meta": row.steps_to_target_meta,
            "steps_to_target_scratch": row.steps_to_target_scratch,
            "target_fraction": result.comparison.target_fraction,
        }
        for row in result.comparison.per_task
    ]


def runlog_rows(result: CellResult) -> List[Dict[str, Any]]:
    cell = result.cell
    return [
        {
            "sigma": cell.sigma,
            "n_train": cell.n_train,
            "seed_index": cell.seed_index,
            "iteration": iteration,
            "meta_loss": loss,
            "grad_norm": norm,
        }
        for iteration, (loss, norm) in enumerate(
            zip(result.loss_history, result.grad_norm_history), start=1
        )
    ]


def complexity_row(sigma: float, estimate: ComplexityEstimate, proxy: str) -> Dict[str, Any]:
    return {
        "sigma": sigma,
        "optimal_return_std": estimate.optimal_return_std,
        "mean_transition_divergence": estimate.mean_transition_divergence,
        "n_tasks_used": estimate.n_tasks_used,
        "complexity": estimate.proxy(proxy),
    }


def sigma_complexity(cfg: ExperimentConfig, sigma: float) -> ComplexityEstimate:
    """Complexity of the sigma family measured on its first tasks."""
    family = cfg.family.with_sigma(sigma)
    tasks = sample_task_set(family, range(cfg.complexity_tasks), TaskRole.TRAIN)
    return estimate_complexity(tasks)


def fit_gap_rows(
    gap_rows: Iterable[Dict[str, Any]], complexity_by_sigma: Dict[float, float]
) -> List[FitRecord]:
    """Per-sigma scaling fits from gap rows (absolute gaps, grouped over seeds)."""
    grouped: Dict[float, Dict[int, List[Tuple[int, float]]]] = {}
    for row in gap_rows:
        by_n = grouped.setdefault(row["sigma"], {})
        by_n.setdefault(row["n_train"], []).append((row["seed_index"], row["epsilon_gen_abs"]))

    records = []
    for sigma in sorted(grouped):
        if sigma not in complexity_by_sigma:
            raise InvalidArgumentError(f"no complexity measured for sigma {sigma}")
        complexity = complexity_by_sigma[sigma]
        grid = [
            (n, [gap for _, gap in sorted(pairs)])
            for n, pairs in sorted(grouped[sigma].items())
        ]
        try:
            fit = fit_bound_scaling(grid, complexity)
        except InsufficientDataError:
            logger.warning("Skipping scaling fit", sigma=sigma, grid_points=len(grid))
            records.append(FitRecord(sigma, complexity, status=FIT_INSUFFICIENT))
            continue
        records.append(FitRecord(sigma, complexity, fit=fit))
    return records


def write_fits(records: Sequence[FitRecord], output_dir: Path) -> List[Path]:
    """Write the fit CSV and JSON summary."""
    csv_path = emit_csv(
        [record.to_row() for record in records], SchemaId.FITS, output_dir / FITS_CSV_FILE
    )
    json_path = write_json(
        {"fits": [record.to_dict() for record in records]}, output_dir / FITS_JSON_FILE
    )
    return [csv_path, json_path]


def _run_cell_job(job: Tuple[SweepCell, ExperimentConfig]) -> CellResult:
    cell, cfg = job
    return run_cell(cell, cfg)


def execute_cells(
    cells: Sequence[SweepCell], cfg: ExperimentConfig, parallel: int = 1
) -> List[CellResult]:
    """Run cells in order; the first failure aborts the rest."""
    if parallel < 1:
        raise InvalidArgumentError("parallel must be at least 1")
    jobs = [(cell, cfg) for cell in cells]
    if parallel == 1 or len(jobs) <= 1:
        return [_run_cell_job(job) for job in jobs]

    executor = ProcessPoolExecutor(max_workers=parallel)
    try:
        results = list(executor.map(_run_cell_job, jobs))
    except BaseException:
        executor.shutdown(wait=True, cancel_futures=True)
        raise
    executor.shutdown(wait=True)
    return results


def run_sweep(
    cfg: ExperimentConfig, output_dir: Optional[Path] = None, parallel: int = 1
) -> SweepOutcome:
    """Run every cell, write the result files and fit each sigma.

    Raises:
        CellFailedError: a cell failed; no result files are left behind.
    """
    target = Path(output_dir or cfg.output_dir)
    planned = [
        target / name
        for name in (GAPS_FILE, COMPARISON_FILE, RUNLOG_FILE, COMPLEXITY_FILE)
    ] + [target / FITS_CSV_FILE, target / FITS_JSON_FILE]

    cells = enumerate_cells(cfg)
    logger.info(
        "Starting sweep",
        cells=len(cells),
        parallel=parallel,
        output_dir=str(target),
    )

    outcome = SweepOutcome()
    try:
        outcome.results = execute_cells(cells, cfg, parallel)

        for sigma in cfg.sigma_grid:
            outcome.complexities[sigma] = sigma_complexity(cfg, sigma)
        proxy = cfg.complexity_proxy.value
        complexity_rows = [
            complexity_row(sigma, estimate, proxy)
            for sigma, estimate in outcome.complexities.items()
        ]

        gaps = [gap_row(result) for result in outcome.results]
        outcome.files.append(emit_csv(gaps, SchemaId.GAPS, target / GAPS_FILE))
        outcome.files.append(
            emit_csv(
                [row for r in outcome.results for row in comparison_rows(r)],
                SchemaId.COMPARISON,
                target / COMPARISON_FILE,
            )
        )
        outcome.files.append(
            emit_csv(
                [row for r in outcome.results for row in runlog_rows(r)],
                SchemaId.RUNLOG,
                target / RUNLOG_FILE,
            )
        )
        outcome.files.append(
            emit_csv(complexity_rows, SchemaId.COMPLEXITY, target / COMPLEXITY_FILE)
        )

        by_sigma = {row["sigma"]: row["complexity"] for row in complexity_rows}
        outcome.fits = fit_gap_rows(gaps, by_sigma)
        outcome.files.extend(write_fits(outcome.fits, target))
    except MetaBoundError as e:
        logger.error("Sweep aborted", error=str(e), error_type=type(e).__name__)
        remove_files(planned)
        raise

    logger.info("Sweep finished", cells=len(outcome.results), files=len(outcome.files))
    return outcome


def compare_across_sigma(
    cfg: ExperimentConfig, n_train: Optional[int] = None
) -> List[Dict[str, Any]]:
    """Meta-versus-scratch summary per sigma, averaged over replicates.

    Args:
        cfg: Experiment document
        n_train: Training-set size (largest grid value when None)
    """
    size = n_train if n_train is not None else max(cfg.n_train_grid)
    summary = []
    for sigma in cfg.sigma_grid:
        reports = [
            run_comparison(cell_at(cfg, sigma, size, seed_index), cfg)
            for seed_index in range(cfg.n_seeds)
        ]
        meta_steps = [r.median_steps_to_target(CurveOrigin.META_INIT) for r in reports]
        scratch_steps = [r.median_steps_to_target(CurveOrigin.SCRATCH_INIT) for r in reports]
        summary.append(
            {
                "sigma": sigma,
                "n_train": size,
                "n_seeds": len(reports),
                "mean_meta_win_fraction": float(
                    np.mean([r.meta_win_fraction for r in reports])
                ),
                "median_steps_to_target_meta": float(np.median(meta_steps)),
                "median_steps_to_target_scratch": float(np.median(scratch_steps)),
            }
        )
        logger.info("Compared adaptation", **summary[-1])
    return summary
