"""Experiment harness: configs, sweep cells, orchestration and result files."""

from .cells import (
    CellResult,
    SweepCell,
    cell_at,
    enumerate_cells,
    replicate_family,
    run_cell,
    run_comparison,
)
from .config import (
    ComparisonSettings,
    ComplexityProxy,
    ExperimentConfig,
    load_experiment,
    parse_config,
)
from .export import SCHEMAS, SchemaId, emit_csv, read_csv, write_json
from .sweep import (
    FIT_INSUFFICIENT,
    FitRecord,
    SweepOutcome,
    compare_across_sigma,
    execute_cells,
    fit_gap_rows,
    run_sweep,
    write_fits,
)

__all__ = [
    "ExperimentConfig",
    "ComparisonSettings",
    "ComplexityProxy",
    "SweepCell",
    "CellResult",
    "SweepOutcome",
    "FitRecord",
    "SchemaId",
    "SCHEMAS",
    "FIT_INSUFFICIENT",
    "parse_config",
    "load_experiment",
    "enumerate_cells",
    "cell_at",
    "replicate_family",
    "run_cell",
    "run_comparison",
    "execute_cells",
    "run_sweep",
    "fit_gap_rows",
    "compare_across_sigma",
    "write_fits",
    "emit_csv",
    "read_csv",
    "write_json",
]
