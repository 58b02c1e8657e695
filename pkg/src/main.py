"""Command-line entry point for MetaBound Lab."""

import argparse
import json
import logging
import sys
from collections import defaultdict
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

import structlog

from src import __version__
from src.config.loader import load_settings
from src.config.settings import Settings
from src.exceptions import ConfigurationError, MetaBoundError, UsageError
from src.harness.cells import cell_at, run_cell
from src.harness.config import ExperimentConfig, load_experiment
from src.harness.export import SchemaId, emit_csv, read_csv, write_json
from src.harness.sweep import (
    compare_across_sigma,
    fit_gap_rows,
    run_sweep,
    runlog_rows,
    write_fits,
)
from src.mdp.models import PolicyParams
from src.meta.diagnostics import ConvergenceReport, convergence_diagnostics
from src.meta.learner import MetaState
from src.meta.schedule import validate_schedule
from src.meta.stability import estimate_smoothness
from src.tasks.sampling import TaskRole, make_split, sample_task_set
from src.utils.constants import (
    APP_DESCRIPTION,
    APP_NAME,
    CELL_RUNLOG_FILE,
    COMPLEXITY_FILE,
    DEFAULT_CONVERGENCE_WINDOW,
    PARALLEL_ENV_VAR,
    TASKS_FILE,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_RUNTIME = 2


def setup_logging(debug: bool = False, quiet: bool = False, level_name: str = "INFO") -> None:
    """Configure structured logging on stderr."""
    if debug:
        level = logging.DEBUG
    elif quiet:
        level = logging.WARNING
    else:
        level = getattr(logging, level_name, logging.INFO)

    # stdout carries command results
    logging.basicConfig(level=level, format="%(message)s", stream=sys.stderr, force=True)

    structlog.configure(
        processors=[
            structlog.stdlib.filter_by_level,
            structlog.stdlib.add_logger_name,
            structlog.stdlib.add_log_level,
            structlog.stdlib.PositionalArgumentsFormatter(),
            structlog.processors.TimeStamper(fmt="iso"),
            structlog.processors.StackInfoRenderer(),
            structlog.processors.format_exc_info,
            structlog.processors.UnicodeDecoder(),
            (
                structlog.processors.JSONRenderer()
                if not debug
                else structlog.dev.ConsoleRenderer()
            ),
        ],
        context_class=dict,
        logger_factory=structlog.stdlib.LoggerFactory(),
        wrapper_class=structlog.stdlib.BoundLogger,
        cache_logger_on_first_use=True,
    )


class CliParser(argparse.ArgumentParser):
    """Argument parser that reports usage errors as exceptions."""

    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _parse_cell(text: str) -> Tuple[float, int, int]:
    parts = text.split(",")
    if len(parts) != 3:
        raise UsageError(f"--cell expects sigma,N,seed; got {text!r}")
    try:
        return float(parts[0]), int(parts[1]), int(parts[2])
    except ValueError as e:
        raise UsageError(f"--cell expects sigma,N,seed; got {text!r}") from e


def build_parser() -> CliParser:
    """Build the command-line parser."""
    parser = CliParser(
        prog="metabound",
        description=f"{APP_NAME}: {APP_DESCRIPTION}",
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=f"{APP_NAME} {__version__}")
    parser.add_argument("--debug", action="store_true", help="Enable debug logging")
    parser.add_argument("--quiet", action="store_true", help="Only log warnings and errors")
    parser.add_argument("--output-dir", type=Path, help="Directory for result files")

    commands = parser.add_subparsers(dest="command", metavar="command", parser_class=CliParser)
    commands.required = True

    validate = commands.add_parser("validate", help="Parse and check an experiment document")
    validate.add_argument("config", type=Path)

    run = commands.add_parser("run", help="Run a single sweep cell")
    run.add_argument("config", type=Path)
    run.add_argument("--cell", required=True, help="Cell coordinates sigma,N,seed")

    sweep = commands.add_parser("sweep", help="Run the full experimental grid")
    sweep.add_argument("config", type=Path)
    sweep.add_argument(
        "--parallel",
        type=int,
        default=1,
        help=f"Worker processes (overridden by {PARALLEL_ENV_VAR})",
    )

    fit = commands.add_parser("fit-bound", help="Re-fit the scaling law from a gap CSV")
    fit.add_argument("gap_csv", type=Path)
    fit.add_argument(
        "--complexity-csv", type=Path, help="Complexity CSV (default: next to gaps)"
    )

    compare = commands.add_parser("compare", help="Meta versus scratch adaptation per sigma")
    compare.add_argument("config", type=Path)
    compare.add_argument("--n-train", type=int, help="Training-set size (default: largest N)")

    diagnose = commands.add_parser("diagnose", help="Classify convergence from a run log")
    diagnose.add_argument("runlog_csv", type=Path)
    diagnose.add_argument("--grad-tol", type=float, default=1e-3)
    diagnose.add_argument("--window", type=int, default=DEFAULT_CONVERGENCE_WINDOW)

    dump = commands.add_parser("dump-tasks", help="Export sampled tasks as JSON")
    dump.add_argument("config", type=Path)
    dump.add_argument("--sigma", type=float, help="Variability (default: first grid value)")
    dump.add_argument("--count", type=int, default=5, help="Number of tasks")

    stability = commands.add_parser("stability", help="Estimate a safe meta step size")
    stability.add_argument("config", type=Path)
    stability.add_argument(
        "--sigma", type=float, help="Variability (default: first grid value)"
    )

    return parser


def _print_json(data: Any) -> None:
    print(json.dumps(data, indent=2, sort_keys=True))


def _output_dir(
    args: argparse.Namespace, settings: Settings, cfg: Optional[ExperimentConfig]
) -> Path:
    if args.output_dir is not None:
        return args.output_dir
    if settings.output_dir is not None:
        return settings.output_dir
    return Path(cfg.output_dir if cfg is not None else ".")


def cmd_validate(args: argparse.Namespace, settings: Settings) -> int:
    load_experiment(args.config)
    print("ok")
    return EXIT_OK


def cmd_run(args: argparse.Namespace, settings: Settings) -> int:
    cfg = load_experiment(args.config)
    sigma, n_train, seed_index = _parse_cell(args.cell)
    try:
        cell = cell_at(cfg, sigma, n_train, seed_index)
    except MetaBoundError as e:
        raise UsageError(str(e)) from e
    result = run_cell(cell, cfg)
    runlog_path = _output_dir(args, settings, cfg) / CELL_RUNLOG_FILE
    emit_csv(runlog_rows(result), SchemaId.RUNLOG, runlog_path)
    _print_json(result.to_dict())
    return EXIT_OK


def cmd_sweep(args: argparse.Namespace, settings: Settings) -> int:
    cfg = load_experiment(args.config)
    parallel = settings.parallel if settings.parallel_from_environment else args.parallel
    if parallel < 1:
        raise UsageError("--parallel must be at least 1")
    outcome = run_sweep(cfg, _output_dir(args, settings, cfg), parallel)
    _print_json(
        {
            "cells": len(outcome.results),
            "files": [str(path) for path in outcome.files],
            "fits": [record.to_dict() for record in outcome.fits],
        }
    )
    return EXIT_OK


def cmd_fit_bound(args: argparse.Namespace, settings: Settings) -> int:
    gap_rows = read_csv(args.gap_csv, SchemaId.GAPS)
    complexity_path = args.complexity_csv or args.gap_csv.parent / COMPLEXITY_FILE
    complexity_rows = read_csv(complexity_path, SchemaId.COMPLEXITY)
    by_sigma = {row["sigma"]: row["complexity"] for row in complexity_rows}

    records = fit_gap_rows(gap_rows, by_sigma)
    target = args.output_dir or settings.output_dir or args.gap_csv.parent
    write_fits(records, Path(target))
    _print_json({"fits": [record.to_dict() for record in records]})
    return EXIT_OK


def cmd_compare(args: argparse.Namespace, settings: Settings) -> int:
    cfg = load_experiment(args.config)
    if args.n_train is not None and args.n_train not in cfg.n_train_grid:
        raise UsageError(f"--n-train {args.n_train} is not in n_train_grid")
    _print_json({"comparison": compare_across_sigma(cfg, args.n_train)})
    return EXIT_OK


def _diagnose_runs(
    rows: Sequence[Dict[str, Any]], grad_tol: float, window: int
) -> List[Dict[str, Any]]:
    runs: Dict[Tuple[float, int, int], List[Dict[str, Any]]] = defaultdict(list)
    for row in rows:
        runs[(row["sigma"], row["n_train"], row["seed_index"])].append(row)

    reports = []
    for (sigma, n_train, seed_index), entries in sorted(runs.items()):
        entries.sort(key=lambda row: row["iteration"])
        state = MetaState.from_histories(
            [row["meta_loss"] for row in entries], [row["grad_norm"] for row in entries]
        )
        if state.iteration < window:
            report = ConvergenceReport.unavailable(window)
        else:
            report = convergence_diagnostics(state, grad_tol, window)
        reports.append(
            {"sigma": sigma, "n_train": n_train, "seed_index": seed_index, **report.to_dict()}
        )
    return reports


def cmd_diagnose(args: argparse.Namespace, settings: Settings) -> int:
    if args.window < 2:
        raise UsageError("--window must be at least 2")
    if args.grad_tol <= 0:
        raise UsageError("--grad-tol must be positive")
    rows = read_csv(args.runlog_csv, SchemaId.RUNLOG)
    _print_json({"runs": _diagnose_runs(rows, args.grad_tol, args.window)})
    return EXIT_OK


def cmd_dump_tasks(args: argparse.Namespace, settings: Settings) -> int:
    cfg = load_experiment(args.config)
    if args.count < 1:
        raise UsageError("--count must be at least 1")
    sigma = args.sigma if args.sigma is not None else cfg.sigma_grid[0]
    family = cfg.family.with_sigma(sigma)
    tasks = sample_task_set(family, range(args.count), TaskRole.TRAIN)
    path = write_json(tasks.to_dict(), _output_dir(args, settings, cfg) / TASKS_FILE)
    print(path)
    return EXIT_OK


def cmd_stability(args: argparse.Namespace, settings: Settings) -> int:
    cfg = load_experiment(args.config)
    sigma = args.sigma if args.sigma is not None else cfg.sigma_grid[0]
    train, _ = make_split(cfg.family.with_sigma(sigma), min(cfg.n_train_grid), 1)
    params = PolicyParams.zeros(cfg.family.n_states, cfg.family.n_actions)
    estimate = estimate_smoothness(train.mdps, params, seed=cfg.master_seed)
    verdict = validate_schedule(cfg.meta.schedule)
    _print_json(
        {
            "sigma": sigma,
            "lipschitz": estimate.lipschitz,
            "safe_rate": estimate.safe_rate,
            "base_rate": cfg.meta.schedule.base_rate,
            "first_step_safe": estimate.admits(cfg.meta.schedule),
            "schedule_valid": verdict.valid,
            "schedule_reasons": verdict.reasons,
        }
    )
    return EXIT_OK


COMMANDS = {
    "validate": cmd_validate,
    "run": cmd_run,
    "sweep": cmd_sweep,
    "fit-bound": cmd_fit_bound,
    "compare": cmd_compare,
    "diagnose": cmd_diagnose,
    "dump-tasks": cmd_dump_tasks,
    "stability": cmd_stability,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Run one command and return its exit status."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE

    setup_logging(debug=args.debug, quiet=args.quiet)
    logger = structlog.get_logger()

    try:
        settings = load_settings()
        if not (args.debug or args.quiet):
            setup_logging(debug=settings.debug, level_name=settings.log_level)
        logger.debug("Running command", command=args.command, version=__version__)
        return COMMANDS[args.command](args, settings)
    except (UsageError, ConfigurationError) as e:
        logger.error("Invalid input", command=args.command, error=str(e))
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except MetaBoundError as e:
        logger.error(
            "Command failed", command=args.command, error=str(e), error_type=type(e).__name__
        )
        print(f"error: {e}", file=sys.stderr)
        return EXIT_RUNTIME


def run() -> None:
    """Synchronous entry point for the console script."""
    try:
        sys.exit(main())
    except KeyboardInterrupt:
        print("\nInterrupted by user", file=sys.stderr)
        sys.exit(EXIT_RUNTIME)


if __name__ == "__main__":
    run()
