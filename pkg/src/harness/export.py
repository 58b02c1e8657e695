"""Canonical CSV and JSON result files.

Features:
- Fixed column order per schema
- Rows sorted by cell coordinates
- Shortest round-trip rendering of reals
- UTF-8, LF line endings, typed re-reading
"""

import csv
import json
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import structlog

from ..exceptions import ExportError, InvalidArgumentError

logger = structlog.get_logger()


def _render(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, Enum):
        return str(value.value)
    return str(value)


def _optional_int(text: str) -> Optional[int]:
    return None if text == "" else int(text)


def _optional_float(text: str) -> Optional[float]:
    return None if text == "" else float(text)


@dataclass(frozen=True)
class Schema:
    """Column names, their parsers and the sort key of one result file."""

    schema_id: str
    columns: Tuple[Tuple[str, Callable[[str], Any]], ...]
    sort_by: Tuple[str, ...]

    @property
    def header(self) -> List[str]:
        return [name for name, _ in self.columns]

    def parse_row(self, raw: Dict[str, str]) -> Dict[str, Any]:
        return {name: parse(raw[name]) for name, parse in self.columns}


class SchemaId(str, Enum):
    """Result files the harness writes."""

    GAPS = "gaps"
    COMPARISON = "comparison"
    RUNLOG = "runlog"
    COMPLEXITY = "complexity"
    FITS = "fits"


SCHEMAS: Dict[SchemaId, Schema] = {
    SchemaId.GAPS: Schema(
        "gaps",
        (
            ("family", str),
            ("sigma", float),
            ("n_train", int),
            ("seed_index", int),
            ("derived_seed", int),
            ("mean_train_return", float),
            ("mean_test_return", float),
            ("epsilon_gen_signed", float),
            ("epsilon_gen_abs", float),
            ("hoeffding_radius_test", float),
            ("subopt_gap", float),
            ("meta_iters", int),
            ("final_grad_norm", float),
            ("rate_class", str),
            ("meta_win_fraction", float),
        ),
        ("sigma", "n_train", "seed_index"),
    ),
    SchemaId.COMPARISON: Schema(
        "comparison",
        (
            ("sigma", float),
            ("n_train", int),
            ("seed_index", int),
            ("task_index", int),
            ("final_return_meta", float),
            ("final_return_scratch", float),
            ("steps_to_target_meta", _optional_int),
            ("steps_to_target_scratch", _optional_int),
            ("target_fraction", float),
        ),
        ("sigma", "n_train", "seed_index", "task_index"),
    ),
    SchemaId.RUNLOG: Schema(
        "runlog",
        (
            ("sigma", float),
            ("n_train", int),
            ("seed_index", int),
            ("iteration", int),
            ("meta_loss", float),
            ("grad_norm", float),
        ),
        ("sigma", "n_train", "seed_index", "iteration"),
    ),
    SchemaId.COMPLEXITY: Schema(
        "complexity",
        (
            ("sigma", float),
            ("optimal_return_std", float),
            ("mean_transition_divergence", float),
            ("n_tasks_used", int),
            ("complexity", float),
        ),
        ("sigma",),
    ),
    SchemaId.FITS: Schema(
        "fits",
        (
            ("sigma", float),
            ("complexity", _optional_float),
            ("fitted_exponent", _optional_float),
            ("fitted_intercept", _optional_float),
            ("r_squared", _optional_float),
            ("constant_k", _optional_float),
            ("n_points", int),
            ("status", str),
        ),
        ("sigma",),
    ),
}


def emit_csv(rows: Iterable[Dict[str, Any]], schema_id: SchemaId, path: Path) -> Path:
    """Write rows under the schema's header, sorted by its key columns.

    Raises:
        InvalidArgumentError: a row lacks a schema column.
        ExportError: the file could not be written.
    """
    schema = SCHEMAS[SchemaId(schema_id)]
    header = schema.header
    ordered = list(rows)
    for row in ordered:
        missing = [name for name in header if name not in row]
        if missing:
            raise InvalidArgumentError(
                f"{schema.schema_id} row missing columns: {', '.join(missing)}"
            )
    ordered.sort(key=lambda row: tuple(row[key] for key in schema.sort_by))

    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", encoding="utf-8", newline="") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(header)
            for row in ordered:
                writer.writerow([_render(row[name]) for name in header])
    except OSError as e:
        raise ExportError(f"cannot write {path}: {e}", str(path)) from e

    logger.debug("Wrote CSV", schema=schema.schema_id, path=str(path), rows=len(ordered))
    return path


def read_csv(path: Path, schema_id: SchemaId) -> List[Dict[str, Any]]:
    """Typed rows of a file written by ``emit_csv``.

    Raises:
        ExportError: unreadable file, wrong header or unparsable value.
    """
    schema = SCHEMAS[SchemaId(schema_id)]
    path = Path(path)
    try:
        with path.open("r", encoding="utf-8", newline="") as handle:
            reader = csv.DictReader(handle)
            if reader.fieldnames != schema.header:
                raise ExportError(
                    f"{path} does not have the {schema.schema_id} header", str(path)
                )
            return [schema.parse_row(raw) for raw in reader]
    except OSError as e:
        raise ExportError(f"cannot read {path}: {e}", str(path)) from e
    except (KeyError, ValueError) as e:
        raise ExportError(f"malformed {schema.schema_id} row in {path}: {e}", str(path)) from e


def write_json(data: Any, path: Path) -> Path:
    """Write a JSON document with sorted keys and a trailing newline."""
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        text = json.dumps(data, indent=2, sort_keys=True)
        path.write_text(text + "\n", encoding="utf-8", newline="\n")
    except (OSError, TypeError, ValueError) as e:
        raise ExportError(f"cannot write {path}: {e}", str(path)) from e
    logger.debug("Wrote JSON", path=str(path))
    return path


def remove_files(paths: Sequence[Path]) -> None:
    """Delete result files, ignoring ones that do not exist."""
    for path in paths:
        try:
            Path(path).unlink()
            logger.info("Removed partial result file", path=str(path))
        except FileNotFoundError:
            continue
        except OSError as e:
            logger.warning(
                "Could not remove partial result file", path=str(path), error=str(e)
            )
