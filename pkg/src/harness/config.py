"""Experiment documents: strict JSON parsing and grid validation."""

import json
from enum import Enum
from pathlib import Path
from typing import List

import structlog
from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    ValidationError,
    field_validator,
    model_validator,
)

from ..exceptions import InvalidConfigError, MissingConfigError
from ..meta.config import MetaConfig
from ..tasks.family import TaskFamilySpec
from ..utils.constants import (
    COMPLEXITY_TASKS,
    DEFAULT_CONFIDENCE,
    DEFAULT_N_SEEDS,
    DEFAULT_N_TEST,
    DEFAULT_OUTPUT_DIR,
    DEFAULT_RADEMACHER_DRAWS,
    DEFAULT_TARGET_FRACTION,
)

logger = structlog.get_logger()


class ComplexityProxy(str, Enum):
    """Scalar complexity fed to the scaling fit."""

    TRANSITION_DIVERGENCE = "transition_divergence"
    OPTIMAL_RETURN_STD = "optimal_return_std"


class ComparisonSettings(BaseModel):
    """Budget of the meta-versus-scratch comparison."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    lr: float = Field(0.5, gt=0.0, description="Step size of both learners")
    budget: int = Field(5, ge=1, description="Gradient steps per test task")
    target_fraction: float = Field(
        DEFAULT_TARGET_FRACTION, gt=0.0, le=1.0, description="Target as fraction of optimum"
    )


def _check_grid(values: List, name: str) -> List:
    if not values:
        raise ValueError(f"{name} must not be empty")
    if len(set(values)) != len(values):
        raise ValueError(f"{name} contains duplicate values")
    if any(b < a for a, b in zip(values, values[1:])):
        raise ValueError(f"{name} must be ascending")
    return values


class ExperimentConfig(BaseModel):
    """N x sigma x seed experimental design."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    family: TaskFamilySpec = Field(default_factory=TaskFamilySpec)
    meta: MetaConfig = Field(default_factory=MetaConfig)
    n_train_grid: List[int] = Field(..., description="Training-set sizes N")
    sigma_grid: List[float] = Field(..., description="Variability levels")
    n_test: int = Field(DEFAULT_N_TEST, ge=1, description="Held-out tasks per cell")
    n_seeds: int = Field(DEFAULT_N_SEEDS, ge=1, description="Replicates per (sigma, N)")
    master_seed: int = Field(0, ge=0, lt=2**64, description="Root of every cell seed")
    comparison: ComparisonSettings = Field(default_factory=ComparisonSettings)
    output_dir: str = Field(DEFAULT_OUTPUT_DIR, description="Result directory")
    confidence: float = Field(DEFAULT_CONFIDENCE, gt=0.0, lt=1.0)
    complexity_tasks: int = Field(COMPLEXITY_TASKS, ge=2)
    complexity_proxy: ComplexityProxy = ComplexityProxy.TRANSITION_DIVERGENCE
    rademacher_draws: int = Field(DEFAULT_RADEMACHER_DRAWS, ge=1)

    @field_validator("n_train_grid")
    @classmethod
    def validate_n_train_grid(cls, v: List[int]) -> List[int]:
        if any(n < 1 for n in v):
            raise ValueError("n_train_grid entries must be at least 1")
        return _check_grid(v, "n_train_grid")

    @field_validator("sigma_grid")
    @classmethod
    def validate_sigma_grid(cls, v: List[float]) -> List[float]:
        if any(not 0.0 <= s <= 1.0 for s in v):
            raise ValueError("sigma_grid entries must lie in [0, 1]")
        return _check_grid(v, "sigma_grid")

    @model_validator(mode="after")
    def validate_meta_batch(self) -> "ExperimentConfig":
        """Every cell must be able to fill a meta-batch."""
        smallest = min(self.n_train_grid)
        if self.meta.meta_batch > smallest:
            raise ValueError(
                f"meta.meta_batch {self.meta.meta_batch} exceeds smallest N {smallest}"
            )
        return self


def _format_location(loc: tuple) -> str:
    return ".".join(str(part) for part in loc) or "<root>"


def parse_config(text: str) -> ExperimentConfig:
    """Parse and validate an experiment document.

    Raises:
        InvalidConfigError: malformed JSON, unknown field or invariant
            violation; the message names the field path.
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise InvalidConfigError(f"malformed JSON at line {e.lineno}: {e.msg}") from e
    if not isinstance(data, dict):
        raise InvalidConfigError("experiment document must be a JSON object")

    try:
        return ExperimentConfig.model_validate(data)
    except ValidationError as e:
        problems = []
        for error in e.errors():
            location = _format_location(tuple(error["loc"]))
            if error["type"] == "extra_forbidden":
                problems.append(f"{location}: unknown field")
            else:
                problems.append(f"{location}: {error['msg']}")
        raise InvalidConfigError("; ".join(problems)) from e


def load_experiment(path: Path) -> ExperimentConfig:
    """Read and parse an experiment document from disk."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except FileNotFoundError as e:
        raise MissingConfigError(f"config file not found: {path}") from e
    except OSError as e:
        raise InvalidConfigError(f"cannot read config {path}: {e}") from e
    config = parse_config(text)
    logger.info(
        "Loaded experiment config",
        path=str(path),
        cells=len(config.sigma_grid) * len(config.n_train_grid) * config.n_seeds,
    )
    return config
