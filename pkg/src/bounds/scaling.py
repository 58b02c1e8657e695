"""Power-law fits of the generalization gap against the number of training tasks."""

from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Sequence, Tuple

import numpy as np
import structlog

from ..exceptions import InsufficientDataError, InvalidArgumentError
from ..utils.constants import GAP_FLOOR, MIN_FIT_POINTS
from ..utils.numerics import linear_fit

logger = structlog.get_logger()


@dataclass(frozen=True)
class GridPoint:
    """Gap statistics over seeds at one training-set size."""

    n_train: int
    mean_gap: float
    std_gap: float
    n_seeds: int


@dataclass
class BoundFit:
    """log(mean_gap) = intercept + exponent * log(N), plus the bound-shape constant."""

    grid: List[GridPoint] = field(default_factory=list)
    fitted_exponent: float = float("nan")
    fitted_intercept: float = float("nan")
    r_squared: float = 0.0
    constant_k: float = 0.0
    complexity: float = 0.0

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def bound_shape(n_train: np.ndarray, complexity: float) -> np.ndarray:
    """sqrt(C ln N / N)."""
    n = np.asarray(n_train, dtype=float)
    return np.sqrt(complexity * np.log(n) / n)


def fit_bound_scaling(
    grid_rows: Sequence[Tuple[int, Sequence[float]]], complexity: float
) -> BoundFit:
    """Fit the gap scaling law over a grid of training-set sizes.

    Args:
        grid_rows: (N, gap values over seeds) per grid point
        complexity: Measured task-distribution complexity

    Returns:
        Fit over the grid sorted by N. Mean gaps are floored at 1e-9.

    Raises:
        InsufficientDataError: fewer than 3 distinct N.
        InvalidArgumentError: repeated N or an empty gap list.
    """
    sizes = [int(n) for n, _ in grid_rows]
    if len(set(sizes)) != len(sizes):
        raise InvalidArgumentError("grid contains repeated training-set sizes")
    if len(sizes) < MIN_FIT_POINTS:
        raise InsufficientDataError(
            f"fit needs at least {MIN_FIT_POINTS} distinct N, got {len(sizes)}"
        )

    points: List[GridPoint] = []
    for n, gaps in sorted(grid_rows, key=lambda row: int(row[0])):
        values = np.asarray(gaps, dtype=float)
        if values.size == 0:
            raise InvalidArgumentError(f"no gap values at N={n}")
        std = float(np.std(values, ddof=1)) if values.size > 1 else 0.0
        points.append(
            GridPoint(
                n_train=int(n),
                mean_gap=max(float(values.mean()), GAP_FLOOR),
                std_gap=std,
                n_seeds=int(values.size),
            )
        )

    n_values = np.array([p.n_train for p in points], dtype=float)
    mean_gaps = np.array([p.mean_gap for p in points])
    exponent, intercept, r2 = linear_fit(np.log(n_values), np.log(mean_gaps))

    shape = bound_shape(n_values, complexity)
    denominator = float(shape @ shape)
    constant_k = float(mean_gaps @ shape) / denominator if denominator > 0 else 0.0

    logger.debug(
        "Fitted bound scaling",
        n_points=len(points),
        exponent=exponent,
        r_squared=r2,
        constant_k=constant_k,
    )
    return BoundFit(
        grid=points,
        fitted_exponent=exponent,
        fitted_intercept=intercept,
        r_squared=r2,
        constant_k=constant_k,
        complexity=float(complexity),
    )
