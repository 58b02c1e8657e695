"""Convergence diagnostics for meta-training histories.

Rates are classified by fitting the loss curve against three models:

- superlinear: log e_{t+1} linear in log e_t with order >= 1.5
- linear: log(loss - floor) linear in t
- sublinear: log(loss - floor) linear in log t

The floor is searched below the smallest observed loss so a curve that
has not yet reached its limit is not biased towards any model.
"""

from dataclasses import asdict, dataclass
from enum import Enum
from typing import Any, Dict, Optional, Tuple

import numpy as np
import structlog
from scipy import optimize

from ..exceptions import InsufficientDataError, InvalidArgumentError
from ..utils.constants import (
    FIT_R_SQUARED_THRESHOLD,
    FLOOR_SEARCH_GRID_POINTS,
    FLOOR_SEARCH_LOG_OFFSETS,
    SUPERLINEAR_ORDER_THRESHOLD,
)
from ..utils.numerics import linear_fit
from .learner import MetaState

logger = structlog.get_logger()

MIN_RATE_POINTS = 3


class RateClass(str, Enum):
    """Empirical convergence-rate class."""

    SUBLINEAR = "sublinear"
    LINEAR = "linear"
    SUPERLINEAR = "superlinear"
    UNDETERMINED = "undetermined"


@dataclass(frozen=True)
class ConvergenceReport:
    """Stationarity and rate summary of one training run."""

    converged: bool
    rate_class: RateClass
    fitted_rate: float
    window: int
    final_grad_norm: float
    r_squared: float
    iterations_to_tol: Optional[int]

    @classmethod
    def unavailable(cls, window: int) -> "ConvergenceReport":
        """Report for a history too short to diagnose."""
        return cls(
            converged=False,
            rate_class=RateClass.UNDETERMINED,
            fitted_rate=float("nan"),
            window=window,
            final_grad_norm=float("nan"),
            r_squared=0.0,
            iterations_to_tol=None,
        )

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["rate_class"] = self.rate_class.value
        return data


def _order_fit(loss: np.ndarray) -> Optional[Tuple[float, float]]:
    """Slope and R^2 of log e_{t+1} against log e_t, e = loss - min(loss)."""
    errors = loss - loss.min()
    xs, ys = [], []
    for t in range(len(errors) - 1):
        if errors[t] > 0 and errors[t + 1] > 0:
            xs.append(np.log(errors[t]))
            ys.append(np.log(errors[t + 1]))
    if len(xs) < MIN_RATE_POINTS:
        return None
    slope, _, r2 = linear_fit(xs, ys)
    return slope, r2


def _floor_fit(x: np.ndarray, loss: np.ndarray) -> Tuple[float, float]:
    """Best slope and R^2 of log(loss - floor) against x over candidate floors."""
    lowest = float(loss.min())
    span = float(loss.max()) - lowest

    def fit_at(log_offset: float) -> Tuple[float, float]:
        floor = lowest - span * np.exp(log_offset)
        slope, _, r2 = linear_fit(x, np.log(loss - floor))
        return slope, r2

    grid = np.linspace(*FLOOR_SEARCH_LOG_OFFSETS, FLOOR_SEARCH_GRID_POINTS)
    scores = [fit_at(u)[1] for u in grid]
    best = int(np.argmax(scores))
    lo = grid[max(best - 1, 0)]
    hi = grid[min(best + 1, len(grid) - 1)]
    refined = optimize.minimize_scalar(
        lambda u: -fit_at(u)[1], bounds=(lo, hi), method="bounded", options={"xatol": 1e-10}
    )
    if refined.success and -refined.fun >= scores[best]:
        return fit_at(float(refined.x))
    return fit_at(float(grid[best]))


def classify_rate(losses) -> Tuple[RateClass, float, float]:
    """Classify a loss curve.

    Returns:
        (rate_class, fitted_rate, r_squared). The fitted rate is the order q
        for superlinear curves and the log-slope otherwise; NaN when
        undetermined.
    """
    loss = np.asarray(losses, dtype=float)
    if len(loss) < MIN_RATE_POINTS or not np.all(np.isfinite(loss)):
        return RateClass.UNDETERMINED, float("nan"), 0.0
    if float(loss.max() - loss.min()) == 0.0:
        return RateClass.UNDETERMINED, float("nan"), 0.0

    order = _order_fit(loss)
    if (
        order is not None
        and order[0] >= SUPERLINEAR_ORDER_THRESHOLD
        and order[1] >= FIT_R_SQUARED_THRESHOLD
    ):
        return RateClass.SUPERLINEAR, order[0], order[1]

    t = np.arange(1, len(loss) + 1, dtype=float)
    fits = [
        (RateClass.LINEAR, *_floor_fit(t, loss)),
        (RateClass.SUBLINEAR, *_floor_fit(np.log(t), loss)),
    ]
    accepted = [f for f in fits if f[1] < 0 and f[2] >= FIT_R_SQUARED_THRESHOLD]
    if not accepted:
        best_r2 = max(f[2] for f in fits)
        return RateClass.UNDETERMINED, float("nan"), best_r2

    # ties go to the linear model
    winner = max(accepted, key=lambda f: f[2])
    return winner


def _iterations_to_tol(norms: np.ndarray, grad_tol: float, window: int) -> Optional[int]:
    kernel = np.ones(window) / window
    windowed = np.convolve(norms, kernel, mode="valid")
    below = np.nonzero(windowed < grad_tol)[0]
    if below.size == 0:
        return None
    return int(below[0]) + window


def convergence_diagnostics(
    state: MetaState, grad_tol: float, window: int
) -> ConvergenceReport:
    """Summarize stationarity and the empirical rate of a run.

    Raises:
        InvalidArgumentError: window < 2 or grad_tol <= 0.
        InsufficientDataError: history shorter than the window.
    """
    if window < 2:
        raise InvalidArgumentError("window must be at least 2")
    if grad_tol <= 0:
        raise InvalidArgumentError("grad_tol must be positive")
    norms = np.asarray(state.grad_norm_history, dtype=float)
    if len(norms) < window:
        raise InsufficientDataError(
            f"history of {len(norms)} iterations is shorter than window {window}"
        )

    final = float(np.mean(norms[-window:]))
    rate_class, rate, r2 = classify_rate(state.loss_history)
    report = ConvergenceReport(
        converged=final < grad_tol,
        rate_class=rate_class,
        fitted_rate=float(rate),
        window=window,
        final_grad_norm=final,
        r_squared=float(r2),
        iterations_to_tol=_iterations_to_tol(norms, grad_tol, window),
    )
    logger.debug(
        "Convergence diagnosed",
        rate_class=rate_class.value,
        fitted_rate=report.fitted_rate,
        converged=report.converged,
    )
    return report
