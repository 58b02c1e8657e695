"""Smoothness estimates for choosing a stable meta step size."""

from dataclasses import dataclass
from typing import Sequence

import numpy as np
import structlog

from ..exceptions import InsufficientDataError, InvalidArgumentError
from ..mdp.gradients import hessian_vector_product
from ..mdp.models import Mdp, PolicyParams
from ..utils.constants import DEFAULT_HVP_STEP
from ..utils.seeding import stream
from .config import StepSchedule

logger = structlog.get_logger()


@dataclass(frozen=True)
class SmoothnessEstimate:
    """Power-iteration estimate of the loss curvature."""

    lipschitz: float
    safe_rate: float
    n_iters: int

    def admits(self, schedule: StepSchedule) -> bool:
        """True when the schedule's first step stays below 1 / L."""
        return schedule.base_rate <= self.safe_rate


def _mean_hvp(tasks: Sequence[Mdp], params: PolicyParams, vector: np.ndarray) -> np.ndarray:
    products = [hessian_vector_product(mdp, params, vector, DEFAULT_HVP_STEP) for mdp in tasks]
    return np.mean(np.stack(products), axis=0)


def estimate_smoothness(
    tasks: Sequence[Mdp], params: PolicyParams, n_iters: int = 30, seed: int = 0
) -> SmoothnessEstimate:
    """Largest absolute Hessian eigenvalue of the mean task loss at ``params``.

    Args:
        tasks: MDPs whose mean loss is probed
        params: Point of evaluation
        n_iters: Power-iteration steps
        seed: Seed of the random start direction

    Returns:
        Estimate with L and the step size 1 / L (inf for a flat loss).
    """
    if not tasks:
        raise InsufficientDataError("smoothness estimate needs at least one task")
    if n_iters < 1:
        raise InvalidArgumentError("n_iters must be at least 1")

    direction = stream(seed).standard_normal(params.shape)
    direction /= np.linalg.norm(direction)
    lipschitz = 0.0
    for _ in range(n_iters):
        product = _mean_hvp(tasks, params, direction)
        lipschitz = float(np.linalg.norm(product))
        if lipschitz == 0.0:
            break
        direction = product / lipschitz

    safe_rate = 1.0 / lipschitz if lipschitz > 0 else float("inf")
    logger.debug("Estimated loss smoothness", lipschitz=lipschitz, safe_rate=safe_rate)
    return SmoothnessEstimate(lipschitz=lipschitz, safe_rate=safe_rate, n_iters=n_iters)
