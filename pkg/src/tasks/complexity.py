"""Empirical proxies for task-distribution complexity."""

from dataclasses import dataclass

import numpy as np
import structlog

from ..exceptions import InsufficientDataError
from ..mdp.evaluation import optimal_return
from ..utils.constants import DEFAULT_VALUE_TOL
from .sampling import TaskSet

logger = structlog.get_logger()


@dataclass(frozen=True)
class ComplexityEstimate:
    """Spread of optimal returns and of dynamics across a task set."""

    optimal_return_std: float
    mean_transition_divergence: float
    n_tasks_used: int

    def proxy(self, name: str) -> float:
        """Scalar complexity by proxy name."""
        if name == "optimal_return_std":
            return self.optimal_return_std
        if name == "transition_divergence":
            return self.mean_transition_divergence
        raise ValueError(f"unknown complexity proxy: {name}")


def estimate_complexity(tasks: TaskSet) -> ComplexityEstimate:
    """Optimal-return standard deviation and mean pairwise transition distance."""
    n = len(tasks)
    if n < 2:
        raise InsufficientDataError(f"complexity needs at least 2 tasks, got {n}")

    returns = np.array([optimal_return(mdp, DEFAULT_VALUE_TOL) for mdp in tasks.mdps])
    return_std = float(np.std(returns, ddof=1))

    mdps = tasks.mdps
    n_states, n_actions = mdps[0].shape
    flat = np.stack([mdp.transitions.ravel() for mdp in mdps])
    pair_total = 0.0
    for i in range(n - 1):
        pair_total += float(np.abs(flat[i + 1 :] - flat[i]).sum())
    n_pairs = n * (n - 1) / 2
    divergence = pair_total / (n_pairs * n_states * n_actions)

    logger.debug(
        "Estimated task complexity",
        n_tasks=n,
        optimal_return_std=return_std,
        transition_divergence=divergence,
    )
    return ComplexityEstimate(
        optimal_return_std=return_std,
        mean_transition_divergence=divergence,
        n_tasks_used=n,
    )
