"""Generalization and suboptimality gaps of a meta-policy."""

from dataclasses import asdict, dataclass
from typing import Any, Callable, Dict, Optional, Sequence, Tuple

import numpy as np
import structlog

from ..exceptions import InsufficientDataError
from ..mdp.evaluation import deterministic_policy_return, exact_policy_return, value_iteration
from ..mdp.models import Mdp, PolicyParams
from ..tasks.sampling import TaskSet
from ..utils.constants import DEFAULT_CONFIDENCE, DEFAULT_VALUE_TOL
from .concentration import hoeffding_radius

logger = structlog.get_logger()


@dataclass(frozen=True)
class GapContext:
    """Where a pair of return lists came from."""

    sigma: float
    seed: int
    reward_range: Tuple[float, float]
    discount: float
    confidence: float = DEFAULT_CONFIDENCE

    @property
    def return_range_width(self) -> float:
        low, high = self.reward_range
        return (high - low) / (1.0 - self.discount)


@dataclass(frozen=True)
class GapReport:
    """Train/test returns and the signed generalization gap (test minus train)."""

    n_train: int
    n_test: int
    mean_train_return: float
    mean_test_return: float
    epsilon_gen_signed: float
    epsilon_gen_abs: float
    hoeffding_radius_test: float
    confidence: float
    sigma: float
    seed: int

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def generalization_gap(
    train_returns: Sequence[float], test_returns: Sequence[float], context: GapContext
) -> GapReport:
    """Signed gap mean(test) - mean(train) with a Hoeffding radius on the test mean.

    Raises:
        InsufficientDataError: either list is empty.
    """
    train = np.asarray(train_returns, dtype=float)
    test = np.asarray(test_returns, dtype=float)
    if train.size == 0 or test.size == 0:
        raise InsufficientDataError("generalization gap needs train and test returns")

    # sorted sums keep the means independent of list order
    mean_train = float(np.sort(train).mean())
    mean_test = float(np.sort(test).mean())
    signed = mean_test - mean_train
    radius = hoeffding_radius(test.size, context.return_range_width, context.confidence)
    return GapReport(
        n_train=int(train.size),
        n_test=int(test.size),
        mean_train_return=mean_train,
        mean_test_return=mean_test,
        epsilon_gen_signed=signed,
        epsilon_gen_abs=abs(signed),
        hoeffding_radius_test=radius,
        confidence=context.confidence,
        sigma=context.sigma,
        seed=context.seed,
    )


Adaptation = Callable[[Mdp, PolicyParams], PolicyParams]


def suboptimality_gap(
    tasks: TaskSet, params: PolicyParams, adaptation: Optional[Adaptation] = None
) -> float:
    """Mean of L(pi*) - L(pi_hat) over the tasks; never positive.

    pi_hat is ``adaptation(task, params)`` when an adaptation is given and
    ``params`` otherwise. The regret is the negation of this value.
    """
    if len(tasks) == 0:
        raise InsufficientDataError("suboptimality gap needs at least one task")

    differences = []
    for mdp in tasks.mdps:
        greedy = value_iteration(mdp, DEFAULT_VALUE_TOL).greedy_actions
        optimal_loss = deterministic_policy_return(mdp, greedy).loss_value
        deployed = adaptation(mdp, params) if adaptation is not None else params
        policy_loss = exact_policy_return(mdp, deployed).loss_value
        differences.append(optimal_loss - policy_loss)

    gap = float(np.mean(differences))
    logger.debug("Computed suboptimality gap", n_tasks=len(tasks), gap=gap)
    return gap
