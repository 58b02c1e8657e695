"""Per-task policy-gradient learners used as the non-meta baseline."""

from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional

import numpy as np
import structlog

from ..exceptions import DivergenceError, InvalidArgumentError
from ..mdp.evaluation import exact_policy_return
from ..mdp.gradients import exact_policy_gradient
from ..mdp.models import Mdp, PolicyParams

logger = structlog.get_logger()


class CurveOrigin(str, Enum):
    """Initialization a learning curve started from."""

    META_INIT = "meta_init"
    SCRATCH_INIT = "scratch_init"


@dataclass
class LearningCurve:
    """Exact return after each gradient step; entry 0 is the initial return."""

    returns: List[float] = field(default_factory=list)
    task_index: int = 0
    origin: CurveOrigin = CurveOrigin.SCRATCH_INIT

    @property
    def steps(self) -> int:
        return len(self.returns) - 1

    @property
    def final_return(self) -> float:
        return self.returns[-1]


def scratch_train(
    task: Mdp,
    init: Optional[PolicyParams],
    lr: float,
    steps: int,
    task_index: int = 0,
    origin: CurveOrigin = CurveOrigin.SCRATCH_INIT,
) -> LearningCurve:
    """Exact gradient descent on the task loss, recording the return per step.

    Args:
        task: MDP to learn
        init: Starting parameters (zero logits when None)
        lr: Step size
        steps: Number of gradient steps

    Raises:
        DivergenceError: the return or parameters became non-finite.
    """
    if lr <= 0:
        raise InvalidArgumentError("lr must be positive")
    if steps < 0:
        raise InvalidArgumentError("steps must be non-negative")

    params = init if init is not None else PolicyParams.zeros(*task.shape)
    curve = LearningCurve(task_index=task_index, origin=origin)
    for step in range(steps + 1):
        value = exact_policy_return(task, params).return_value
        if not np.isfinite(value):
            raise DivergenceError(f"non-finite return at step {step}", step)
        curve.returns.append(value)
        if step == steps:
            break
        logits = params.logits + lr * exact_policy_gradient(task, params)
        if not np.all(np.isfinite(logits)):
            raise DivergenceError(f"non-finite logits after step {step}", step)
        params = PolicyParams(logits)

    return curve


def steps_to_target(curve: LearningCurve, target: float) -> Optional[int]:
    """First step whose return reaches ``target``, or None."""
    for index, value in enumerate(curve.returns):
        if value >= target:
            return index
    return None
