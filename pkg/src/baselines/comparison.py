"""Meta-initialized versus from-scratch adaptation on held-out tasks."""

from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np
import structlog

from ..exceptions import InvalidArgumentError
from ..mdp.evaluation import optimal_return
from ..mdp.models import PolicyParams
from ..tasks.sampling import TaskSet
from ..utils.constants import DEFAULT_VALUE_TOL
from .scratch import CurveOrigin, scratch_train, steps_to_target

logger = structlog.get_logger()


@dataclass(frozen=True)
class TaskComparison:
    """Outcome of both learners on one test task."""

    task_index: int
    final_return_meta: float
    final_return_scratch: float
    steps_to_target_meta: Optional[int]
    steps_to_target_scratch: Optional[int]
    target: float

    @property
    def meta_score(self) -> float:
        """1 for a meta win, 0.5 for a tie, 0 for a loss."""
        if self.final_return_meta > self.final_return_scratch:
            return 1.0
        if self.final_return_meta == self.final_return_scratch:
            return 0.5
        return 0.0


@dataclass
class ComparisonReport:
    """Per-task comparison rows and the aggregate win fraction."""

    per_task: List[TaskComparison] = field(default_factory=list)
    meta_win_fraction: float = 0.5
    target_fraction: float = 0.9
    budget: int = 1

    def median_steps_to_target(self, origin: CurveOrigin) -> float:
        """Median steps to target; tasks that never reach it count as budget + 1."""
        if not self.per_task:
            return float("nan")
        steps = [
            row.steps_to_target_meta
            if origin is CurveOrigin.META_INIT
            else row.steps_to_target_scratch
            for row in self.per_task
        ]
        return float(np.median([self.budget + 1 if s is None else s for s in steps]))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "per_task": [asdict(row) for row in self.per_task],
            "meta_win_fraction": self.meta_win_fraction,
            "target_fraction": self.target_fraction,
            "budget": self.budget,
        }


def compare_meta_vs_scratch(
    meta_params: PolicyParams,
    test: TaskSet,
    lr: float,
    budget: int,
    target_fraction: float,
) -> ComparisonReport:
    """Run both learners with equal step size and budget on every test task."""
    if budget < 1:
        raise InvalidArgumentError("budget must be at least 1")
    if not 0.0 < target_fraction <= 1.0:
        raise InvalidArgumentError("target_fraction must lie in (0, 1]")

    rows: List[TaskComparison] = []
    for task_index, mdp in zip(test.indices, test.mdps):
        target = target_fraction * optimal_return(mdp, DEFAULT_VALUE_TOL)
        meta_curve = scratch_train(
            mdp, meta_params, lr, budget, task_index, CurveOrigin.META_INIT
        )
        scratch_curve = scratch_train(
            mdp, None, lr, budget, task_index, CurveOrigin.SCRATCH_INIT
        )
        rows.append(
            TaskComparison(
                task_index=task_index,
                final_return_meta=meta_curve.final_return,
                final_return_scratch=scratch_curve.final_return,
                steps_to_target_meta=steps_to_target(meta_curve, target),
                steps_to_target_scratch=steps_to_target(scratch_curve, target),
                target=target,
            )
        )

    rows.sort(key=lambda row: row.task_index)
    win_fraction = float(np.mean([row.meta_score for row in rows])) if rows else 0.5
    logger.debug(
        "Compared meta and scratch adaptation",
        n_tasks=len(rows),
        meta_win_fraction=win_fraction,
    )
    return ComparisonReport(
        per_task=rows,
        meta_win_fraction=win_fraction,
        target_fraction=target_fraction,
        budget=budget,
    )
