"""From-scratch baselines and the adaptation-speed comparison."""

from .comparison import ComparisonReport, TaskComparison, compare_meta_vs_scratch
from .scratch import CurveOrigin, LearningCurve, scratch_train, steps_to_target

__all__ = [
    "CurveOrigin",
    "LearningCurve",
    "TaskComparison",
    "ComparisonReport",
    "scratch_train",
    "steps_to_target",
    "compare_meta_vs_scratch",
]
