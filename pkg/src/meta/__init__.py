"""Meta-learning: MAML-style training, schedules and convergence checks."""

from .config import MetaConfig, MetaMode, StepSchedule
from .diagnostics import ConvergenceReport, RateClass, classify_rate, convergence_diagnostics
from .learner import MetaState, adapt, meta_gradient, meta_loss, meta_train
from .schedule import ScheduleVerdict, step_size, validate_schedule
from .stability import SmoothnessEstimate, estimate_smoothness

__all__ = [
    "MetaConfig",
    "MetaMode",
    "StepSchedule",
    "MetaState",
    "ConvergenceReport",
    "RateClass",
    "ScheduleVerdict",
    "SmoothnessEstimate",
    "adapt",
    "meta_loss",
    "meta_gradient",
    "meta_train",
    "step_size",
    "validate_schedule",
    "classify_rate",
    "convergence_diagnostics",
    "estimate_smoothness",
]
