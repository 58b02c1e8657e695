"""Step-size schedules and the Robbins-Monro conditions."""

from dataclasses import dataclass, field
from typing import List

from ..exceptions import InvalidArgumentError
from .config import StepSchedule

SQUARES_NOT_SUMMABLE = "squared rates not summable"
RATES_SUMMABLE = "rates summable (insufficient total step)"


@dataclass
class ScheduleVerdict:
    """Whether a schedule satisfies both Robbins-Monro conditions."""

    valid: bool
    reasons: List[str] = field(default_factory=list)


def step_size(schedule: StepSchedule, iteration: int) -> float:
    """Rate used at 0-based iteration t: c / (t + 1)^p."""
    return schedule.base_rate / float(iteration + 1) ** schedule.exponent


def validate_schedule(schedule: StepSchedule) -> ScheduleVerdict:
    """Check sum(rates) = inf and sum(rates^2) < inf for c / (t + 1)^p.

    Both hold exactly when 0.5 < p <= 1.
    """
    if schedule.base_rate <= 0 or schedule.exponent < 0:
        raise InvalidArgumentError("schedule needs c > 0 and p >= 0")

    p = schedule.exponent
    reasons: List[str] = []
    if p <= 0.5:
        reasons.append(SQUARES_NOT_SUMMABLE)
    if p > 1.0:
        reasons.append(RATES_SUMMABLE)
    return ScheduleVerdict(valid=not reasons, reasons=reasons)
