"""Concentration intervals for sample means of bounded quantities."""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from ..exceptions import InsufficientDataError, InvalidArgumentError


class IntervalMethod(str, Enum):
    """Concentration inequality behind an interval."""

    HOEFFDING = "hoeffding"
    EMPIRICAL_BERNSTEIN = "empirical_bernstein"


@dataclass(frozen=True)
class ConcentrationInterval:
    """Sample mean with a two-sided radius at the given confidence."""

    center: float
    radius: float
    confidence: float
    method: IntervalMethod

    @property
    def lower(self) -> float:
        return self.center - self.radius

    @property
    def upper(self) -> float:
        return self.center + self.radius

    def contains(self, value: float) -> bool:
        return self.lower <= value <= self.upper


def _check_confidence(confidence: float) -> None:
    if not 0.0 < confidence < 1.0:
        raise InvalidArgumentError(f"confidence must lie in (0, 1), got {confidence}")


def hoeffding_radius(n: int, range_width: float, confidence: float) -> float:
    """w * sqrt(ln(2 / (1 - confidence)) / (2n))."""
    _check_confidence(confidence)
    if n < 1:
        raise InsufficientDataError("Hoeffding radius needs at least one sample")
    if range_width < 0:
        raise InvalidArgumentError("range_width must be non-negative")
    return range_width * math.sqrt(math.log(2.0 / (1.0 - confidence)) / (2.0 * n))


def hoeffding_interval(
    samples: Sequence[float], range_width: float, confidence: float
) -> ConcentrationInterval:
    """Hoeffding interval for the mean of samples bounded in a range of width w."""
    if range_width <= 0:
        raise InvalidArgumentError("range_width must be positive")
    values = np.asarray(samples, dtype=float)
    if values.size == 0:
        raise InsufficientDataError("Hoeffding interval needs at least one sample")
    radius = hoeffding_radius(values.size, range_width, confidence)
    return ConcentrationInterval(
        center=float(values.mean()),
        radius=radius,
        confidence=confidence,
        method=IntervalMethod.HOEFFDING,
    )


def bernstein_interval(
    samples: Sequence[float], range_width: float, confidence: float
) -> ConcentrationInterval:
    """Empirical-Bernstein interval using the unbiased sample variance.

    radius = sqrt(2 V ln(3/delta) / n) + 3 w ln(3/delta) / n, delta = 1 - confidence.
    """
    _check_confidence(confidence)
    if range_width <= 0:
        raise InvalidArgumentError("range_width must be positive")
    values = np.asarray(samples, dtype=float)
    n = values.size
    if n < 2:
        raise InsufficientDataError("Bernstein interval needs at least two samples")

    log_term = math.log(3.0 / (1.0 - confidence))
    variance = float(np.var(values, ddof=1))
    radius = math.sqrt(2.0 * variance * log_term / n) + 3.0 * range_width * log_term / n
    return ConcentrationInterval(
        center=float(values.mean()),
        radius=radius,
        confidence=confidence,
        method=IntervalMethod.EMPIRICAL_BERNSTEIN,
    )
