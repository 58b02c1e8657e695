"""Empirical bound machinery: gaps, concentration, Rademacher and scaling fits."""

from .concentration import (
    ConcentrationInterval,
    IntervalMethod,
    bernstein_interval,
    hoeffding_interval,
    hoeffding_radius,
)
from .gaps import GapContext, GapReport, generalization_gap, suboptimality_gap
from .rademacher import (
    RademacherEstimate,
    empirical_rademacher,
    empirical_rademacher_estimate,
    rademacher_bound,
)
from .scaling import BoundFit, GridPoint, bound_shape, fit_bound_scaling

__all__ = [
    "ConcentrationInterval",
    "IntervalMethod",
    "GapContext",
    "GapReport",
    "RademacherEstimate",
    "BoundFit",
    "GridPoint",
    "hoeffding_radius",
    "hoeffding_interval",
    "bernstein_interval",
    "generalization_gap",
    "suboptimality_gap",
    "empirical_rademacher",
    "empirical_rademacher_estimate",
    "rademacher_bound",
    "bound_shape",
    "fit_bound_scaling",
]
