"""Test step-size schedules."""

import pytest
from pydantic import ValidationError

from src.meta.config import MetaConfig, StepSchedule
from src.meta.schedule import (
    RATES_SUMMABLE,
    SQUARES_NOT_SUMMABLE,
    step_size,
    validate_schedule,
)


class TestStepSize:
    """Test the power-law schedule."""

    def test_harmonic(self):
        """c / (t + 1) halves after one step."""
        schedule = StepSchedule(base_rate=0.5, exponent=1.0)
        assert step_size(schedule, 0) == 0.5
        assert step_size(schedule, 1) == 0.25
        assert step_size(schedule, 9) == pytest.approx(0.05)

    def test_constant(self):
        """p = 0 keeps the base rate."""
        schedule = StepSchedule(base_rate=0.1, exponent=0.0)
        assert step_size(schedule, 100) == 0.1


class TestValidateSchedule:
    """Test the Robbins-Monro check."""

    @pytest.mark.parametrize("exponent", [0.6, 0.75, 1.0])
    def test_valid_exponents(self, exponent):
        """0.5 < p <= 1 satisfies both conditions."""
        verdict = validate_schedule(StepSchedule(exponent=exponent))
        assert verdict.valid
        assert verdict.reasons == []

    @pytest.mark.parametrize("exponent", [0.0, 0.5])
    def test_squares_not_summable(self, exponent):
        """p <= 0.5 leaves the squared rates divergent."""
        verdict = validate_schedule(StepSchedule(exponent=exponent))
        assert not verdict.valid
        assert verdict.reasons == [SQUARES_NOT_SUMMABLE]

    def test_rates_summable(self):
        """p > 1 gives a finite total step."""
        verdict = validate_schedule(StepSchedule(exponent=1.5))
        assert verdict.reasons == [RATES_SUMMABLE]


class TestMetaConfig:
    """Test hyperparameter validation."""

    def test_defaults(self):
        """Defaults are first-order, one inner step."""
        cfg = MetaConfig()
        assert cfg.mode.value == "first_order"
        assert cfg.inner_steps == 1

    @pytest.mark.parametrize(
        "field,value",
        [("inner_lr", 0.0), ("inner_steps", -1), ("meta_batch", 0), ("grad_tol", 0.0)],
    )
    def test_rejects_out_of_range(self, field, value):
        """Out-of-range values fail validation."""
        with pytest.raises(ValidationError):
            MetaConfig(**{field: value})

    def test_rejects_non_positive_rate(self):
        """The schedule needs c > 0."""
        with pytest.raises(ValidationError):
            StepSchedule(base_rate=0.0)
