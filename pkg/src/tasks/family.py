"""Task-family specification.

A family is a seeded generator of MDPs around one shared base task. The
``complexity_sigma`` knob moves the family from a single repeated task
(sigma = 0) to independently drawn tasks (sigma = 1).
"""

from enum import Enum
from typing import Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ..utils.constants import GRID_ACTIONS, GRID_STATES


class FamilyKind(str, Enum):
    """Supported task generators."""

    PERTURBED_RANDOM = "perturbed_random"
    PERTURBED_GRIDWORLD = "perturbed_gridworld"


class TaskFamilySpec(BaseModel):
    """Parameters of a task distribution."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    family_kind: FamilyKind = Field(
        FamilyKind.PERTURBED_RANDOM, description="Task generator"
    )
    n_states: int = Field(5, ge=1, description="States per task")
    n_actions: int = Field(3, ge=1, description="Actions per state")
    discount: float = Field(0.9, ge=0.0, lt=1.0, description="Discount factor")
    complexity_sigma: float = Field(
        0.5, ge=0.0, le=1.0, description="Task variability knob"
    )
    reward_range: Tuple[float, float] = Field(
        (0.0, 1.0), description="Inclusive bounds on every reward"
    )
    base_seed: int = Field(0, ge=0, lt=2**64, description="Seed of the base task")

    @field_validator("reward_range")
    @classmethod
    def validate_reward_range(cls, v: Tuple[float, float]) -> Tuple[float, float]:
        """Ensure the reward interval is ordered."""
        low, high = v
        if low > high:
            raise ValueError(f"reward_range lower bound {low} exceeds upper bound {high}")
        return v

    @model_validator(mode="after")
    def validate_grid_shape(self) -> "TaskFamilySpec":
        """Gridworld tasks have fixed 5x5 dynamics."""
        if self.family_kind is FamilyKind.PERTURBED_GRIDWORLD and (
            self.n_states != GRID_STATES or self.n_actions != GRID_ACTIONS
        ):
            raise ValueError(
                f"perturbed_gridworld requires n_states={GRID_STATES} "
                f"and n_actions={GRID_ACTIONS}"
            )
        return self

    @property
    def reward_span(self) -> float:
        low, high = self.reward_range
        return high - low

    def with_sigma(self, sigma: float) -> "TaskFamilySpec":
        """Same family at another variability level."""
        return self.model_validate({**self.model_dump(), "complexity_sigma": sigma})

    def with_base_seed(self, base_seed: int) -> "TaskFamilySpec":
        return self.model_validate({**self.model_dump(), "base_seed": base_seed})
