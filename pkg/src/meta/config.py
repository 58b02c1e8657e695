"""Meta-learning hyperparameters."""

from enum import Enum

from pydantic import BaseModel, ConfigDict, Field

from ..utils.constants import DEFAULT_CONVERGENCE_WINDOW


class MetaMode(str, Enum):
    """How the outer gradient treats the inner adaptation."""

    FIRST_ORDER = "first_order"
    FULL = "full"


class StepSchedule(BaseModel):
    """Power-law meta step size c / (t + 1)^p."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    base_rate: float = Field(0.5, gt=0.0, description="Rate constant c")
    exponent: float = Field(1.0, ge=0.0, description="Decay exponent p")


class MetaConfig(BaseModel):
    """MAML-style training settings."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    inner_lr: float = Field(0.5, gt=0.0, description="Inner adaptation step alpha")
    inner_steps: int = Field(1, ge=0, description="Inner gradient steps K")
    meta_batch: int = Field(4, ge=1, description="Tasks per meta-step")
    schedule: StepSchedule = Field(default_factory=StepSchedule)
    mode: MetaMode = Field(MetaMode.FIRST_ORDER, description="Meta-gradient mode")
    max_iters: int = Field(200, ge=0, description="Meta-iteration budget")
    grad_tol: float = Field(1e-3, gt=0.0, description="Stationarity tolerance")
    convergence_window: int = Field(
        DEFAULT_CONVERGENCE_WINDOW, ge=1, description="Iterations averaged for stopping"
    )
