"""Data models for finite MDPs and tabular softmax policies.

Arrays are copied to float64 and frozen on construction so models can be
shared freely between threads and worker processes.
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Sequence, Tuple

import numpy as np
from numpy.typing import ArrayLike
from scipy.special import softmax

from ..exceptions import DimensionError, InvalidArgumentError
from ..utils.constants import DETERMINISTIC_LOGIT_MARGIN


def _frozen(values: ArrayLike, dtype: Any = float) -> np.ndarray:
    array = np.array(values, dtype=dtype, copy=True)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class Mdp:
    """Finite discounted MDP.

    Construction only checks shapes; probability and range constraints are
    reported by ``validate_mdp`` so that invalid tasks can be inspected.
    """

    transitions: np.ndarray  # (state, action, next_state)
    rewards: np.ndarray  # (state, action)
    discount: float
    start_dist: np.ndarray
    reward_range: Tuple[float, float]

    def __post_init__(self) -> None:
        transitions = _frozen(self.transitions)
        rewards = _frozen(self.rewards)
        start = _frozen(self.start_dist)

        if transitions.ndim != 3 or transitions.shape[0] != transitions.shape[2]:
            raise DimensionError(
                f"transitions must have shape (S, A, S), got {transitions.shape}"
            )
        n_states, n_actions = transitions.shape[0], transitions.shape[1]
        if n_states < 1 or n_actions < 1:
            raise DimensionError("an MDP needs at least one state and one action")
        if rewards.shape != (n_states, n_actions):
            raise DimensionError(
                f"rewards must have shape {(n_states, n_actions)}, got {rewards.shape}"
            )
        if start.shape != (n_states,):
            raise DimensionError(
                f"start_dist must have shape {(n_states,)}, got {start.shape}"
            )

        object.__setattr__(self, "transitions", transitions)
        object.__setattr__(self, "rewards", rewards)
        object.__setattr__(self, "start_dist", start)
        object.__setattr__(self, "discount", float(self.discount))
        low, high = self.reward_range
        object.__setattr__(self, "reward_range", (float(low), float(high)))

    @property
    def n_states(self) -> int:
        return int(self.transitions.shape[0])

    @property
    def n_actions(self) -> int:
        return int(self.transitions.shape[1])

    @property
    def shape(self) -> Tuple[int, int]:
        """(n_states, n_actions) of the policy table this MDP expects."""
        return self.n_states, self.n_actions

    @property
    def return_bound(self) -> float:
        """Largest attainable |J| given the declared reward range."""
        low, high = self.reward_range
        return max(abs(low), abs(high)) / (1.0 - self.discount)

    @property
    def return_range_width(self) -> float:
        """Width of the interval every discounted return lies in."""
        low, high = self.reward_range
        return (high - low) / (1.0 - self.discount)

    def same_as(self, other: "Mdp") -> bool:
        """Bit-exact equality of every field."""
        return (
            self.discount == other.discount
            and self.reward_range == other.reward_range
            and np.array_equal(self.transitions, other.transitions)
            and np.array_equal(self.rewards, other.rewards)
            and np.array_equal(self.start_dist, other.start_dist)
        )

    def to_dict(self) -> Dict[str, Any]:
        """Dense row-major JSON form."""
        return {
            "n_states": self.n_states,
            "n_actions": self.n_actions,
            "transitions": self.transitions.tolist(),
            "rewards": self.rewards.tolist(),
            "discount": self.discount,
            "start_dist": self.start_dist.tolist(),
            "reward_range": list(self.reward_range),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "Mdp":
        """Inverse of ``to_dict``."""
        mdp = cls(
            transitions=data["transitions"],
            rewards=data["rewards"],
            discount=data["discount"],
            start_dist=data["start_dist"],
            reward_range=tuple(data["reward_range"]),
        )
        declared = (data.get("n_states", mdp.n_states), data.get("n_actions", mdp.n_actions))
        if declared != mdp.shape:
            raise DimensionError(f"declared shape {declared} != array shape {mdp.shape}")
        return mdp


@dataclass(frozen=True, eq=False)
class PolicyParams:
    """Tabular softmax logits indexed (state, action)."""

    logits: np.ndarray

    def __post_init__(self) -> None:
        logits = _frozen(self.logits)
        if logits.ndim != 2:
            raise DimensionError(f"logits must be 2-D, got shape {logits.shape}")
        if not np.all(np.isfinite(logits)):
            raise InvalidArgumentError("logits must be finite")
        object.__setattr__(self, "logits", logits)

    @property
    def shape(self) -> Tuple[int, int]:
        return int(self.logits.shape[0]), int(self.logits.shape[1])

    @classmethod
    def zeros(cls, n_states: int, n_actions: int) -> "PolicyParams":
        """Uniform policy."""
        return cls(np.zeros((n_states, n_actions)))

    @classmethod
    def from_actions(
        cls,
        actions: Sequence[int],
        n_actions: int,
        margin: float = DETERMINISTIC_LOGIT_MARGIN,
    ) -> "PolicyParams":
        """Softmax sharply peaked on one action per state."""
        logits = np.zeros((len(actions), n_actions))
        logits[np.arange(len(actions)), np.asarray(actions, dtype=int)] = margin
        return cls(logits)

    def probabilities(self) -> np.ndarray:
        """Per-state action distribution."""
        return softmax(self.logits, axis=1)

    def shifted(self, delta: ArrayLike, scale: float = 1.0) -> "PolicyParams":
        """Parameters moved by ``scale * delta``."""
        return PolicyParams(self.logits + scale * np.asarray(delta, dtype=float))

    def same_as(self, other: "PolicyParams") -> bool:
        return np.array_equal(self.logits, other.logits)

    def to_dict(self) -> Dict[str, Any]:
        return {"logits": self.logits.tolist()}


@dataclass(frozen=True, eq=False)
class EvalResult:
    """Exact evaluation of a policy; the loss is the negated return."""

    return_value: float
    state_values: np.ndarray
    loss_value: float


@dataclass(frozen=True, eq=False)
class ValueIterationResult:
    """Optimal values and the greedy policy derived from them."""

    values: np.ndarray
    greedy_actions: np.ndarray
    q_values: np.ndarray
    iterations: int
    residual: float


@dataclass
class ValidationReport:
    """Verdict of ``validate_mdp``."""

    violations: List[str] = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.valid
