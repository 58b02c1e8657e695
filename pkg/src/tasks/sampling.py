"""Deterministic task sampling and train/test splits.

Features:
- Convex-mixture perturbation of a shared random base MDP
- 5x5 gridworld with per-task goal and goal reward
- Per-task streams keyed by (base_seed, task_index, field tag)
- Prefix-stable splits: task i is the same whichever set contains it
"""

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Iterable, List, Tuple

import numpy as np
import structlog

from ..exceptions import InvalidArgumentError
from ..mdp.models import Mdp
from ..utils.constants import (
    GRID_ACTIONS,
    GRID_MOVE_PROBABILITY,
    GRID_SIDE,
    GRID_STATES,
    TAG_BASE_REWARDS,
    TAG_BASE_TRANSITIONS,
    TAG_GOAL,
    TAG_TASK_REWARDS,
    TAG_TASK_TRANSITIONS,
)
from ..utils.seeding import stream
from .family import FamilyKind, TaskFamilySpec

logger = structlog.get_logger()

# up, down, left, right as (row, column) offsets
GRID_MOVES = ((-1, 0), (1, 0), (0, -1), (0, 1))


class TaskRole(str, Enum):
    """Which side of the split a task set belongs to."""

    TRAIN = "train"
    TEST = "test"


@dataclass(frozen=True, eq=False)
class TaskSet:
    """Ordered tasks of one family, tagged as train or test."""

    spec: TaskFamilySpec
    tasks: Tuple[Tuple[int, Mdp], ...]
    role: TaskRole

    def __post_init__(self) -> None:
        indices = [index for index, _ in self.tasks]
        if any(b <= a for a, b in zip(indices, indices[1:])):
            raise InvalidArgumentError("task indices must be unique and ascending")

    def __len__(self) -> int:
        return len(self.tasks)

    @property
    def indices(self) -> List[int]:
        return [index for index, _ in self.tasks]

    @property
    def mdps(self) -> List[Mdp]:
        return [mdp for _, mdp in self.tasks]

    def subset(self, positions: Iterable[int]) -> "TaskSet":
        """Tasks at the given list positions, kept in index order."""
        chosen = sorted(set(int(p) for p in positions))
        return TaskSet(self.spec, tuple(self.tasks[p] for p in chosen), self.role)

    def to_dict(self) -> dict:
        return {
            "role": self.role.value,
            "spec": self.spec.model_dump(mode="json"),
            "tasks": [{"task_index": i, "mdp": mdp.to_dict()} for i, mdp in self.tasks],
        }


@lru_cache(maxsize=64)
def _random_base(spec: TaskFamilySpec) -> Tuple[np.ndarray, np.ndarray]:
    shape = (spec.n_states, spec.n_actions)
    low, high = spec.reward_range
    transitions = stream(spec.base_seed, TAG_BASE_TRANSITIONS).dirichlet(
        np.ones(spec.n_states), size=shape
    )
    rewards = stream(spec.base_seed, TAG_BASE_REWARDS).uniform(low, high, size=shape)
    transitions.setflags(write=False)
    rewards.setflags(write=False)
    return transitions, rewards


def _sample_random_task(spec: TaskFamilySpec, task_index: int) -> Mdp:
    base_transitions, base_rewards = _random_base(spec)
    shape = base_rewards.shape
    sigma = spec.complexity_sigma
    low, high = spec.reward_range
    half_span = spec.reward_span / 2

    task_transitions = stream(spec.base_seed, task_index, TAG_TASK_TRANSITIONS).dirichlet(
        np.ones(spec.n_states), size=shape
    )
    noise = stream(spec.base_seed, task_index, TAG_TASK_REWARDS).uniform(
        -half_span, half_span, size=shape
    )

    return Mdp(
        transitions=(1.0 - sigma) * base_transitions + sigma * task_transitions,
        rewards=np.clip(base_rewards + sigma * noise, low, high),
        discount=spec.discount,
        start_dist=np.full(spec.n_states, 1.0 / spec.n_states),
        reward_range=spec.reward_range,
    )


@lru_cache(maxsize=1)
def _grid_dynamics() -> np.ndarray:
    transitions = np.zeros((GRID_STATES, GRID_ACTIONS, GRID_STATES))
    for state in range(GRID_STATES):
        row, col = divmod(state, GRID_SIDE)
        for action, (d_row, d_col) in enumerate(GRID_MOVES):
            n_row, n_col = row + d_row, col + d_col
            if 0 <= n_row < GRID_SIDE and 0 <= n_col < GRID_SIDE:
                target = n_row * GRID_SIDE + n_col
            else:
                target = state  # wall
            transitions[state, action, target] += GRID_MOVE_PROBABILITY
            transitions[state, action, state] += 1.0 - GRID_MOVE_PROBABILITY
    transitions.setflags(write=False)
    return transitions


def _sample_grid_task(spec: TaskFamilySpec, task_index: int) -> Mdp:
    low, high = spec.reward_range
    sigma = spec.complexity_sigma
    base_goal = int(stream(spec.base_seed, TAG_GOAL).integers(GRID_STATES))

    # fixed draw layout: relocation coin, candidate goal, reward jitter
    rng = stream(spec.base_seed, task_index, TAG_GOAL)
    coin = rng.random()
    candidate = int(rng.integers(GRID_STATES))
    jitter = rng.uniform(-spec.reward_span / 2, spec.reward_span / 2)

    goal = candidate if coin < sigma else base_goal
    rewards = np.full((GRID_STATES, GRID_ACTIONS), low)
    rewards[goal, :] = np.clip(high + sigma * jitter, low, high)

    start = np.zeros(GRID_STATES)
    start[0] = 1.0
    return Mdp(
        transitions=_grid_dynamics(),
        rewards=rewards,
        discount=spec.discount,
        start_dist=start,
        reward_range=spec.reward_range,
    )


def sample_task(spec: TaskFamilySpec, task_index: int) -> Mdp:
    """Task ``task_index`` of the family; a pure function of its arguments."""
    if task_index < 0:
        raise InvalidArgumentError("task_index must be non-negative")
    if spec.family_kind is FamilyKind.PERTURBED_GRIDWORLD:
        return _sample_grid_task(spec, task_index)
    return _sample_random_task(spec, task_index)


def sample_task_set(spec: TaskFamilySpec, indices: Iterable[int], role: TaskRole) -> TaskSet:
    """Tasks at the given indices."""
    ordered = sorted(indices)
    return TaskSet(spec, tuple((i, sample_task(spec, i)) for i in ordered), role)


def make_split(spec: TaskFamilySpec, n_train: int, n_test: int) -> Tuple[TaskSet, TaskSet]:
    """Train tasks [0, n_train) and test tasks [n_train, n_train + n_test)."""
    if n_train < 1 or n_test < 1:
        raise InvalidArgumentError("n_train and n_test must be at least 1")

    train = sample_task_set(spec, range(n_train), TaskRole.TRAIN)
    test = sample_task_set(spec, range(n_train, n_train + n_test), TaskRole.TEST)
    logger.debug(
        "Built task split",
        family=spec.family_kind.value,
        sigma=spec.complexity_sigma,
        n_train=n_train,
        n_test=n_test,
    )
    return train, test
