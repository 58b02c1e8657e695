"""Pytest configuration and fixtures."""

import json

import numpy as np
import pytest

from src.harness.config import ExperimentConfig, parse_config
from src.mdp.models import Mdp


def make_bandit(rewards=(1.0, 0.0)) -> Mdp:
    """One-state task with discount 0; the return is the expected reward."""
    n_actions = len(rewards)
    return Mdp(
        transitions=np.ones((1, n_actions, 1)),
        rewards=np.array([list(rewards)], dtype=float),
        discount=0.0,
        start_dist=np.array([1.0]),
        reward_range=(0.0, 1.0),
    )


def make_random_mdp(seed: int, n_states: int = 4, n_actions: int = 3, discount: float = 0.9) -> Mdp:
    """Dirichlet transitions and uniform rewards in [0, 1]."""
    rng = np.random.default_rng(seed)
    return Mdp(
        transitions=rng.dirichlet(np.ones(n_states), size=(n_states, n_actions)),
        rewards=rng.uniform(0.0, 1.0, size=(n_states, n_actions)),
        discount=discount,
        start_dist=np.full(n_states, 1.0 / n_states),
        reward_range=(0.0, 1.0),
    )


@pytest.fixture
def bandit():
    """Two-armed bandit with rewards (1, 0) and discount 0."""
    return make_bandit()


@pytest.fixture
def chain():
    """Two-state chain, discount 0.5.

    Action 0 stays, action 1 switches. Reward 1 for staying in state 1,
    0 otherwise. Start in state 0, so V*(0) = 0 + 0.5 * 2 = 1.
    """
    transitions = np.zeros((2, 2, 2))
    transitions[0, 0, 0] = 1.0
    transitions[0, 1, 1] = 1.0
    transitions[1, 0, 1] = 1.0
    transitions[1, 1, 0] = 1.0
    rewards = np.array([[0.0, 0.0], [1.0, 0.0]])
    return Mdp(
        transitions=transitions,
        rewards=rewards,
        discount=0.5,
        start_dist=np.array([1.0, 0.0]),
        reward_range=(0.0, 1.0),
    )


@pytest.fixture
def random_mdp():
    """Factory for seeded random MDPs."""
    return make_random_mdp


@pytest.fixture
def tiny_config_data():
    """Experiment document small enough to run in a unit test."""
    return {
        "family": {"n_states": 3, "n_actions": 2, "discount": 0.8, "complexity_sigma": 0.5},
        "meta": {"meta_batch": 2, "max_iters": 12, "convergence_window": 4},
        "n_train_grid": [2, 4, 8],
        "sigma_grid": [0.5],
        "n_test": 4,
        "n_seeds": 2,
        "comparison": {"lr": 0.5, "budget": 2},
        "complexity_tasks": 6,
        "rademacher_draws": 50,
    }


@pytest.fixture
def tiny_config(tiny_config_data) -> ExperimentConfig:
    """Parsed tiny experiment document."""
    return parse_config(json.dumps(tiny_config_data))


@pytest.fixture
def config_file(tmp_path, tiny_config_data):
    """Tiny experiment document written to disk, output under tmp_path."""
    data = {**tiny_config_data, "output_dir": str(tmp_path / "results")}
    path = tmp_path / "experiment.json"
    path.write_text(json.dumps(data))
    return path
