"""Fixtures for the headline reproductions."""

import json

import pytest

from src.harness.config import parse_config


def benchmark_document(**changes):
    """Perturbed random family, 5 states, 3 actions, discount 0.9."""
    data = {
        "family": {
            "family_kind": "perturbed_random",
            "n_states": 5,
            "n_actions": 3,
            "discount": 0.9,
            "complexity_sigma": 0.5,
        },
        "n_train_grid": [4, 8, 16, 32, 64, 128],
        "sigma_grid": [0.5],
        "n_seeds": 20,
        "master_seed": 2024,
    }
    data.update(changes)
    return parse_config(json.dumps(data))


@pytest.fixture
def benchmark():
    """Factory for benchmark experiment documents."""
    return benchmark_document
