"""Exact solvers and meta-gradients against brute-force oracles."""

import math

import numpy as np
import pytest

from src.bounds.concentration import bernstein_interval, hoeffding_interval
from src.bounds.scaling import bound_shape, fit_bound_scaling
from src.mdp.evaluation import deterministic_policy_return, value_iteration
from src.mdp.gradients import exact_policy_gradient, finite_diff_gradient
from src.mdp.models import PolicyParams
from src.meta.config import MetaConfig
from src.meta.learner import meta_gradient, meta_loss
from src.utils.numerics import relative_error

pytestmark = pytest.mark.slow

GRID = [4, 8, 16, 32, 64, 128]


def random_instances(random_mdp, count, max_size, seed):
    rng = np.random.default_rng(seed)
    for index in range(count):
        n_states = int(rng.integers(1, max_size + 1))
        n_actions = int(rng.integers(1, max_size + 1))
        discount = (0.5, 0.9)[index % 2]
        mdp = random_mdp(seed * 1000 + index, n_states, n_actions, discount)
        params = PolicyParams(rng.uniform(-2.0, 2.0, size=(n_states, n_actions)))
        yield mdp, params


def test_policy_gradient_oracle(random_mdp):
    """Exact gradients match central differences on 100 random MDPs."""
    for mdp, params in random_instances(random_mdp, 100, 6, seed=1):
        exact = exact_policy_gradient(mdp, params)
        numeric = finite_diff_gradient(mdp, params, 1e-5)
        assert relative_error(exact, numeric) <= 1e-6 or np.max(np.abs(exact)) < 1e-9


def test_bellman_consistency(random_mdp):
    """The greedy policy's exact return equals the start-weighted optimal value."""
    for mdp, _ in random_instances(random_mdp, 100, 6, seed=1):
        result = value_iteration(mdp, 1e-10)
        greedy_return = deterministic_policy_return(mdp, result.greedy_actions).return_value
        assert greedy_return == pytest.approx(float(mdp.start_dist @ result.values), abs=1e-8)


def test_meta_gradient_oracle(random_mdp):
    """Full meta-gradients match differences of the meta-loss; modes agree at K = 0."""
    rng = np.random.default_rng(7)
    for index in range(20):
        n_states = int(rng.integers(1, 5))
        n_actions = int(rng.integers(2, 4))
        tasks = [random_mdp(500 + 2 * index + k, n_states, n_actions, 0.9) for k in range(2)]
        params = PolicyParams(rng.uniform(-1.0, 1.0, size=(n_states, n_actions)))
        cfg = MetaConfig(inner_lr=0.3, inner_steps=1 + index % 3, mode="full")

        numeric = np.zeros(params.shape)
        for cell in np.ndindex(*params.shape):
            delta = np.zeros(params.shape)
            delta[cell] = 1.0
            forward = meta_loss(tasks, params.shifted(delta, 1e-5), cfg)
            backward = meta_loss(tasks, params.shifted(delta, -1e-5), cfg)
            numeric[cell] = (forward - backward) / 2e-5
        assert relative_error(meta_gradient(tasks, params, cfg), numeric) <= 1e-4

        first = meta_gradient(tasks, params, MetaConfig(inner_steps=0, mode="first_order"))
        full = meta_gradient(tasks, params, MetaConfig(inner_steps=0, mode="full"))
        assert np.max(np.abs(first - full)) <= 1e-12


def test_interval_coverage():
    """Both 95% intervals cover a Bernoulli(0.3) mean in at least 95% of trials."""
    rng = np.random.default_rng(0)
    trials = rng.binomial(1, 0.3, size=(2000, 50)).astype(float)
    hoeffding = np.mean([hoeffding_interval(t, 1.0, 0.95).contains(0.3) for t in trials])
    bernstein = np.mean([bernstein_interval(t, 1.0, 0.95).contains(0.3) for t in trials])
    assert hoeffding >= 0.95
    assert bernstein >= 0.95


def test_hoeffding_reference_value():
    """n = 100, unit range, 95%."""
    interval = hoeffding_interval(np.full(100, 0.5), 1.0, 0.95)
    assert interval.radius == pytest.approx(math.sqrt(math.log(40.0) / 200.0), abs=1e-12)


@pytest.mark.parametrize("exponent", [-0.25, -0.5, -1.0])
def test_planted_exponents(exponent):
    """Noiseless power laws are recovered to 1e-9."""
    fit = fit_bound_scaling([(n, [0.3 * n**exponent]) for n in GRID], complexity=1.0)
    assert fit.fitted_exponent == pytest.approx(exponent, abs=1e-9)


def test_planted_bound_constant():
    """Model-matched gaps recover k = 0.7."""
    shape = bound_shape(np.array(GRID), 0.8)
    fit = fit_bound_scaling([(n, [0.7 * s]) for n, s in zip(GRID, shape)], complexity=0.8)
    assert fit.constant_k == pytest.approx(0.7, abs=1e-12)
