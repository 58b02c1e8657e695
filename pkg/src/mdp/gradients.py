"""Exact and numerical policy gradients for tabular softmax policies."""

import numpy as np
import structlog

from ..exceptions import InvalidArgumentError
from ..utils.constants import DEFAULT_FD_STEP
from .evaluation import (
    _check_shape,
    evaluate_policy_table,
    policy_dynamics,
    q_values,
    solve_bellman,
)
from .models import Mdp, PolicyParams

logger = structlog.get_logger()


def discounted_occupancy(mdp: Mdp, policy: np.ndarray) -> np.ndarray:
    """Unnormalised discounted state occupancy d = start^T (I - discount P_pi)^-1.

    Solved as the adjoint Bellman system d = start + discount * P_pi^T d, with
    the same dense or iterative rule as policy evaluation.
    """
    p_pi, _ = policy_dynamics(mdp, policy)
    return solve_bellman(p_pi.T, mdp.start_dist, mdp.discount)


def exact_policy_gradient(mdp: Mdp, params: PolicyParams) -> np.ndarray:
    """Gradient of the return J with respect to the logits.

    dJ/dtheta[s, a] = d(s) * pi(a|s) * (Q(s, a) - V(s)), with the occupancy d
    and the values both from linear solves. Negate for the loss gradient.
    """
    _check_shape(mdp, params)
    policy = params.probabilities()
    evaluation = evaluate_policy_table(mdp, policy)
    advantages = q_values(mdp, evaluation.state_values) - evaluation.state_values[:, None]
    occupancy = discounted_occupancy(mdp, policy)
    return occupancy[:, None] * policy * advantages


def finite_diff_gradient(
    mdp: Mdp, params: PolicyParams, step: float = DEFAULT_FD_STEP
) -> np.ndarray:
    """Central-difference gradient of J, perturbing one logit at a time."""
    if step <= 0:
        raise InvalidArgumentError("step must be positive")
    _check_shape(mdp, params)

    base = params.logits
    gradient = np.zeros_like(base)
    for index in np.ndindex(base.shape):
        perturb = np.zeros_like(base)
        perturb[index] = step

        forward = evaluate_policy_table(mdp, PolicyParams(base + perturb).probabilities())
        backward = evaluate_policy_table(mdp, PolicyParams(base - perturb).probabilities())
        gradient[index] = (forward.return_value - backward.return_value) / (2 * step)

    return gradient


def hessian_vector_product(
    mdp: Mdp, params: PolicyParams, vector: np.ndarray, step: float
) -> np.ndarray:
    """Hessian of J times ``vector`` by central differences of the exact gradient.

    The probe moves ``step`` along the unit direction and the result is
    rescaled by the vector norm, so the probe size does not depend on the
    magnitude of ``vector``.
    """
    if step <= 0:
        raise InvalidArgumentError("step must be positive")
    vector = np.asarray(vector, dtype=float)
    norm = float(np.linalg.norm(vector))
    if norm == 0.0:
        return np.zeros_like(params.logits)

    direction = vector / norm
    forward = exact_policy_gradient(mdp, params.shifted(direction, step))
    backward = exact_policy_gradient(mdp, params.shifted(direction, -step))
    return norm * (forward - backward) / (2 * step)
