"""Exact dynamic programming on finite MDPs.

Features:
- Invariant checking with indexed violation reports
- Policy evaluation by dense linear solve (iterative above 64 states)
- Value iteration with a residual-controlled stopping rule
"""

from typing import List, Sequence

import numpy as np
import structlog
from scipy import linalg

from ..exceptions import DimensionError, InvalidArgumentError, SolverError
from ..utils.constants import (
    DIRECT_SOLVE_MAX_STATES,
    EVALUATION_MAX_ITERS,
    EVALUATION_RESIDUAL,
    PROBABILITY_TOLERANCE,
    VALUE_ITERATION_MAX_ITERS,
)
from .models import EvalResult, Mdp, PolicyParams, ValidationReport, ValueIterationResult

logger = structlog.get_logger()


def validate_mdp(mdp: Mdp) -> ValidationReport:
    """Check every MDP invariant and report violations with indices."""
    violations: List[str] = []
    tol = PROBABILITY_TOLERANCE

    for s, a, s_next in np.argwhere(~np.isfinite(mdp.transitions)):
        violations.append(f"non-finite probability at (s={s},a={a},s'={s_next})")

    negative = np.argwhere(mdp.transitions < 0.0)
    for s, a, s_next in negative:
        violations.append(
            f"negative probability {mdp.transitions[s, a, s_next]:.6g} "
            f"at (s={s},a={a},s'={s_next})"
        )

    row_sums = mdp.transitions.sum(axis=2)
    # written so NaN sums count as violations
    for s, a in np.argwhere(~(np.abs(row_sums - 1.0) <= tol)):
        violations.append(f"row sum {row_sums[s, a]:.6g} ≠ 1 at (s={s},a={a})")

    for s in np.flatnonzero(~np.isfinite(mdp.start_dist)):
        violations.append(f"non-finite start probability at s={s}")
    for s in np.flatnonzero(mdp.start_dist < 0.0):
        violations.append(f"negative start probability at s={s}")
    start_total = float(mdp.start_dist.sum())
    if not abs(start_total - 1.0) <= tol:
        violations.append(f"start_dist sums to {start_total:.6g} ≠ 1")

    low, high = mdp.reward_range
    if low > high:
        violations.append(f"reward_range [{low}, {high}] is empty")
    if not np.all(np.isfinite(mdp.rewards)):
        violations.append("rewards must be finite")
    for s, a in np.argwhere((mdp.rewards < low) | (mdp.rewards > high)):
        violations.append(
            f"reward {mdp.rewards[s, a]:.6g} outside [{low}, {high}] at (s={s},a={a})"
        )

    if not 0.0 <= mdp.discount:
        violations.append("discount must be >= 0")
    if mdp.discount >= 1.0:
        violations.append("discount must be < 1")

    if violations:
        logger.debug("MDP failed validation", violations=len(violations))
    return ValidationReport(violations)


def _check_shape(mdp: Mdp, params: PolicyParams) -> None:
    if params.shape != mdp.shape:
        raise DimensionError(
            f"policy shape {params.shape} does not match MDP shape {mdp.shape}"
        )


def policy_dynamics(mdp: Mdp, policy: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """State-to-state kernel P_pi and expected reward R_pi for an action table."""
    p_pi = np.einsum("sa,sat->st", policy, mdp.transitions)
    r_pi = np.einsum("sa,sa->s", policy, mdp.rewards)
    return p_pi, r_pi


def solve_bellman(kernel: np.ndarray, rewards: np.ndarray, discount: float) -> np.ndarray:
    """Solve V = r + discount * K V.

    Dense solve up to 64 states, fixed-point iteration beyond with a
    residual threshold of 1e-10.
    """
    n = kernel.shape[0]
    if n <= DIRECT_SOLVE_MAX_STATES:
        return linalg.solve(np.eye(n) - discount * kernel, rewards)

    values = np.zeros(n)
    for iteration in range(EVALUATION_MAX_ITERS):
        updated = rewards + discount * kernel @ values
        residual = float(np.max(np.abs(updated - values)))
        values = updated
        if residual <= EVALUATION_RESIDUAL:
            return values
    raise SolverError(
        f"policy evaluation did not converge in {EVALUATION_MAX_ITERS} iterations"
    )


def evaluate_policy_table(mdp: Mdp, policy: np.ndarray) -> EvalResult:
    """Exact return of a stochastic action table indexed (state, action)."""
    p_pi, r_pi = policy_dynamics(mdp, policy)
    values = solve_bellman(p_pi, r_pi, mdp.discount)
    return_value = float(mdp.start_dist @ values)
    return EvalResult(return_value=return_value, state_values=values, loss_value=-return_value)


def exact_policy_return(mdp: Mdp, params: PolicyParams) -> EvalResult:
    """Expected discounted return of the softmax policy from the start distribution."""
    _check_shape(mdp, params)
    return evaluate_policy_table(mdp, params.probabilities())


def deterministic_policy_return(mdp: Mdp, actions: Sequence[int]) -> EvalResult:
    """Exact return of a deterministic policy given as one action per state."""
    actions = np.asarray(actions, dtype=int)
    if actions.shape != (mdp.n_states,):
        raise DimensionError(
            f"expected {mdp.n_states} actions, got shape {actions.shape}"
        )
    table = np.zeros(mdp.shape)
    table[np.arange(mdp.n_states), actions] = 1.0
    return evaluate_policy_table(mdp, table)


def q_values(mdp: Mdp, values: np.ndarray) -> np.ndarray:
    """One-step lookahead Q(s, a) = R(s, a) + discount * E[V(s')]."""
    return mdp.rewards + mdp.discount * mdp.transitions @ values


def value_iteration(mdp: Mdp, tol: float) -> ValueIterationResult:
    """Optimal values within ``tol`` of V* and the lowest-index greedy policy.

    Stops once the sup-norm change between sweeps is at most
    tol * (1 - discount) / discount, which bounds the error of the returned
    values by ``tol``.
    """
    if tol <= 0:
        raise InvalidArgumentError("tol must be positive")

    gamma = mdp.discount
    threshold = np.inf if gamma == 0.0 else tol * (1.0 - gamma) / gamma
    values = np.zeros(mdp.n_states)
    residual = np.inf

    for iteration in range(1, VALUE_ITERATION_MAX_ITERS + 1):
        updated = q_values(mdp, values).max(axis=1)
        residual = float(np.max(np.abs(updated - values)))
        values = updated
        if residual <= threshold:
            break
    else:
        raise SolverError(
            f"value iteration did not converge in {VALUE_ITERATION_MAX_ITERS} sweeps"
        )

    q = q_values(mdp, values)
    greedy = np.argmax(q, axis=1)  # first maximum wins ties
    logger.debug("Value iteration finished", iterations=iteration, residual=residual)
    return ValueIterationResult(
        values=values,
        greedy_actions=greedy,
        q_values=q,
        iterations=iteration,
        residual=residual,
    )


def optimal_return(mdp: Mdp, tol: float) -> float:
    """Exact return of the value-iteration greedy policy."""
    result = value_iteration(mdp, tol)
    return deterministic_policy_return(mdp, result.greedy_actions).return_value
