"""Finite MDPs, exact evaluation and exact policy gradients."""

from .evaluation import (
    deterministic_policy_return,
    evaluate_policy_table,
    exact_policy_return,
    optimal_return,
    validate_mdp,
    value_iteration,
)
from .gradients import (
    exact_policy_gradient,
    finite_diff_gradient,
    hessian_vector_product,
)
from .models import EvalResult, Mdp, PolicyParams, ValidationReport, ValueIterationResult

__all__ = [
    "Mdp",
    "PolicyParams",
    "EvalResult",
    "ValidationReport",
    "ValueIterationResult",
    "validate_mdp",
    "exact_policy_return",
    "deterministic_policy_return",
    "evaluate_policy_table",
    "value_iteration",
    "optimal_return",
    "exact_policy_gradient",
    "finite_diff_gradient",
    "hessian_vector_product",
]
