"""Monte-Carlo empirical Rademacher complexity and the resulting bound."""

import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike

from ..exceptions import InsufficientDataError, InvalidArgumentError
from ..utils.seeding import stream


@dataclass(frozen=True)
class RademacherEstimate:
    """Mean of the sign-draw suprema with its Monte-Carlo standard error."""

    value: float
    std_error: float
    n_draws: int


def empirical_rademacher_estimate(
    loss_matrix: ArrayLike, n_sign_draws: int, seed: int
) -> RademacherEstimate:
    """Estimate E_sigma[max_h (1/n) sum_i sigma_i * loss[i, h]].

    Args:
        loss_matrix: Table with one row per sample and one column per hypothesis
        n_sign_draws: Number of uniform sign vectors
        seed: Seed of the sign draws

    Returns:
        Estimate with its standard error (0 for a single draw).
    """
    matrix = np.asarray(loss_matrix, dtype=float)
    if matrix.ndim != 2 or matrix.size == 0:
        raise InsufficientDataError("loss matrix must be a non-empty 2-D table")
    if n_sign_draws < 1:
        raise InvalidArgumentError("n_sign_draws must be at least 1")

    n_samples = matrix.shape[0]
    rng = stream(seed)
    signs = rng.choice(np.array([-1.0, 1.0]), size=(n_sign_draws, n_samples))
    suprema = (signs @ matrix / n_samples).max(axis=1)

    std_error = (
        float(np.std(suprema, ddof=1) / math.sqrt(n_sign_draws)) if n_sign_draws > 1 else 0.0
    )
    return RademacherEstimate(
        value=float(suprema.mean()), std_error=std_error, n_draws=n_sign_draws
    )


def empirical_rademacher(loss_matrix: ArrayLike, n_sign_draws: int, seed: int) -> float:
    """Point estimate of the empirical Rademacher complexity."""
    return empirical_rademacher_estimate(loss_matrix, n_sign_draws, seed).value


def rademacher_bound(
    train_mean: float, rademacher: float, n: int, range_width: float, confidence: float
) -> float:
    """Uniform-convergence bound train_mean + 2R + w sqrt(ln(1/delta) / (2n))."""
    if not 0.0 < confidence < 1.0:
        raise InvalidArgumentError("confidence must lie in (0, 1)")
    if n < 1:
        raise InsufficientDataError("bound needs at least one sample")
    delta = 1.0 - confidence
    return train_mean + 2.0 * rademacher + range_width * math.sqrt(
        math.log(1.0 / delta) / (2.0 * n)
    )
