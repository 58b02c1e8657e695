"""MAML-style meta-training with exact inner gradients.

Features:
- Inner adaptation by exact policy-gradient descent on L = -J
- First-order and full meta-gradients
- Seeded meta-batch sampling, one stream per iteration
- Stationarity stopping on the windowed gradient norm
"""

from dataclasses import dataclass, field
from typing import List, Sequence, Tuple, Union

import numpy as np
import structlog

from ..exceptions import DivergenceError, InsufficientDataError, InvalidArgumentError
from ..mdp.evaluation import exact_policy_return
from ..mdp.gradients import exact_policy_gradient, hessian_vector_product
from ..mdp.models import Mdp, PolicyParams
from ..tasks.sampling import TaskSet
from ..utils.constants import DEFAULT_HVP_STEP, TAG_BATCH
from ..utils.seeding import stream
from .config import MetaConfig, MetaMode
from .schedule import step_size

logger = structlog.get_logger()

Tasks = Union[TaskSet, Sequence[Mdp]]


@dataclass
class MetaState:
    """Parameters and per-iteration histories of a meta-training run."""

    params: PolicyParams
    iteration: int = 0
    loss_history: List[float] = field(default_factory=list)
    grad_norm_history: List[float] = field(default_factory=list)
    rng_cursor: int = 0
    param_history: List[PolicyParams] = field(default_factory=list)

    @classmethod
    def from_histories(
        cls, losses: Sequence[float], grad_norms: Sequence[float]
    ) -> "MetaState":
        """State rebuilt from an exported run log (parameters unknown)."""
        if len(losses) != len(grad_norms):
            raise InvalidArgumentError("loss and grad-norm histories differ in length")
        return cls(
            params=PolicyParams.zeros(1, 1),
            iteration=len(losses),
            loss_history=[float(v) for v in losses],
            grad_norm_history=[float(v) for v in grad_norms],
            rng_cursor=len(losses),
        )

    def same_as(self, other: "MetaState") -> bool:
        """Bit-exact equality of parameters and histories."""
        return (
            self.params.same_as(other.params)
            and self.iteration == other.iteration
            and self.loss_history == other.loss_history
            and self.grad_norm_history == other.grad_norm_history
            and self.rng_cursor == other.rng_cursor
        )


def _as_mdps(tasks: Tasks) -> List[Mdp]:
    return tasks.mdps if isinstance(tasks, TaskSet) else list(tasks)


def _descend(params: PolicyParams, gradient: np.ndarray, rate: float) -> PolicyParams:
    logits = params.logits - rate * gradient
    if not np.all(np.isfinite(logits)):
        raise DivergenceError("parameter update produced non-finite logits")
    return PolicyParams(logits)


def _adapt_trajectory(
    task: Mdp, params: PolicyParams, inner_lr: float, inner_steps: int
) -> List[PolicyParams]:
    trajectory = [params]
    for _ in range(inner_steps):
        loss_gradient = -exact_policy_gradient(task, trajectory[-1])
        trajectory.append(_descend(trajectory[-1], loss_gradient, inner_lr))
    return trajectory


def adapt(
    task: Mdp, params: PolicyParams, inner_lr: float, inner_steps: int
) -> PolicyParams:
    """Parameters after ``inner_steps`` exact gradient-descent steps on the task loss."""
    if inner_lr <= 0:
        raise InvalidArgumentError("inner_lr must be positive")
    if inner_steps < 0:
        raise InvalidArgumentError("inner_steps must be non-negative")
    return _adapt_trajectory(task, params, inner_lr, inner_steps)[-1]


def _task_terms(
    task: Mdp, params: PolicyParams, cfg: MetaConfig, with_gradient: bool = True
) -> Tuple[float, np.ndarray]:
    """Post-adaptation loss of one task and its meta-gradient contribution."""
    trajectory = _adapt_trajectory(task, params, cfg.inner_lr, cfg.inner_steps)
    adapted = trajectory[-1]
    loss = exact_policy_return(task, adapted).loss_value
    if not with_gradient:
        return loss, np.zeros_like(params.logits)

    gradient = -exact_policy_gradient(task, adapted)
    if cfg.mode is MetaMode.FULL:
        # vector-Jacobian product through theta_{k+1} = theta_k + alpha * grad J(theta_k);
        # each Jacobian I + alpha * H(theta_k) is symmetric
        for inner_params in reversed(trajectory[:-1]):
            gradient = gradient + cfg.inner_lr * hessian_vector_product(
                task, inner_params, gradient, DEFAULT_HVP_STEP
            )
    return loss, gradient


def _batch_terms(
    mdps: Sequence[Mdp], params: PolicyParams, cfg: MetaConfig, with_gradient: bool = True
) -> Tuple[float, np.ndarray]:
    if not mdps:
        raise InsufficientDataError("meta objective needs at least one task")
    terms = [_task_terms(mdp, params, cfg, with_gradient) for mdp in mdps]
    # reduce in task order so results never depend on evaluation order
    losses = np.array([loss for loss, _ in terms])
    gradients = np.stack([gradient for _, gradient in terms])
    return float(np.mean(losses)), np.mean(gradients, axis=0)


def meta_loss(tasks: Tasks, params: PolicyParams, cfg: MetaConfig) -> float:
    """Mean post-adaptation loss over the tasks."""
    loss, _ = _batch_terms(_as_mdps(tasks), params, cfg, with_gradient=False)
    return loss


def meta_gradient(tasks: Tasks, params: PolicyParams, cfg: MetaConfig) -> np.ndarray:
    """Gradient of the meta-loss (first-order or full, per ``cfg.mode``)."""
    _, gradient = _batch_terms(_as_mdps(tasks), params, cfg)
    return gradient


def _batch_positions(n_tasks: int, meta_batch: int, seed: int, iteration: int) -> List[int]:
    if meta_batch >= n_tasks:
        return list(range(n_tasks))
    rng = stream(seed, TAG_BATCH, iteration)
    return sorted(int(p) for p in rng.choice(n_tasks, size=meta_batch, replace=False))


def meta_train(train: TaskSet, cfg: MetaConfig, seed: int) -> MetaState:
    """Run meta-training from zero logits.

    Deterministic given (train, cfg, seed). Stops after ``cfg.max_iters``
    iterations or once the mean gradient norm over the last
    ``cfg.convergence_window`` iterations drops below ``cfg.grad_tol``.

    Raises:
        DivergenceError: a loss, gradient or update became non-finite.
    """
    mdps = train.mdps
    if not mdps:
        raise InsufficientDataError("meta-training needs at least one task")
    if cfg.meta_batch > len(mdps):
        raise InvalidArgumentError(
            f"meta_batch {cfg.meta_batch} exceeds train-set size {len(mdps)}"
        )

    n_states, n_actions = mdps[0].shape
    state = MetaState(params=PolicyParams.zeros(n_states, n_actions))
    state.param_history.append(state.params)
    logger.debug(
        "Starting meta-training",
        n_tasks=len(mdps),
        max_iters=cfg.max_iters,
        mode=cfg.mode.value,
        seed=seed,
    )

    for t in range(cfg.max_iters):
        positions = _batch_positions(len(mdps), cfg.meta_batch, seed, t)
        state.rng_cursor = t + 1
        try:
            loss, gradient = _batch_terms([mdps[p] for p in positions], state.params, cfg)
        except DivergenceError as e:
            raise DivergenceError(f"inner adaptation diverged at iteration {t}: {e}", t) from e

        grad_norm = float(np.linalg.norm(gradient))
        if not (np.isfinite(loss) and np.isfinite(grad_norm)):
            raise DivergenceError(f"non-finite loss or gradient at iteration {t}", t)

        rate = step_size(cfg.schedule, t)
        try:
            state.params = _descend(state.params, gradient, rate)
        except DivergenceError as e:
            raise DivergenceError(f"meta update diverged at iteration {t}", t) from e

        state.loss_history.append(loss)
        state.grad_norm_history.append(grad_norm)
        state.param_history.append(state.params)
        state.iteration = t + 1

        window = state.grad_norm_history[-cfg.convergence_window :]
        if len(window) == cfg.convergence_window and np.mean(window) < cfg.grad_tol:
            logger.debug("Meta-training reached stationarity", iteration=state.iteration)
            break

    logger.debug(
        "Meta-training finished",
        iterations=state.iteration,
        final_loss=state.loss_history[-1] if state.loss_history else None,
    )
    return state
