"""Sweep cells: seeding, execution and result records.

A cell is one (sigma, N, seed) coordinate of the experimental design. Its
record bundles the generalization gap, the suboptimality gap, convergence
diagnostics, the adaptation comparison and a Rademacher estimate over the
meta-training trajectory.
"""

import math
from dataclasses import dataclass, field
from functools import partial
from typing import Any, Dict, List, Tuple

import numpy as np
import structlog

from ..baselines.comparison import ComparisonReport, compare_meta_vs_scratch
from ..bounds.gaps import (
    Adaptation,
    GapContext,
    GapReport,
    generalization_gap,
    suboptimality_gap,
)
from ..bounds.rademacher import (
    RademacherEstimate,
    empirical_rademacher_estimate,
    rademacher_bound,
)
from ..exceptions import (
    CellFailedError,
    InvalidArgumentError,
    MetaBoundError,
    SeedCollisionError,
)
from ..mdp.evaluation import exact_policy_return
from ..mdp.models import PolicyParams
from ..meta.diagnostics import ConvergenceReport, convergence_diagnostics
from ..meta.learner import MetaState, adapt, meta_train
from ..tasks.family import TaskFamilySpec
from ..tasks.sampling import TaskSet, make_split
from ..utils.constants import TAG_CELL, TAG_RADEMACHER, TAG_REPLICATE
from ..utils.seeding import derive_seed
from .config import ExperimentConfig

logger = structlog.get_logger()

MAX_RADEMACHER_SNAPSHOTS = 20


@dataclass(frozen=True)
class SweepCell:
    """One coordinate of the N x sigma x seed grid."""

    sigma: float
    n_train: int
    seed_index: int
    sigma_index: int
    n_index: int
    derived_seed: int

    @property
    def coordinates(self) -> Tuple[float, int, int]:
        return (self.sigma, self.n_train, self.seed_index)

    @property
    def sort_key(self) -> Tuple[float, int, int]:
        return self.coordinates


def cell_seed(master_seed: int, sigma_index: int, n_index: int, seed_index: int) -> int:
    """Meta-training seed of a cell; a pure function of its grid position."""
    return derive_seed(master_seed, TAG_CELL, sigma_index, n_index, seed_index)


def enumerate_cells(cfg: ExperimentConfig) -> List[SweepCell]:
    """All cells in (sigma, N, seed) order.

    Raises:
        SeedCollisionError: two cells derived the same seed.
    """
    cells = []
    seen: Dict[int, Tuple[float, int, int]] = {}
    for sigma_index, sigma in enumerate(cfg.sigma_grid):
        for n_index, n_train in enumerate(cfg.n_train_grid):
            for seed_index in range(cfg.n_seeds):
                seed = cell_seed(cfg.master_seed, sigma_index, n_index, seed_index)
                cell = SweepCell(sigma, n_train, seed_index, sigma_index, n_index, seed)
                if seed in seen:
                    raise SeedCollisionError(
                        f"cells {seen[seed]} and {cell.coordinates} share seed {seed}"
                    )
                seen[seed] = cell.coordinates
                cells.append(cell)
    return cells


def cell_at(cfg: ExperimentConfig, sigma: float, n_train: int, seed_index: int) -> SweepCell:
    """Cell at explicit coordinates; sigma and N must be on the configured grids."""
    sigma_index = next(
        (i for i, s in enumerate(cfg.sigma_grid) if math.isclose(s, sigma, rel_tol=1e-12)),
        None,
    )
    if sigma_index is None:
        raise InvalidArgumentError(f"sigma {sigma} is not in sigma_grid {cfg.sigma_grid}")
    if n_train not in cfg.n_train_grid:
        raise InvalidArgumentError(f"N {n_train} is not in n_train_grid {cfg.n_train_grid}")
    if not 0 <= seed_index < cfg.n_seeds:
        raise InvalidArgumentError(f"seed index {seed_index} outside [0, {cfg.n_seeds})")
    n_index = cfg.n_train_grid.index(n_train)
    return SweepCell(
        sigma=cfg.sigma_grid[sigma_index],
        n_train=n_train,
        seed_index=seed_index,
        sigma_index=sigma_index,
        n_index=n_index,
        derived_seed=cell_seed(cfg.master_seed, sigma_index, n_index, seed_index),
    )


def replicate_family(cfg: ExperimentConfig, sigma: float, seed_index: int) -> TaskFamilySpec:
    """Task family of one replicate; shared by every N at that sigma and seed."""
    base_seed = derive_seed(cfg.family.base_seed, TAG_REPLICATE, seed_index)
    return cfg.family.with_sigma(sigma).with_base_seed(base_seed)


@dataclass
class CellResult:
    """Everything measured in one cell."""

    cell: SweepCell
    family_kind: str
    gap: GapReport
    subopt_gap: float
    meta_iters: int
    convergence: ConvergenceReport
    comparison: ComparisonReport
    rademacher: RademacherEstimate
    rademacher_bound: float
    loss_history: List[float] = field(default_factory=list)
    grad_norm_history: List[float] = field(default_factory=list)

    @property
    def regret(self) -> float:
        return -self.subopt_gap

    def to_dict(self) -> Dict[str, Any]:
        return {
            "sigma": self.cell.sigma,
            "n_train": self.cell.n_train,
            "seed_index": self.cell.seed_index,
            "derived_seed": self.cell.derived_seed,
            "family": self.family_kind,
            "gap": self.gap.to_dict(),
            "subopt_gap": self.subopt_gap,
            "regret": self.regret,
            "meta_iters": self.meta_iters,
            "convergence": self.convergence.to_dict(),
            "comparison": self.comparison.to_dict(),
            "rademacher": {
                "value": self.rademacher.value,
                "std_error": self.rademacher.std_error,
                "n_draws": self.rademacher.n_draws,
                "bound": self.rademacher_bound,
            },
        }


def cell_adaptation(cfg: ExperimentConfig) -> Adaptation:
    """The per-task adaptation the meta-learner was trained for."""
    return partial(adapt, inner_lr=cfg.meta.inner_lr, inner_steps=cfg.meta.inner_steps)


def _adapted_returns(
    tasks: TaskSet, params: PolicyParams, cfg: ExperimentConfig
) -> List[float]:
    adaptation = cell_adaptation(cfg)
    return [
        exact_policy_return(mdp, adaptation(mdp, params)).return_value for mdp in tasks.mdps
    ]


def _snapshot_losses(
    state: MetaState, train: TaskSet, cfg: ExperimentConfig
) -> np.ndarray:
    """Post-adaptation train losses of trajectory snapshots, rescaled to [0, 1]."""
    history = state.param_history or [state.params]
    count = min(MAX_RADEMACHER_SNAPSHOTS, len(history))
    positions = np.unique(np.linspace(0, len(history) - 1, count).round().astype(int))

    low, high = cfg.family.reward_range
    horizon = 1.0 - cfg.family.discount
    width = (high - low) / horizon
    lowest_loss = -high / horizon

    matrix = np.zeros((len(train), len(positions)))
    for column, position in enumerate(positions):
        returns = _adapted_returns(train, history[position], cfg)
        if width > 0:
            matrix[:, column] = np.clip((-np.asarray(returns) - lowest_loss) / width, 0.0, 1.0)
    return matrix


def _convergence(state: MetaState, cfg: ExperimentConfig) -> ConvergenceReport:
    window = max(2, cfg.meta.convergence_window)
    if state.iteration < window:
        return ConvergenceReport.unavailable(window)
    return convergence_diagnostics(state, cfg.meta.grad_tol, window)


def run_cell(cell: SweepCell, cfg: ExperimentConfig) -> CellResult:
    """Split, meta-train and measure one cell; deterministic given the cell.

    Raises:
        CellFailedError: any laboratory error inside the cell, with its
            coordinates attached.
    """
    log = logger.bind(sigma=cell.sigma, n_train=cell.n_train, seed_index=cell.seed_index)
    try:
        family = replicate_family(cfg, cell.sigma, cell.seed_index)
        train, test = make_split(family, cell.n_train, cfg.n_test)
        state = meta_train(train, cfg.meta, cell.derived_seed)

        train_returns = _adapted_returns(train, state.params, cfg)
        test_returns = _adapted_returns(test, state.params, cfg)
        context = GapContext(
            sigma=cell.sigma,
            seed=cell.derived_seed,
            reward_range=family.reward_range,
            discount=family.discount,
            confidence=cfg.confidence,
        )
        gap = generalization_gap(train_returns, test_returns, context)
        subopt = suboptimality_gap(test, state.params, cell_adaptation(cfg))
        comparison = compare_meta_vs_scratch(
            state.params,
            test,
            cfg.comparison.lr,
            cfg.comparison.budget,
            cfg.comparison.target_fraction,
        )

        losses = _snapshot_losses(state, train, cfg)
        rademacher = empirical_rademacher_estimate(
            losses, cfg.rademacher_draws, derive_seed(cell.derived_seed, TAG_RADEMACHER)
        )
        bound = rademacher_bound(
            float(losses[:, -1].mean()), rademacher.value, cell.n_train, 1.0, cfg.confidence
        )
        convergence = _convergence(state, cfg)
    except CellFailedError:
        raise
    except MetaBoundError as e:
        log.error("Cell failed", error=str(e), error_type=type(e).__name__)
        raise CellFailedError(
            f"cell (sigma={cell.sigma}, N={cell.n_train}, seed={cell.seed_index}) failed: {e}",
            cell.coordinates,
        ) from e

    log.info(
        "Cell finished",
        meta_iters=state.iteration,
        epsilon_gen_abs=gap.epsilon_gen_abs,
        meta_win_fraction=comparison.meta_win_fraction,
    )
    return CellResult(
        cell=cell,
        family_kind=family.family_kind.value,
        gap=gap,
        subopt_gap=subopt,
        meta_iters=state.iteration,
        convergence=convergence,
        comparison=comparison,
        rademacher=rademacher,
        rademacher_bound=bound,
        loss_history=list(state.loss_history),
        grad_norm_history=list(state.grad_norm_history),
    )


def run_comparison(cell: SweepCell, cfg: ExperimentConfig) -> ComparisonReport:
    """Meta-train one cell and compare it against scratch learners only."""
    try:
        family = replicate_family(cfg, cell.sigma, cell.seed_index)
        train, test = make_split(family, cell.n_train, cfg.n_test)
        state = meta_train(train, cfg.meta, cell.derived_seed)
        return compare_meta_vs_scratch(
            state.params,
            test,
            cfg.comparison.lr,
            cfg.comparison.budget,
            cfg.comparison.target_fraction,
        )
    except MetaBoundError as e:
        raise CellFailedError(
            f"comparison at (sigma={cell.sigma}, N={cell.n_train}, seed={cell.seed_index}) "
            f"failed: {e}",
            cell.coordinates,
        ) from e
