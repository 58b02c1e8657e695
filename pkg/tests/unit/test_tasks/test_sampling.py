"""Test task sampling and splits."""

import numpy as np
import pytest

from src.exceptions import InvalidArgumentError
from src.mdp.evaluation import validate_mdp
from src.tasks.complexity import estimate_complexity
from src.tasks.family import TaskFamilySpec
from src.tasks.sampling import TaskRole, TaskSet, make_split, sample_task, sample_task_set

GRID = {"family_kind": "perturbed_gridworld", "n_states": 25, "n_actions": 4}


class TestSampleTask:
    """Test per-task generation."""

    def test_sigma_zero_tasks_are_identical(self):
        """The mixture collapses onto the base task."""
        spec = TaskFamilySpec(complexity_sigma=0.0, base_seed=11)
        first, second = sample_task(spec, 0), sample_task(spec, 5)
        assert first.same_as(second)

    def test_deterministic(self):
        """Same spec and index give the same MDP."""
        spec = TaskFamilySpec(complexity_sigma=0.7, base_seed=2)
        assert sample_task(spec, 3).same_as(sample_task(spec, 3))

    def test_sigma_one_tasks_differ(self):
        """Independent tasks have different dynamics."""
        spec = TaskFamilySpec(complexity_sigma=1.0, n_states=5)
        tasks = sample_task_set(spec, [0, 1], TaskRole.TRAIN)
        assert estimate_complexity(tasks).mean_transition_divergence > 1e-6

    def test_sampled_tasks_are_valid(self):
        """Every sampled task passes validation with tight row sums."""
        spec = TaskFamilySpec(complexity_sigma=0.6, base_seed=5)
        for index in range(20):
            mdp = sample_task(spec, index)
            assert validate_mdp(mdp).valid
            np.testing.assert_allclose(mdp.transitions.sum(axis=2), 1.0, atol=1e-12)

    def test_rewards_stay_in_range(self):
        """Perturbed rewards are clamped to the declared range."""
        spec = TaskFamilySpec(complexity_sigma=1.0, reward_range=(0.2, 0.6))
        for index in range(10):
            rewards = sample_task(spec, index).rewards
            assert rewards.min() >= 0.2
            assert rewards.max() <= 0.6

    def test_negative_index_rejected(self):
        """Task indices are counts."""
        with pytest.raises(InvalidArgumentError):
            sample_task(TaskFamilySpec(), -1)


class TestGridworld:
    """Test the gridworld family."""

    def test_structure(self):
        """25 states, start at cell 0, one rewarding goal row."""
        mdp = sample_task(TaskFamilySpec(**GRID, complexity_sigma=0.0), 0)
        assert mdp.shape == (25, 4)
        assert mdp.start_dist[0] == 1.0
        assert validate_mdp(mdp).valid
        goal_rows = np.flatnonzero(mdp.rewards.max(axis=1) > 0.0)
        assert len(goal_rows) == 1
        assert mdp.rewards[goal_rows[0]].max() == 1.0

    def test_walls_bounce(self):
        """Moving up from the top-left corner stays put."""
        mdp = sample_task(TaskFamilySpec(**GRID), 0)
        assert mdp.transitions[0, 0, 0] == pytest.approx(1.0)
        assert mdp.transitions[0, 3, 1] == pytest.approx(0.9)
        assert mdp.transitions[0, 3, 0] == pytest.approx(0.1)

    def test_sigma_zero_identical(self):
        """No relocation or jitter at sigma 0."""
        spec = TaskFamilySpec(**GRID, complexity_sigma=0.0, base_seed=4)
        assert sample_task(spec, 1).same_as(sample_task(spec, 9))


class TestTaskSet:
    """Test task containers and splits."""

    def test_split_indices(self):
        """Train takes [0, N), test takes [N, N + M)."""
        train, test = make_split(TaskFamilySpec(), 4, 2)
        assert train.indices == [0, 1, 2, 3]
        assert test.indices == [4, 5]
        assert train.role is TaskRole.TRAIN
        assert test.role is TaskRole.TEST

    def test_prefix_stability(self):
        """Growing the train set keeps the earlier tasks."""
        spec = TaskFamilySpec(complexity_sigma=0.8, base_seed=9)
        small, _ = make_split(spec, 4, 1)
        large, _ = make_split(spec, 8, 1)
        for a, b in zip(small.mdps, large.mdps[:4]):
            assert a.same_as(b)

    def test_rejects_empty_split(self):
        """Both sides need at least one task."""
        with pytest.raises(InvalidArgumentError):
            make_split(TaskFamilySpec(), 0, 2)

    def test_rejects_unordered_indices(self):
        """Indices must ascend."""
        spec = TaskFamilySpec()
        tasks = ((1, sample_task(spec, 1)), (0, sample_task(spec, 0)))
        with pytest.raises(InvalidArgumentError):
            TaskSet(spec, tasks, TaskRole.TRAIN)

    def test_subset_and_dict(self):
        """Subsets keep index order; to_dict lists every task."""
        train, _ = make_split(TaskFamilySpec(), 4, 1)
        subset = train.subset([3, 1])
        assert subset.indices == [1, 3]
        data = subset.to_dict()
        assert data["role"] == "train"
        assert [task["task_index"] for task in data["tasks"]] == [1, 3]
