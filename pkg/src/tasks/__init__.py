"""Task distributions: seeded families, splits and complexity proxies."""

from .complexity import ComplexityEstimate, estimate_complexity
from .family import FamilyKind, TaskFamilySpec
from .sampling import TaskRole, TaskSet, make_split, sample_task, sample_task_set

__all__ = [
    "FamilyKind",
    "TaskFamilySpec",
    "TaskRole",
    "TaskSet",
    "ComplexityEstimate",
    "sample_task",
    "sample_task_set",
    "make_split",
    "estimate_complexity",
]
