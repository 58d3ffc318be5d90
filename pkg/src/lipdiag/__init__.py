"""Diagonal-partition Lipschitz global optimization with DIRECT baselines."""

from ._accel import NUMBA_ENABLED
from .core import (
    CapacityError,
    DomainError,
    EvaluationCounter,
    EvaluationError,
    ProblemInstance,
    StopRule,
    evaluate,
    from_unit_cube,
    target_hit,
    to_unit_cube,
)

__version__ = "0.1.0"

__all__ = [
    "NUMBA_ENABLED",
    "CapacityError",
    "DomainError",
    "EvaluationCounter",
    "EvaluationError",
    "ProblemInstance",
    "StopRule",
    "evaluate",
    "from_unit_cube",
    "target_hit",
    "to_unit_cube",
]
