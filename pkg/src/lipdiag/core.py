"""Problem definition, box normalization and evaluation accounting."""

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np


class DomainError(ValueError):
    """A point lies outside the admissible box."""


class EvaluationError(RuntimeError):
    """The objective returned a non-finite value."""

    def __init__(self, point, value):
        super().__init__(f"objective returned {value!r} at {list(point)!r}")
        self.point = np.asarray(point, dtype=float)
        self.value = value


class CapacityError(OverflowError):
    """Exact ternary coordinates ran out of depth."""


@dataclass(frozen=True, eq=False)
class ProblemInstance:
    """A box-constrained black-box minimization problem.

    ``known_minimizers`` holds every global minimizer the harness should
    accept for the target stopping rule; ``known_minimizer`` is the first
    of them.
    """

    objective: Callable[[np.ndarray], float]
    lower: np.ndarray
    upper: np.ndarray
    name: str = "problem"
    known_minimizers: tuple = ()
    known_minimum: Optional[float] = None

    def __post_init__(self):
        lower = np.array(self.lower, dtype=float).reshape(-1)
        upper = np.array(self.upper, dtype=float).reshape(-1)
        if lower.shape != upper.shape or lower.size == 0:
            raise ValueError("bounds must be non-empty vectors of equal length")
        if not np.all(lower < upper):
            raise ValueError("every lower bound must be strictly below its upper bound")
        lower.flags.writeable = False
        upper.flags.writeable = False
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)
        mins = []
        for x in self.known_minimizers:
            x = np.array(x, dtype=float).reshape(-1)
            if x.shape != lower.shape:
                raise ValueError("known minimizer has the wrong dimension")
            if np.any(x < lower) or np.any(x > upper):
                raise ValueError(f"known minimizer {x} lies outside the box")
            x.flags.writeable = False
            mins.append(x)
        object.__setattr__(self, "known_minimizers", tuple(mins))

    @property
    def dim(self) -> int:
        return self.lower.size

    @property
    def known_minimizer(self) -> Optional[np.ndarray]:
        return self.known_minimizers[0] if self.known_minimizers else None

    def __call__(self, x) -> float:
        return float(self.objective(np.asarray(x, dtype=float)))


@dataclass
class EvaluationCounter:
    evaluations: int = 0
    db_hits: int = 0

    @property
    def lookups(self) -> int:
        return self.evaluations + self.db_hits


def to_unit_cube(problem: ProblemInstance, p) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if p.shape != problem.lower.shape:
        raise DomainError(f"point has shape {p.shape}, expected {problem.lower.shape}")
    if np.any(p < problem.lower) or np.any(p > problem.upper):
        raise DomainError(f"point {p} lies outside [{problem.lower}, {problem.upper}]")
    return (p - problem.lower) / (problem.upper - problem.lower)


def from_unit_cube(problem: ProblemInstance, y) -> np.ndarray:
    y = np.asarray(y, dtype=float)
    return problem.lower + y * (problem.upper - problem.lower)


def evaluate(problem: ProblemInstance, y, counter: EvaluationCounter) -> float:
    """Evaluate the objective at unit-cube point ``y``, counting the trial."""
    y = np.asarray(y, dtype=float)
    if np.any(y < 0.0) or np.any(y > 1.0):
        raise DomainError(f"unit-cube point {y} outside [0, 1]^N")
    x = from_unit_cube(problem, y)
    value = problem(x)
    if not np.isfinite(value):
        raise EvaluationError(x, value)
    counter.evaluations += 1
    return value


@dataclass(frozen=True)
class StopRule:
    """Known-minimizer stopping rule used by the benchmark harness.

    A trial ``x`` hits the target when every coordinate is within
    ``delta ** (1/N) * (b - a)`` of some known global minimizer.
    """

    delta: float
    minimizers: tuple
    lower: np.ndarray = field(repr=False, default=None)
    upper: np.ndarray = field(repr=False, default=None)

    def __post_init__(self):
        if not 0.0 < self.delta <= 1.0:
            raise ValueError("delta must lie in (0, 1]")
        if not self.minimizers:
            raise ValueError("a stopping rule needs at least one known minimizer")

    @classmethod
    def for_problem(cls, problem: ProblemInstance, delta: float) -> "StopRule":
        return cls(delta, problem.known_minimizers, problem.lower, problem.upper)

    @property
    def tolerance(self) -> np.ndarray:
        n = len(self.minimizers[0])
        width = np.ones(n) if self.lower is None else self.upper - self.lower
        return self.delta ** (1.0 / n) * width


def target_hit(x, rule: StopRule) -> bool:
    x = np.asarray(x, dtype=float)
    tol = rule.tolerance
    for xs in rule.minimizers:
        if np.all(np.abs(x - xs) <= tol):
            return True
    return False

