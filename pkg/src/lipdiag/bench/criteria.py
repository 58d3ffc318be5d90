"""Class-level comparison metrics over per-problem trial counts."""

import math
from dataclasses import dataclass, field
from typing import List, NamedTuple, Optional, Sequence

import numpy as np


class WinLoss(NamedTuple):
    p: int  # problems where the other run needed fewer trials
    q: int  # problems where this run needed fewer trials
    ties: int


def clamp_trials(trials: Sequence[int], solved: Sequence[bool], t_max: int) -> np.ndarray:
    """Unsolved problems count as exactly ``t_max`` trials."""
    t = np.asarray(trials, dtype=np.int64).copy()
    s = np.asarray(solved, dtype=bool)
    if t.shape != s.shape:
        raise ValueError("trials and solved flags differ in length")
    t[~s] = t_max
    return t


def worst_index(trials: Sequence[int]) -> int:
    """0-based index of the problem needing most trials (first on ties)."""
    if len(trials) == 0:
        raise ValueError("empty class")
    return int(np.argmax(np.asarray(trials)))


def c1(trials: Sequence[int]) -> int:
    return int(np.asarray(trials)[worst_index(trials)])


def c2(trials: Sequence[int], intervals: Sequence[int]) -> int:
    """Interval count of the problem selected by :func:`c1`."""
    if len(trials) != len(intervals):
        raise ValueError("trials and intervals differ in length")
    return int(np.asarray(intervals)[worst_index(trials)])


def c3(trials: Sequence[int]) -> float:
    if len(trials) == 0:
        raise ValueError("empty class")
    return float(np.mean(np.asarray(trials, dtype=np.float64)))


def c4(trials: Sequence[int], reference: Sequence[int]) -> WinLoss:
    """Compare ``reference`` against ``trials`` problem by problem."""
    a = np.asarray(trials)
    b = np.asarray(reference)
    if a.shape != b.shape:
        raise ValueError(f"class sizes differ: {a.size} vs {b.size}")
    p = int(np.sum(b < a))
    q = int(np.sum(a < b))
    return WinLoss(p, q, a.size - p - q)


def half_quantile(trials: Sequence[int]) -> int:
    """Smallest budget that solves at least half the class."""
    t = np.sort(np.asarray(trials))
    if t.size == 0:
        raise ValueError("empty class")
    return int(t[math.ceil(t.size / 2) - 1])


@dataclass
class ClassReport:
    algorithm: str
    label: str
    t_max: int
    problem_ids: List[str] = field(default_factory=list)
    raw_trials: List[int] = field(default_factory=list)
    intervals: List[int] = field(default_factory=list)
    solved: List[bool] = field(default_factory=list)
    stop_reasons: List[str] = field(default_factory=list)
    params: Optional[object] = None

    def __len__(self):
        return len(self.problem_ids)

    @property
    def trials(self) -> np.ndarray:
        return clamp_trials(self.raw_trials, self.solved, self.t_max)

    @property
    def solved_count(self) -> int:
        return int(sum(self.solved))

    @property
    def all_solved(self) -> bool:
        return all(self.solved)

    @property
    def s_star(self) -> int:
        """1-based index of the worst problem."""
        return worst_index(self.trials) + 1

    @property
    def C1(self) -> int:
        return c1(self.trials)

    @property
    def C2(self) -> int:
        return c2(self.trials, self.intervals)

    @property
    def C3(self) -> float:
        return c3(self.trials)

    @property
    def half(self) -> int:
        return half_quantile(self.trials)

    def C4(self, reference: "ClassReport") -> WinLoss:
        return c4(self.trials, reference.trials)
