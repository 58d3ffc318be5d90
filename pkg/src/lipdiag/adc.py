"""Two-phase diagonal global optimizer.

The solver alternates a local phase, which refines boxes no smaller than the
one holding the current record, and a global phase, which works on the
larger half of the group range. A phase switch to local happens whenever
the record improves by at least 1%.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from .core import (
    EvaluationCounter,
    ProblemInstance,
    StopRule,
    from_unit_cube,
    target_hit,
)
from .geometry import MAX_DEPTH, Hyperinterval, Key, Partition, key_to_point
from .selection import improvement_filter, non_dominated
from .vertex_db import VertexDatabase

log = logging.getLogger(__name__)

LOCAL = "local"
GLOBAL = "global"

# outcomes of the post-local-phase switch
NEW_RECORD = "local-new-record"
REPEAT_LOCAL = "local-repeat"
TO_GLOBAL = "global"


@dataclass
class SolverConfig:
    epsilon: float = 1e-4
    xi_mode: str = "relative"
    t_max: int = 100_000
    max_depth: int = MAX_DEPTH
    stop_on_target: Optional[StopRule] = None
    record_trace: bool = False
    # return the solver object in RunResult.state (not picklable across processes)
    keep_state: bool = False

    def __post_init__(self):
        if self.epsilon < 0:
            raise ValueError("epsilon must be non-negative")
        if self.xi_mode not in ("relative", "absolute"):
            raise ValueError("xi_mode must be 'relative' or 'absolute'")
        if self.t_max < 2:
            raise ValueError("t_max must be at least 2")

    def xi(self, f_min: float) -> float:
        if self.xi_mode == "relative":
            return self.epsilon * abs(f_min)
        return self.epsilon


@dataclass
class IterationRecord:
    k: int
    step: str
    lo: int
    hi: int
    q: int
    Q: int
    p: int
    p_prime: int
    f_min: float
    f_min_prec: float
    subdivided: List[int]
    evaluations: int


@dataclass
class RunResult:
    best_value: float
    best_point: np.ndarray
    trials: int
    intervals: int
    stop_reason: str
    iterations: int
    db_hits: int = 0
    trace: List[IterationRecord] = field(default_factory=list, repr=False)
    decisions: List[tuple] = field(default_factory=list, repr=False)
    state: object = field(default=None, repr=False)

    @property
    def solved(self) -> bool:
        return self.stop_reason == "target"


class _Stop(Exception):
    def __init__(self, reason):
        self.reason = reason


def sufficient_improvement(f_min: float, f_min_prec: float) -> bool:
    """Record improved by at least 1% of its magnitude at the phase start.

    At ``f_min_prec == 0`` the 1% margin vanishes; a strict decrease is
    required so an unchanged zero record does not count.
    """
    if f_min_prec == 0.0:
        return f_min < 0.0
    return f_min <= f_min_prec - 0.01 * abs(f_min_prec)


def switch_decision(f_min, f_min_prec, p, q, Q) -> str:
    if sufficient_improvement(f_min, f_min_prec):
        return NEW_RECORD
    if p < Q or q == Q:
        return REPEAT_LOCAL
    return TO_GLOBAL


def local_upper(p_prime: int, q: int) -> int:
    """Upper group for the narrow local sub-steps."""
    return max(p_prime - 1, q)


def middle_group(q: int, p_prime: int) -> int:
    """Separator between large and small boxes for the global sub-steps."""
    return (q + p_prime + 1) // 2


class DiagonalSolver:
    """Mutable run state; drive it with :meth:`run`."""

    def __init__(self, problem: ProblemInstance, config: SolverConfig):
        self.problem = problem
        self.config = config
        self.N = problem.dim
        self.partition = Partition(self.N, config.max_depth)
        self.counter = EvaluationCounter()
        self.db = VertexDatabase(
            problem, self.partition.scale, self.counter, self._on_evaluate
        )
        self.k = 1
        self.f_min = math.inf
        self.x_min: Optional[Key] = None
        self.f_min_prec = math.inf
        self.phase = LOCAL
        self.p = 0
        self.p_prime = 0
        self.p_dprime = 0
        self.r_prime = 0
        self.d_min: Optional[Hyperinterval] = None
        self.hit_trial: Optional[int] = None
        self.trace: List[IterationRecord] = []
        self.decisions: List[tuple] = []
        self._record_moved = False

    # -- bookkeeping ----------------------------------------------------

    def _on_evaluate(self, key: Key, value: float):
        if value < self.f_min:
            self.f_min = value
            self.x_min = key
            self._record_moved = True
        rule = self.config.stop_on_target
        if rule is not None and self.hit_trial is None:
            x = from_unit_cube(self.problem, key_to_point(key, self.partition.scale))
            if target_hit(x, rule):
                self.hit_trial = self.counter.evaluations

    def _locate_record(self):
        boxes = self.partition.containing(self.x_min)
        self.d_min = max(boxes, key=lambda h: (h.group, -h.id))
        self.p = self.d_min.group

    @property
    def q(self) -> int:
        return self.partition.q

    @property
    def Q(self) -> int:
        return self.partition.Q

    @property
    def trials(self) -> int:
        return self.counter.evaluations

    def _check_stop(self):
        if self.hit_trial is not None:
            raise _Stop("target")
        if self.counter.evaluations >= self.config.t_max:
            raise _Stop("budget")

    # -- steps ----------------------------------------------------------

    def initialize(self):
        """Evaluate both cube corners and build the root box."""
        n = self.N
        fa = self.db((0,) * n)
        fb = self.db((self.partition.scale,) * n)
        self.partition.add_root(fa, fb)
        self._locate_record()
        self._record_moved = False
        self.k = 1
        self.f_min_prec = self.f_min
        self.p_prime = self.p_dprime = self.r_prime = 0
        self._check_stop()

    def subdivide_range(self, step: str, hi: int) -> List[int]:
        """One iteration: subdivide filter-passing hull boxes of groups [q, hi]."""
        part = self.partition
        part.begin_iteration()
        lo = part.q
        Q0, p0 = part.Q, self.p
        entries = improvement_filter(
            non_dominated(part, lo, hi), self.f_min, self.config.xi(self.f_min)
        )
        done = []
        try:
            for e in entries:
                h = part.intervals[e.point.interval_id]
                touches_record = h.contains(self.x_min)
                part.subdivide(h, self.db)
                done.append(h.id)
                if self._record_moved or touches_record:
                    self._locate_record()
                    self._record_moved = False
                self._check_stop()
        finally:
            if self.config.record_trace:
                self.trace.append(
                    IterationRecord(
                        self.k, step, lo, hi, lo, Q0, p0, self.p_prime,
                        self.f_min, self.f_min_prec, done, self.counter.evaluations,
                    )
                )
            self.k += 1
        return done

    def _decide(self, label: str):
        if self.config.record_trace:
            self.decisions.append((self.k, label))

    def local_phase(self):
        """Run the local loop once: N narrow sub-steps, then one widened."""
        self.phase = LOCAL
        lcounter = 1
        self.p_prime = self.p
        while True:
            self.p_dprime = local_upper(self.p_prime, self.q)
            self.subdivide_range("2.3", self.p_dprime)
            lcounter += 1
            if lcounter > self.N:
                break
        self.p_prime = max(self.p_prime, self.q)
        self.subdivide_range("2.5", self.p_prime)

    def global_phase(self) -> None:
        """Run global loops until the record improves enough."""
        self.phase = GLOBAL
        self.f_min_prec = self.f_min
        while True:
            gcounter = 1
            self.p_prime = self.p
            while True:
                self.p_prime = max(self.p_prime, self.q)
                self.r_prime = middle_group(self.q, self.p_prime)
                self.subdivide_range("4.3", self.r_prime)
                if sufficient_improvement(self.f_min, self.f_min_prec):
                    self._decide("4.4:local")
                    return
                gcounter += 1
                if gcounter > 2 ** (self.N + 1):
                    break
            self.p_prime = max(self.p_prime, self.q)
            self.subdivide_range("4.6", self.p_prime)
            if sufficient_improvement(self.f_min, self.f_min_prec):
                self._decide("4.7:local")
                return
            self._decide("4.7:repeat")

    def run(self) -> RunResult:
        reason = "budget"
        try:
            self.initialize()
            while True:
                self.f_min_prec = self.f_min
                while True:
                    self.local_phase()
                    choice = switch_decision(
                        self.f_min, self.f_min_prec, self.p, self.q, self.Q
                    )
                    self._decide("3:" + choice)
                    if choice == NEW_RECORD:
                        self.f_min_prec = self.f_min
                    elif choice == TO_GLOBAL:
                        break
                self.global_phase()
        except _Stop as stop:
            reason = stop.reason
        return self.result(reason)

    def result(self, reason: str) -> RunResult:
        trials = self.hit_trial if reason == "target" else self.counter.evaluations
        best = from_unit_cube(self.problem, key_to_point(self.x_min, self.partition.scale))
        return RunResult(
            best_value=self.f_min,
            best_point=best,
            trials=trials,
            intervals=len(self.partition),
            stop_reason=reason,
            iterations=self.k - 1,
            db_hits=self.counter.db_hits,
            trace=self.trace,
            decisions=self.decisions,
            state=self if self.config.keep_state else None,
        )


def minimize(problem: ProblemInstance, config: Optional[SolverConfig] = None, **kw) -> RunResult:
    """Run the two-phase diagonal solver on ``problem``."""
    if config is None:
        config = SolverConfig(**kw)
    elif kw:
        raise TypeError("pass either a config or keyword overrides, not both")
    return DiagonalSolver(problem, config).run()
