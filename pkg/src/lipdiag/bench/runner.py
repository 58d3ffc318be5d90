"""Batch execution of solvers over single problems and generated classes."""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Sequence

from ..adc import RunResult, SolverConfig, minimize
from ..core import ProblemInstance, StopRule
from ..direct import CLASSIC, LOCALLY_BIASED, DirectConfig, direct_run
from .criteria import ClassReport

ALGORITHMS = ("adc", "direct", "directl")
DEFAULT_T_MAX = 1_000_000


def default_delta(dim: int) -> float:
    """Accuracy coefficient used for generated classes of a given dimension."""
    if dim <= 2:
        return 1e-4
    if dim <= 4:
        return 1e-6
    return 1e-7


@dataclass(frozen=True)
class RunSettings:
    algorithm: str = "adc"
    epsilon: float = 1e-4
    t_max: int = DEFAULT_T_MAX

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algorithm!r}; choose from {ALGORITHMS}")


def run_problem(
    problem: ProblemInstance,
    settings: RunSettings,
    delta: float,
    keep_state: bool = False,
) -> RunResult:
    rule = StopRule.for_problem(problem, delta)
    if settings.algorithm == "adc":
        config = SolverConfig(
            epsilon=settings.epsilon,
            t_max=settings.t_max,
            stop_on_target=rule,
            keep_state=keep_state,
        )
        return minimize(problem, config)
    variant = CLASSIC if settings.algorithm == "direct" else LOCALLY_BIASED
    config = DirectConfig(
        epsilon=settings.epsilon, t_max=settings.t_max, variant=variant, stop_on_target=rule
    )
    return direct_run(problem, config)


def _task(args):
    problem, settings, delta = args
    r = run_problem(problem, settings, delta)
    return r.trials, r.intervals, r.solved, r.stop_reason


def run_class(
    problems: Sequence[ProblemInstance],
    settings: RunSettings,
    delta: Optional[float] = None,
    label: str = "",
    params=None,
    jobs: int = 1,
) -> ClassReport:
    """Run every problem and collect the per-problem counts.

    ``delta=None`` picks the per-dimension default. With ``jobs > 1``
    problems are spread over worker processes; results keep input order.
    """
    if not problems:
        return ClassReport(settings.algorithm, label, settings.t_max, params=params)
    dims = {p.dim for p in problems}
    if len(dims) != 1:
        raise ValueError(f"problems of mixed dimension {sorted(dims)}")
    if delta is None:
        delta = default_delta(dims.pop())
    tasks = [(p, settings, delta) for p in problems]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            outcomes: List = list(pool.map(_task, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))
    else:
        outcomes = [_task(t) for t in tasks]
    report = ClassReport(settings.algorithm, label, settings.t_max, params=params)
    for p, (trials, intervals, solved, reason) in zip(problems, outcomes):
        report.problem_ids.append(p.name)
        report.raw_trials.append(trials)
        report.intervals.append(intervals)
        report.solved.append(solved)
        report.stop_reasons.append(reason)
    return report
