import math

import numpy as np
import pytest

from lipdiag.adc import (
    NEW_RECORD,
    REPEAT_LOCAL,
    TO_GLOBAL,
    DiagonalSolver,
    SolverConfig,
    local_upper,
    middle_group,
    minimize,
    sufficient_improvement,
    switch_decision,
)
from lipdiag.core import ProblemInstance, StopRule
from lipdiag.testbed import classic

from conftest import Recorder, unit_problem


class Scripted:
    """Returns ``changes[i]`` on the i-th call (0-based), else ``default``."""

    def __init__(self, changes, default=1.0):
        self.changes = dict(changes)
        self.default = default
        self.calls = 0

    def __call__(self, x):
        v = self.changes.get(self.calls, self.default)
        self.calls += 1
        return v


def traced(fn, n=2, t_max=40):
    solver = DiagonalSolver(unit_problem(fn, n), SolverConfig(t_max=t_max, record_trace=True))
    return solver, solver.run()


def rows(result, count):
    return [
        (t.k, t.step, t.lo, t.hi, t.Q, t.p, t.p_prime, t.f_min_prec, t.subdivided)
        for t in result.trace[:count]
    ]


# -- pure step rules ------------------------------------------------------


def test_worked_group_indices():
    assert middle_group(10, 15) == 13
    assert local_upper(15, 10) == 14
    assert middle_group(7, 7) == 7
    assert local_upper(10, 10) == 10


def test_sufficient_improvement():
    assert sufficient_improvement(-1.02, -1.0)
    assert sufficient_improvement(-1.01, -1.0)  # exactly 1%
    assert sufficient_improvement(0.99, 1.0)
    assert not sufficient_improvement(-1.005, -1.0)
    assert not sufficient_improvement(0.0, 0.0)
    assert sufficient_improvement(-1e-12, 0.0)


def test_switch_decision_branches():
    assert switch_decision(-1.02, -1.0, p=3, q=1, Q=5) == NEW_RECORD
    assert switch_decision(-1.0, -1.0, p=3, q=1, Q=5) == REPEAT_LOCAL
    assert switch_decision(-1.0, -1.0, p=4, q=4, Q=4) == REPEAT_LOCAL
    assert switch_decision(-1.0, -1.0, p=5, q=1, Q=5) == TO_GLOBAL


class FixedRange(DiagonalSolver):
    """Solver with pinned q and Q that only records the requested ranges."""

    def __init__(self, q, Q, p, improve_at=None):
        super().__init__(unit_problem(lambda x: 0.0), SolverConfig())
        self._q, self._Q = q, Q
        self.p = p
        self.f_min = self.f_min_prec = -1.0
        self.calls = []
        self.improve_at = improve_at

    q = property(lambda self: self._q)
    Q = property(lambda self: self._Q)

    def subdivide_range(self, step, hi):
        self.calls.append((step, self.q, hi))
        if len(self.calls) == self.improve_at:
            self.f_min = -2.0
        if len(self.calls) > 100:
            raise RuntimeError("runaway")
        return []


def test_worked_example_local_ranges():
    s = FixedRange(q=10, Q=20, p=15)
    s.local_phase()
    assert s.calls == [("2.3", 10, 14), ("2.3", 10, 14), ("2.5", 10, 15)]


def test_worked_example_global_ranges():
    n = 2
    s = FixedRange(q=10, Q=20, p=15, improve_at=2 ** (n + 1) + 1 + 3)
    s.global_phase()
    assert s.calls[0] == ("4.3", 10, 13)
    assert [c[0] for c in s.calls] == ["4.3"] * 8 + ["4.6"] + ["4.3"] * 3
    assert s.calls[8] == ("4.6", 10, 15)
    assert s.decisions == [] and s.f_min == -2.0


def test_global_phase_first_substep_improvement_returns():
    s = FixedRange(q=10, Q=20, p=15, improve_at=1)
    s.config.record_trace = True
    s.global_phase()
    assert s.calls == [("4.3", 10, 13)]
    assert s.decisions == [(1, "4.4:local")]


def test_global_phase_widened_step_improvement_returns():
    s = FixedRange(q=10, Q=20, p=15, improve_at=9)
    s.config.record_trace = True
    s.global_phase()
    assert s.calls[-1] == ("4.6", 10, 15) and len(s.calls) == 9
    assert s.decisions == [(1, "4.7:local")]


# -- hand-traced runs on scripted objectives ---------------------------------
# Each row: k, step, q, upper group, Q, p, p', f_prec, subdivided ids; q, Q
# and p are taken at the start of the iteration.

CONSTANT_TABLE = [
    (1, "2.3", 0, 0, 0, 0, 0, 1.0, [1]),
    (2, "2.3", 1, 1, 1, 1, 0, 1.0, [1]),
    (3, "2.5", 1, 1, 2, 1, 1, 1.0, [2]),
    (4, "4.3", 1, 2, 2, 2, 2, 1.0, [3]),
    (5, "4.3", 2, 2, 2, 2, 2, 1.0, [1]),
    (6, "4.3", 2, 2, 3, 2, 2, 1.0, [2]),
    (7, "4.3", 2, 2, 3, 2, 2, 1.0, [3]),
    (8, "4.3", 2, 2, 3, 2, 2, 1.0, [4]),
    (9, "4.3", 2, 2, 3, 2, 2, 1.0, [5]),
    (10, "4.3", 2, 2, 3, 2, 2, 1.0, [6]),
    (11, "4.3", 2, 2, 3, 3, 2, 1.0, [7]),
    (12, "4.6", 2, 2, 3, 3, 2, 1.0, [8]),
    (13, "4.3", 2, 3, 3, 3, 3, 1.0, [9]),
]


def test_constant_objective_state_table():
    _, r = traced(lambda x: 1.0)
    assert rows(r, 13) == CONSTANT_TABLE
    assert r.decisions[:2] == [(4, "3:global"), (13, "4.7:repeat")]


REPEAT_TABLE = [
    (1, "2.3", 0, 0, 0, 0, 0, 1.0, [1]),
    (2, "2.3", 1, 1, 1, 1, 0, 1.0, [1]),
    (3, "2.5", 1, 1, 2, 1, 1, 1.0, [2]),
    (4, "4.3", 1, 2, 2, 2, 2, 1.0, [3]),
    (5, "4.3", 2, 2, 2, 2, 2, 1.0, [1]),
    (6, "2.3", 2, 2, 3, 3, 3, 0.5, [2]),
    (7, "2.3", 2, 2, 3, 3, 3, 0.5, [3]),
    (8, "2.5", 2, 3, 3, 3, 3, 0.5, [1, 4]),
    (9, "2.3", 2, 2, 4, 3, 3, 0.5, [5]),
    (10, "2.3", 2, 2, 4, 3, 3, 0.5, [6]),
    (11, "2.5", 2, 3, 4, 3, 3, 0.5, [4, 7]),
    (12, "4.3", 2, 3, 4, 4, 4, 0.499, [19, 8]),
]


def test_local_repeat_state_table():
    # a 1% gain at the 9th trial, then a smaller gain at the 17th that
    # leaves the record box larger than the smallest box
    _, r = traced(Scripted({8: 0.5, 16: 0.499}))
    assert rows(r, 12) == REPEAT_TABLE
    assert r.decisions[:4] == [
        (4, "3:global"),
        (6, "4.4:local"),
        (9, "3:local-repeat"),
        (12, "3:global"),
    ]


def test_new_record_after_local_pass():
    _, r = traced(Scripted({2: 0.5}))
    assert r.decisions[0] == (4, "3:local-new-record")
    assert r.trace[3].f_min_prec == 0.5 and r.trace[3].step == "2.3"


def test_improvement_in_widened_global_step():
    _, r = traced(Scripted({18: 0.5}))
    assert (12, "4.6") == (r.trace[11].k, r.trace[11].step)
    assert (13, "4.7:local") in r.decisions
    assert r.trace[12].step == "2.3" and r.trace[12].f_min_prec == 0.5


def test_improvement_in_first_global_step():
    _, r = traced(Scripted({7: 0.5}))
    assert r.decisions[:2] == [(4, "3:global"), (5, "4.4:local")]


def test_every_branch_is_reached():
    labels = set()
    for script in ({}, {2: 0.5}, {7: 0.5}, {18: 0.5}, {8: 0.5, 16: 0.499}):
        _, r = traced(Scripted(script))
        labels |= {label for _, label in r.decisions}
    assert labels == {
        "3:local-new-record",
        "3:local-repeat",
        "3:global",
        "4.4:local",
        "4.7:local",
        "4.7:repeat",
    }


# -- run-level behaviour ----------------------------------------------------


def test_initialize_record():
    s = DiagonalSolver(unit_problem(lambda x: float(x[0])), SolverConfig())
    s.initialize()
    assert s.f_min == 0.0 and s.x_min == (0, 0)
    assert (s.q, s.Q, s.p) == (0, 0, 0) and s.f_min_prec == 0.0
    s = DiagonalSolver(unit_problem(lambda x: 3.0), SolverConfig())
    s.initialize()
    assert s.x_min == (0, 0)
    prob = classic("branin")
    s = DiagonalSolver(prob, SolverConfig())
    s.initialize()
    assert s.f_min == min(prob(prob.lower), prob(prob.upper))


def test_constant_objective_runs_to_budget():
    s = DiagonalSolver(unit_problem(lambda x: 2.0), SolverConfig(t_max=50))
    r = s.run()
    assert r.stop_reason == "budget" and not r.solved
    assert r.best_value == 2.0 and np.array_equal(r.best_point, [0.0, 0.0])
    assert r.intervals == 1 + 2 * s.partition.subdivisions
    assert 50 <= r.trials <= 52


def test_ternary_minimizer_is_hit_exactly():
    c = np.array([1 / 3, 1 / 3])
    prob = ProblemInstance(lambda x: float(np.sum((x - c) ** 2)), np.zeros(2), np.ones(2), known_minimizers=(c,))
    r = minimize(prob, t_max=10_000, stop_on_target=StopRule.for_problem(prob, 1e-4))
    assert r.solved
    s = DiagonalSolver(prob, SolverConfig(t_max=2000))
    s.run()
    assert (3**38, 3**38) in s.db


def test_branin_target():
    prob = classic("branin")
    r = minimize(prob, t_max=100_000, stop_on_target=StopRule.for_problem(prob, 1e-4))
    assert r.solved and r.trials <= 3 * 76


def test_run_invariants():
    prob = classic("six_hump_camel")
    rec = Recorder(prob.objective)
    prob = ProblemInstance(rec, prob.lower, prob.upper)
    s = DiagonalSolver(prob, SolverConfig(t_max=3000, record_trace=True))
    r = s.run()
    assert len(rec.calls) == len(set(rec.calls)) == s.counter.evaluations
    assert s.f_min == s.db.min_value()
    prev_q = prev_Q = -1
    prev_f = math.inf
    for t in r.trace:
        assert t.subdivided, "every iteration subdivides at least one box"
        assert t.q <= t.p <= t.Q
        assert t.q >= prev_q and t.Q >= prev_Q
        assert t.f_min <= prev_f
        prev_q, prev_Q, prev_f = t.q, t.Q, t.f_min
    assert r.trials <= 3000 + 2


def test_record_box_is_smallest_holder():
    s = DiagonalSolver(classic("shubert"), SolverConfig(t_max=1500))
    s.run()
    holders = s.partition.containing(s.x_min)
    assert s.d_min in holders
    assert s.d_min.group == max(h.group for h in holders)
    corners = {tuple(c) for c in np.array(np.meshgrid(*zip(s.d_min.lower, s.d_min.upper))).T.reshape(-1, 2)}
    assert s.x_min in corners


def test_deterministic_traces():
    prob = classic("goldstein_price")
    a = minimize(prob, t_max=800, record_trace=True)
    b = minimize(prob, t_max=800, record_trace=True)
    assert a.trace == b.trace and a.decisions == b.decisions
    assert a.best_value == b.best_value


def test_absolute_xi_and_config_errors():
    prob = classic("branin")
    r = minimize(prob, t_max=500, xi_mode="absolute", epsilon=1e-3)
    assert r.trials >= 500
    with pytest.raises(ValueError):
        SolverConfig(epsilon=-1)
    with pytest.raises(ValueError):
        SolverConfig(xi_mode="other")
    with pytest.raises(ValueError):
        SolverConfig(t_max=1)
    with pytest.raises(TypeError):
        minimize(prob, SolverConfig(), t_max=5)


def test_state_only_kept_on_request():
    prob = classic("branin")
    assert minimize(prob, t_max=100).state is None
    assert isinstance(minimize(prob, t_max=100, keep_state=True).state, DiagonalSolver)


def test_density_surrogate_on_constant():
    s = DiagonalSolver(unit_problem(lambda x: 0.0), SolverConfig(t_max=10_000, record_trace=True))
    r = s.run()
    qs = [t.q for t in r.trace]
    assert sum(b > a for a, b in zip(qs, qs[1:])) >= 3
    largest = max(s.partition.diagonal(h) for h in s.partition.intervals.values())
    assert largest < 0.5 * math.sqrt(2)
