import numpy as np
import pytest

from lipdiag.core import ProblemInstance


class Recorder:
    """Objective wrapper that logs every call it receives."""

    def __init__(self, fn):
        self.fn = fn
        self.calls = []

    def __call__(self, x):
        self.calls.append(tuple(float(v) for v in x))
        return self.fn(x)


def unit_problem(fn, n=2, **kw):
    return ProblemInstance(fn, np.zeros(n), np.ones(n), **kw)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
