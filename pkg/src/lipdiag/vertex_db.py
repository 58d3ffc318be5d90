"""Memoized objective values keyed by exact vertex coordinates."""

from typing import Callable, Dict, Optional

from .core import EvaluationCounter, ProblemInstance, evaluate
from .geometry import Key, key_to_point


class VertexDatabase:
    """Each vertex is evaluated at most once per run.

    ``on_evaluate(key, value)`` fires after every fresh evaluation; solvers
    use it for record keeping and the harness target check.
    """

    def __init__(
        self,
        problem: ProblemInstance,
        scale: int,
        counter: Optional[EvaluationCounter] = None,
        on_evaluate: Optional[Callable[[Key, float], None]] = None,
    ):
        self.problem = problem
        self.scale = scale
        self.counter = counter if counter is not None else EvaluationCounter()
        self.on_evaluate = on_evaluate
        self._values: Dict[Key, float] = {}

    def __len__(self):
        return len(self._values)

    def __contains__(self, key: Key) -> bool:
        return key in self._values

    def get_or_evaluate(self, key: Key) -> float:
        value = self._values.get(key)
        if value is not None:
            self.counter.db_hits += 1
            return value
        value = evaluate(self.problem, key_to_point(key, self.scale), self.counter)
        self._values[key] = value
        if self.on_evaluate is not None:
            self.on_evaluate(key, value)
        return value

    __call__ = get_or_evaluate

    def items(self):
        return self._values.items()

    def min_value(self) -> float:
        return min(self._values.values())
