"""Center-sampling DIRECT and its locally biased variant.

Centers of trisection cells are ``odd / (2 * 3**h)``; they are stored as
integers over ``2 * 3**max_depth`` so every center is exact.
"""

import heapq
import math
from dataclasses import dataclass
from typing import Dict, List, Optional

from .adc import RunResult, _Stop
from .core import CapacityError, EvaluationCounter, ProblemInstance, StopRule, from_unit_cube, target_hit
from .geometry import MAX_DEPTH, DiagramPoint, key_to_point
from .selection import hull, improvement_filter
from .vertex_db import VertexDatabase

CLASSIC = "classic"
LOCALLY_BIASED = "locally_biased"


@dataclass
class DirectConfig:
    epsilon: float = 1e-4
    t_max: int = 100_000
    variant: str = CLASSIC
    max_depth: int = MAX_DEPTH
    stop_on_target: Optional[StopRule] = None
    # False trisects only the first longest side
    split_all_longest: bool = True
    # True divides every minimum-f box of a size class, not just the oldest
    divide_ties: bool = False

    def __post_init__(self):
        if self.variant not in (CLASSIC, LOCALLY_BIASED):
            raise ValueError(f"unknown DIRECT variant {self.variant!r}")
        if self.epsilon < 0:
            raise ValueError("epsilon must be non-negative")
        if self.t_max < 1:
            raise ValueError("t_max must be positive")


class CenterBox:
    __slots__ = ("id", "center", "depths", "f", "serial")

    def __init__(self, id, center, depths, f, serial):
        self.id = id
        self.center = center
        self.depths = depths
        self.f = f
        self.serial = serial

    def __repr__(self):
        return f"CenterBox(id={self.id}, depths={self.depths}, f={self.f})"


class DirectSolver:
    def __init__(self, problem: ProblemInstance, config: DirectConfig):
        if not 1 <= config.max_depth <= MAX_DEPTH:
            raise ValueError(f"max_depth must be in [1, {MAX_DEPTH}]")
        self.problem = problem
        self.config = config
        self.N = problem.dim
        self.H = config.max_depth
        self.scale = 2 * 3**self.H
        self.counter = EvaluationCounter()
        self.db = VertexDatabase(problem, self.scale, self.counter, self._on_evaluate)
        self.boxes: Dict[int, CenterBox] = {}
        self._groups: Dict[int, list] = {}
        self._sizes: Dict[int, int] = {}
        self._serial = 0
        self._next_id = 1
        self.f_min = math.inf
        self.x_min = None
        self.hit_trial: Optional[int] = None
        self.iterations = 0
        self.selected_per_iteration: List[List[int]] = []

    def _on_evaluate(self, key, value):
        if value < self.f_min:
            self.f_min = value
            self.x_min = key
        rule = self.config.stop_on_target
        if rule is not None and self.hit_trial is None:
            x = from_unit_cube(self.problem, key_to_point(key, self.scale))
            if target_hit(x, rule):
                self.hit_trial = self.counter.evaluations

    def _check_stop(self):
        if self.hit_trial is not None:
            raise _Stop("target")
        if self.counter.evaluations >= self.config.t_max:
            raise _Stop("budget")

    # -- size classes ---------------------------------------------------

    def measure_key(self, depths) -> int:
        """Exact ordering key of the box measure (larger key, larger box)."""
        if self.config.variant == CLASSIC:
            return sum(9 ** (self.H - k) for k in depths)
        return self.H - min(depths)

    def measure(self, depths) -> float:
        if self.config.variant == CLASSIC:
            return 0.5 * math.sqrt(sum(9.0 ** (-k) for k in depths))
        return 0.5 * 3.0 ** (-min(depths))

    def _add(self, center, depths, f) -> CenterBox:
        self._serial += 1
        box = CenterBox(self._next_id, center, depths, f, self._serial)
        self._next_id += 1
        self.boxes[box.id] = box
        key = self.measure_key(depths)
        heapq.heappush(self._groups.setdefault(key, []), (f, box.id, box.serial))
        self._sizes[key] = self._sizes.get(key, 0) + 1
        return box

    def _remove(self, box: CenterBox):
        del self.boxes[box.id]
        self._sizes[self.measure_key(box.depths)] -= 1

    def _rep(self, key) -> Optional[CenterBox]:
        heap = self._groups.get(key)
        while heap:
            _, id, serial = heap[0]
            b = self.boxes.get(id)
            if b is not None and b.serial == serial:
                return b
            heapq.heappop(heap)
        return None

    def _ties(self, key, rep: CenterBox) -> List[CenterBox]:
        heap = self._groups[key]
        out = []
        for f, id, serial in sorted(e for e in heap if e[0] == rep.f):
            b = self.boxes.get(id)
            if b is not None and b.serial == serial:
                out.append(b)
        return out

    def potentially_optimal(self) -> List[DiagramPoint]:
        """Hull dots (one per size class) that pass the epsilon test."""
        pts = []
        for key, size in self._sizes.items():
            if size:
                rep = self._rep(key)
                pts.append(DiagramPoint(self.measure(rep.depths), rep.f, key, rep.id))
        xi = self.config.epsilon * abs(self.f_min)
        return [e.point for e in improvement_filter(hull(pts), self.f_min, xi)]

    # -- division -------------------------------------------------------

    def _divide(self, box: CenterBox):
        kmin = min(box.depths)
        if kmin + 1 > self.H:
            raise CapacityError(f"box {box.id} cannot be trisected at depth {self.H}")
        dims = [j for j, k in enumerate(box.depths) if k == kmin]
        if not self.config.split_all_longest:
            dims = dims[:1]
        delta = 2 * 3 ** (self.H - kmin - 1)
        c = box.center
        probes = {}
        for j in dims:
            lo = c[:j] + (c[j] - delta,) + c[j + 1 :]
            hi = c[:j] + (c[j] + delta,) + c[j + 1 :]
            probes[j] = (lo, self.db(lo), hi, self.db(hi))
        order = sorted(dims, key=lambda j: (min(probes[j][1], probes[j][3]), j))
        self._remove(box)
        depths = list(box.depths)
        for j in order:
            depths[j] += 1
            lo, flo, hi, fhi = probes[j]
            self._add(lo, tuple(depths), flo)
            self._add(hi, tuple(depths), fhi)
        self._add(c, tuple(depths), box.f)

    def run(self) -> RunResult:
        reason = "budget"
        try:
            center = (self.scale // 2,) * self.N
            self._add(center, (0,) * self.N, self.db(center))
            self._check_stop()
            while True:
                self.iterations += 1
                chosen = []
                for pt in self.potentially_optimal():
                    rep = self.boxes[pt.interval_id]
                    if self.config.variant == CLASSIC and self.config.divide_ties:
                        chosen.extend(self._ties(pt.group, rep))
                    else:
                        chosen.append(rep)
                self.selected_per_iteration.append([b.id for b in chosen])
                for b in chosen:
                    self._divide(b)
                    self._check_stop()
        except _Stop as stop:
            reason = stop.reason
        trials = self.hit_trial if reason == "target" else self.counter.evaluations
        return RunResult(
            best_value=self.f_min,
            best_point=from_unit_cube(self.problem, key_to_point(self.x_min, self.scale)),
            trials=trials,
            intervals=len(self.boxes),
            stop_reason=reason,
            iterations=self.iterations,
            db_hits=self.counter.db_hits,
        )


def direct_run(problem: ProblemInstance, config: Optional[DirectConfig] = None, **kw) -> RunResult:
    """Run DIRECT (``variant="classic"``) or DIRECT-l (``"locally_biased"``)."""
    if config is None:
        config = DirectConfig(**kw)
    elif kw:
        raise TypeError("pass either a config or keyword overrides, not both")
    return DirectSolver(problem, config).run()
