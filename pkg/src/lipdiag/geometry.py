"""Exact diagonal partitions of the unit hypercube.

Every vertex produced by trisecting the unit cube along main diagonals has
coordinates of the form n / 3**h. Coordinates are stored as integers over
the common denominator ``3**max_depth`` so vertex keys compare exactly.
"""

import heapq
import math
from typing import Callable, List, NamedTuple, Optional, Tuple

import numpy as np

from .core import CapacityError

# 3**39 < 2**63, so bounds also fit int64 arrays for vectorized scans.
MAX_DEPTH = 39

Key = Tuple[int, ...]


class TernaryCoord(NamedTuple):
    """The rational ``n / 3**h`` in canonical (lowest-terms) form."""

    n: int
    h: int

    @classmethod
    def canonical(cls, n: int, h: int) -> "TernaryCoord":
        if n < 0 or h < 0 or n > 3**h:
            raise ValueError(f"{n}/3^{h} is not in [0, 1]")
        if n == 0:
            return cls(0, 0)
        while h > 0 and n % 3 == 0:
            n //= 3
            h -= 1
        return cls(n, h)

    @classmethod
    def from_scaled(cls, n: int, depth: int = MAX_DEPTH) -> "TernaryCoord":
        return cls.canonical(n, depth)

    def scaled(self, depth: int = MAX_DEPTH) -> int:
        if self.h > depth:
            raise CapacityError(f"depth {self.h} exceeds {depth}")
        return self.n * 3 ** (depth - self.h)

    def __float__(self):
        return self.n / 3**self.h


class DiagramPoint(NamedTuple):
    d: float
    F: float
    group: int
    interval_id: int


class Hyperinterval:
    """Box given by the two vertices of its main diagonal.

    ``va``/``vb`` are integer keys over ``3**max_depth``; ``fa``/``fb`` the
    objective values there. ``group`` counts subdivisions since the root.
    """

    __slots__ = ("id", "va", "vb", "fa", "fb", "group", "serial")

    def __init__(self, id, va, vb, fa, fb, group, serial=0):
        self.id = id
        self.va = va
        self.vb = vb
        self.fa = fa
        self.fb = fb
        self.group = group
        self.serial = serial

    @property
    def lower(self) -> Key:
        return tuple(min(a, b) for a, b in zip(self.va, self.vb))

    @property
    def upper(self) -> Key:
        return tuple(max(a, b) for a, b in zip(self.va, self.vb))

    @property
    def sides(self) -> Key:
        return tuple(abs(b - a) for a, b in zip(self.va, self.vb))

    @property
    def F(self) -> float:
        return 0.5 * (self.fa + self.fb)

    def contains(self, key: Key) -> bool:
        for x, a, b in zip(key, self.va, self.vb):
            if a <= b:
                if x < a or x > b:
                    return False
            elif x < b or x > a:
                return False
        return True

    def __repr__(self):
        return f"Hyperinterval(id={self.id}, group={self.group}, va={self.va}, vb={self.vb})"


def key_to_point(key: Key, scale: int) -> np.ndarray:
    return np.array([n / scale for n in key])


def _longest_side(a: Key, b: Key) -> int:
    best, best_len = 0, -1
    for j, (x, y) in enumerate(zip(a, b)):
        s = abs(y - x)
        if s > best_len:
            best, best_len = j, s
    return best


def longest_side_index(h: Hyperinterval) -> int:
    """Zero-based index of the longest side; the smallest index wins ties."""
    return _longest_side(h.va, h.vb)


def split_points(a: Key, b: Key) -> Tuple[Key, Key]:
    """Points u, v cutting the box [a, b] into thirds across its longest side.

    u moves from a two thirds of the way towards b along that side, v moves
    from b two thirds of the way towards a; other coordinates stay put.
    """
    i = _longest_side(a, b)
    span = b[i] - a[i]
    if span % 3:
        raise CapacityError("box side is not divisible by 3 at this depth")
    step = 2 * (span // 3)
    u = a[:i] + (a[i] + step,) + a[i + 1 :]
    v = b[:i] + (b[i] - step,) + b[i + 1 :]
    return u, v


def group_diagonal(l: int, n: int) -> float:
    """Main-diagonal length of any box in group ``l`` of an N-cube partition."""
    if l < 0 or n < 1:
        raise ValueError("group index must be >= 0 and dimension >= 1")
    m, r = divmod(l, n)
    return 3.0 ** (-m) * math.sqrt((n - r) + r / 9.0)


def diagonal_length(h: Hyperinterval, scale: int) -> float:
    sq = sum((b - a) * (b - a) for a, b in zip(h.va, h.vb))
    return math.sqrt(sq) / scale


def diagram_point(h: Hyperinterval, scale: int) -> DiagramPoint:
    if h.va == h.vb:
        raise RuntimeError(f"degenerate box {h!r}")
    return DiagramPoint(0.5 * diagonal_length(h, scale), h.F, h.group, h.id)


class Partition:
    """Live hyperintervals of a diagonal partition plus group bookkeeping.

    Ids follow the creation order of the subdivision rule: the root is 1,
    the middle child keeps its parent's id and the two outer children get
    ``count + 1`` and ``count + 2``.
    """

    def __init__(self, dim: int, max_depth: int = MAX_DEPTH):
        if not 1 <= max_depth <= MAX_DEPTH:
            raise ValueError(f"max_depth must be in [1, {MAX_DEPTH}]")
        self.dim = dim
        self.max_depth = max_depth
        self.scale = 3**max_depth
        self.intervals = {}
        self.m = 0
        self.delta_m = 0
        self.subdivisions = 0
        self._counts: List[int] = []
        self._heaps: List[list] = []
        self._q = 0
        self._serial = 0
        cap = 64
        self._lo = np.zeros((cap, dim), dtype=np.int64)
        self._hi = np.zeros((cap, dim), dtype=np.int64)
        self._live = np.zeros(cap, dtype=bool)

    # -- construction ---------------------------------------------------

    def add_root(self, fa: float, fb: float) -> Hyperinterval:
        if self.intervals:
            raise RuntimeError("partition already has a root")
        va = (0,) * self.dim
        vb = (self.scale,) * self.dim
        root = self._make(1, va, vb, fa, fb, 0)
        self.m = 1
        return root

    def _make(self, id, va, vb, fa, fb, group) -> Hyperinterval:
        self._serial += 1
        h = Hyperinterval(id, va, vb, fa, fb, group, self._serial)
        self.intervals[id] = h
        while len(self._counts) <= group:
            self._counts.append(0)
            self._heaps.append([])
        self._counts[group] += 1
        heapq.heappush(self._heaps[group], (h.F, id, h.serial))
        if id >= len(self._live):
            grow = max(2 * len(self._live), id + 1)
            for name in ("_lo", "_hi"):
                arr = getattr(self, name)
                new = np.zeros((grow, self.dim), dtype=np.int64)
                new[: len(arr)] = arr
                setattr(self, name, new)
            live = np.zeros(grow, dtype=bool)
            live[: len(self._live)] = self._live
            self._live = live
        self._lo[id] = h.lower
        self._hi[id] = h.upper
        self._live[id] = True
        return h

    def _drop(self, h: Hyperinterval):
        del self.intervals[h.id]
        self._counts[h.group] -= 1
        self._live[h.id] = False

    def _advance_q(self):
        while self._q < len(self._counts) - 1 and self._counts[self._q] == 0:
            self._q += 1

    def begin_iteration(self):
        self.m = len(self.intervals)
        self.delta_m = 0

    def subdivide(
        self, t: Hyperinterval, get_value: Callable[[Key], float]
    ) -> Tuple[Tuple[Hyperinterval, Hyperinterval, Hyperinterval], Key, Key]:
        """Trisect ``t`` across its longest side through the points u and v.

        Returns the children ``([u, v], [a_t, v], [u, b_t])`` and the keys of
        u and v. Values at u and v come from ``get_value`` (in that order).
        """
        if self.intervals.get(t.id) is not t:
            raise ValueError(f"{t!r} is not live in this partition")
        a, b = t.va, t.vb
        try:
            u, v = split_points(a, b)
        except CapacityError:
            raise CapacityError(
                f"box {t.id} cannot be trisected further at depth {self.max_depth}"
            ) from None
        fu = get_value(u)
        fv = get_value(v)

        count = self.m + self.delta_m
        group = t.group + 1
        self._drop(t)
        mid = self._make(t.id, u, v, fu, fv, group)
        left = self._make(count + 1, a, v, t.fa, fv, group)
        right = self._make(count + 2, u, b, fu, t.fb, group)
        self._advance_q()
        self.delta_m += 2
        self.subdivisions += 1
        return (mid, left, right), u, v

    # -- queries --------------------------------------------------------

    def __len__(self):
        return len(self.intervals)

    @property
    def q(self) -> int:
        return self._q

    @property
    def Q(self) -> int:
        return len(self._counts) - 1

    def group_count(self, l: int) -> int:
        return self._counts[l] if 0 <= l < len(self._counts) else 0

    def group_members(self, l: int) -> List[Hyperinterval]:
        return sorted(
            (h for h in self.intervals.values() if h.group == l), key=lambda h: h.id
        )

    def representative(self, l: int) -> Optional[Hyperinterval]:
        """Member of group ``l`` with the smallest F; smallest id on ties."""
        if not 0 <= l < len(self._counts) or self._counts[l] == 0:
            return None
        heap = self._heaps[l]
        while heap:
            _, id, serial = heap[0]
            h = self.intervals.get(id)
            if h is not None and h.serial == serial:
                return h
            heapq.heappop(heap)
        return None

    def pop_ties(self, l: int) -> List[Hyperinterval]:
        """Every member of group ``l`` sharing the minimal F (oldest first)."""
        rep = self.representative(l)
        if rep is None:
            return []
        heap = self._heaps[l]
        out, stash = [], []
        while heap:
            F, id, serial = heap[0]
            if F != rep.F:
                break
            heapq.heappop(heap)
            h = self.intervals.get(id)
            if h is not None and h.serial == serial:
                out.append(h)
                stash.append((F, id, serial))
        for entry in stash:
            heapq.heappush(heap, entry)
        return out

    def containing(self, key: Key) -> List[Hyperinterval]:
        """Live boxes whose closed hull contains the vertex ``key``."""
        x = np.asarray(key, dtype=np.int64)
        n = len(self._live)
        mask = self._live & np.all((self._lo[:n] <= x) & (x <= self._hi[:n]), axis=1)
        return [self.intervals[int(i)] for i in np.flatnonzero(mask)]

    def diagonal(self, h: Hyperinterval) -> float:
        return diagonal_length(h, self.scale)

    def volume_numerators(self) -> int:
        """Sum of box volumes times ``scale**dim``; equals ``scale**dim`` when tiled."""
        total = 0
        for h in self.intervals.values():
            vol = 1
            for s in h.sides:
                vol *= s
            total += vol
        return total
