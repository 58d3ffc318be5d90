"""Lower bounds, domination and non-dominated hyperinterval selection.

Each box is a dot (d, F) with d the half diagonal and F the mean of the two
diagonal-vertex values. For a Lipschitz estimate L the bound over the box is
F - L*d, so the boxes with the least bound for some L in (0, inf) are the
dots on the lower-right convex hull.
"""

import math
from typing import List, NamedTuple, Optional, Sequence

import numpy as np

from ._accel import kernel
from .geometry import DiagramPoint, Partition, group_diagonal


class HullEntry(NamedTuple):
    point: DiagramPoint
    L_lo: float
    L_hi: float


HullResult = List[HullEntry]


def lower_bound(fa: float, fb: float, diagonal: float, L_hat: float) -> float:
    """Bound on f along the diagonal from two cones of slope ``L_hat``.

    Valid over the whole box once ``L_hat >= sqrt(2) * L``.
    """
    if not L_hat > 0:
        raise ValueError(f"Lipschitz estimate must be positive, got {L_hat}")
    return 0.5 * (fa + fb - L_hat * diagonal)


def diagram_lower_bound(point: DiagramPoint, L_hat: float) -> float:
    if not L_hat > 0:
        raise ValueError(f"Lipschitz estimate must be positive, got {L_hat}")
    return point.F - L_hat * point.d


def _hull_numpy(d, F):
    n = d.shape[0]
    idx = np.empty(n, dtype=np.int64)
    lo = np.empty(n, dtype=np.float64)
    hi = np.empty(n, dtype=np.float64)
    if n == 0:
        return idx, lo, hi
    fmin = F.min()
    ties = np.flatnonzero(F == fmin)
    cur = ties[np.argmax(d[ties])]
    idx[0] = cur
    lo[0] = 0.0
    k = 0
    while True:
        right = np.flatnonzero(d > d[cur])
        if right.size == 0:
            hi[k] = np.inf
            break
        slopes = (F[right] - F[cur]) / (d[right] - d[cur])
        s = slopes.min()
        cand = right[slopes == s]
        nxt = cand[np.argmin(d[cand])]
        hi[k] = s
        k += 1
        idx[k] = nxt
        lo[k] = s
        cur = nxt
    k += 1
    return idx[:k], lo[:k], hi[:k]


@kernel(_hull_numpy)
def lower_right_hull(d, F):
    """Jarvis march over the dots ``(d[i], F[i])``.

    Starts at the lowest dot (largest d on ties) and repeatedly wraps to the
    dot of larger d with the least connecting slope; among collinear
    candidates the nearest is taken so every collinear dot is kept. Returns
    ``(indices, L_lo, L_hi)`` in increasing-d order.
    """
    n = d.shape[0]
    idx = np.empty(n, dtype=np.int64)
    lo = np.empty(n, dtype=np.float64)
    hi = np.empty(n, dtype=np.float64)
    if n == 0:
        return idx, lo, hi
    cur = 0
    for i in range(1, n):
        if F[i] < F[cur] or (F[i] == F[cur] and d[i] > d[cur]):
            cur = i
    idx[0] = cur
    lo[0] = 0.0
    k = 0
    while True:
        best = -1
        best_s = np.inf
        for j in range(n):
            if d[j] > d[cur]:
                s = (F[j] - F[cur]) / (d[j] - d[cur])
                if best < 0 or s < best_s or (s == best_s and d[j] < d[best]):
                    best = j
                    best_s = s
        if best < 0:
            hi[k] = np.inf
            break
        hi[k] = best_s
        k += 1
        idx[k] = best
        lo[k] = best_s
        cur = best
    k += 1
    return idx[:k], lo[:k], hi[:k]


def hull(points: Sequence[DiagramPoint]) -> HullResult:
    """Non-dominated dots with the slope interval over which each wins."""
    if not points:
        return []
    d = np.fromiter((p.d for p in points), dtype=np.float64, count=len(points))
    F = np.fromiter((p.F for p in points), dtype=np.float64, count=len(points))
    idx, lo, hi = lower_right_hull(d, F)
    return [HullEntry(points[i], float(a), float(b)) for i, a, b in zip(idx, lo, hi)]


def group_representative(partition: Partition, l: int) -> Optional[int]:
    h = partition.representative(l)
    return None if h is None else h.id


def representatives(partition: Partition, l_min: int, l_max: int) -> List[DiagramPoint]:
    n = partition.dim
    pts = []
    for l in range(max(l_min, 0), l_max + 1):
        h = partition.representative(l)
        if h is not None:
            pts.append(DiagramPoint(0.5 * group_diagonal(l, n), h.F, l, h.id))
    return pts


def non_dominated(partition: Partition, l_min: int, l_max: int) -> HullResult:
    """Hull over one representative per non-empty group in ``[l_min, l_max]``."""
    if l_min > l_max:
        return []
    return hull(representatives(partition, l_min, l_max))


def improvement_filter(entries: HullResult, f_min: float, xi: float) -> HullResult:
    """Keep hull dots whose bound at their largest admissible slope beats
    ``f_min - xi``. The largest box (``L_hi = inf``) always passes."""
    if xi < 0:
        raise ValueError("xi must be non-negative")
    keep = []
    for e in entries:
        if math.isinf(e.L_hi) or e.point.F - e.L_hi * e.point.d <= f_min - xi:
            keep.append(e)
    return keep


def _lscan_numpy(d, F, Ls):
    R = F[None, :] - Ls[:, None] * d[None, :]
    hit = R == R.min(axis=1)[:, None]
    return hit.any(axis=0)


@kernel(_lscan_numpy)
def lscan_winners(d, F, Ls):
    """Brute-force non-domination: flag every dot that attains the minimal
    bound ``F - L*d`` (ties included) for some ``L`` in ``Ls``."""
    n = d.shape[0]
    out = np.zeros(n, dtype=np.bool_)
    for k in range(Ls.shape[0]):
        L = Ls[k]
        best = np.inf
        for i in range(n):
            r = F[i] - L * d[i]
            if r < best:
                best = r
        for i in range(n):
            if F[i] - L * d[i] == best:
                out[i] = True
    return out
