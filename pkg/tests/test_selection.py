import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lipdiag.geometry import DiagramPoint, Partition, group_diagonal
from lipdiag.selection import (
    diagram_lower_bound,
    group_representative,
    hull,
    improvement_filter,
    lower_bound,
    lower_right_hull,
    lscan_winners,
    non_dominated,
    representatives,
)

from oracles import PiecewiseLinear, bound_is_valid, nondominated_exact

LS = np.logspace(-6, 6, 10_000)


def pts(pairs):
    return [DiagramPoint(float(d), float(F), g, g + 100) for g, (d, F) in enumerate(pairs)]


# -- lower bound ------------------------------------------------------------


def test_lower_bound_examples():
    assert lower_bound(1.0, 3.0, 2.0, 2.0) == 0.0
    c, d = 4.0, 0.75
    assert lower_bound(c, c, 2 * d, 3.0) == pytest.approx(c - 3.0 * d, abs=1e-15)
    assert lower_bound(1.0, 3.0, 2.0, 1e-300) == pytest.approx(2.0)
    with pytest.raises(ValueError):
        lower_bound(1.0, 3.0, 2.0, 0.0)
    with pytest.raises(ValueError):
        diagram_lower_bound(DiagramPoint(1.0, 0.0, 0, 1), -1.0)


@settings(max_examples=300, deadline=None)
@given(
    st.floats(-1e3, 1e3), st.floats(-1e3, 1e3), st.floats(1e-6, 10), st.floats(1e-3, 1e3), st.floats(1e-3, 1e3)
)
def test_bound_identity_and_monotonicity(fa, fb, diag, L1, L2):
    p = DiagramPoint(diag / 2, (fa + fb) / 2, 0, 1)
    assert lower_bound(fa, fb, diag, L1) == pytest.approx(diagram_lower_bound(p, L1), abs=1e-12 * (1 + abs(fa) + abs(fb) + L1 * diag))
    if L1 < L2:
        assert lower_bound(fa, fb, diag, L1) > lower_bound(fa, fb, diag, L2)


def test_bound_needs_the_root_two_factor():
    # f = L*|x - (1, 0)| - L has equal values at the diagonal ends of the
    # unit square and its minimum at the off-diagonal corner
    L = 2.5

    def f(x):
        x = np.atleast_2d(x)
        return L * np.linalg.norm(x - [1.0, 0.0], axis=1) - L

    assert not bound_is_valid(f, (0, 0), (1, 1), L, factor=1.0)
    assert bound_is_valid(f, (0, 0), (1, 1), L)


def test_bound_on_l1_norm():
    def f(x):
        return np.abs(np.atleast_2d(x)).sum(axis=1)

    rng = np.random.default_rng(7)
    for _ in range(50):
        a, b = rng.uniform(-1, 1, (2, 2))
        assert bound_is_valid(f, a, b, math.sqrt(2))


def test_bound_on_constant():
    assert lower_bound(3.0, 3.0, 1.0, math.sqrt(2) * 4.0) <= 3.0


def test_bound_on_random_piecewise_linear():
    rng = np.random.default_rng(3)
    for _ in range(100):
        fn = PiecewiseLinear(rng, 2)
        a, b = rng.uniform(0, 1, (2, 2))
        assert bound_is_valid(fn, a, b, fn.L, per_side=30)


# -- hull -----------------------------------------------------------------


def test_hull_all_points():
    res = hull(pts([(1, 0), (2, 1), (3, 5)]))
    assert [(e.point.d, e.L_lo, e.L_hi) for e in res] == [(1, 0, 1), (2, 1, 4), (3, 4, math.inf)]


def test_hull_skips_dominated_dot():
    res = hull(pts([(1, 0), (2, 3), (3, 1)]))
    assert [e.point.d for e in res] == [1, 3]
    assert [(e.L_lo, e.L_hi) for e in res] == [(0, 0.5), (0.5, math.inf)]
    winners = lscan_winners(np.array([1.0, 2, 3]), np.array([0.0, 3, 1]), LS)
    assert list(winners) == [True, False, True]


def test_hull_single_and_empty():
    res = hull(pts([(0.5, 2.0)]))
    assert len(res) == 1 and (res[0].L_lo, res[0].L_hi) == (0.0, math.inf)
    assert hull([]) == []


def test_hull_keeps_collinear_dots():
    res = hull(pts([(1, 0), (2, 1), (3, 2), (4, 3)]))
    assert len(res) == 4
    assert all(e.L_lo == e.L_hi or e.L_hi == math.inf or e.L_lo == 0 for e in res)


def test_hull_equal_F_prefers_larger_d():
    res = hull(pts([(1, 0), (2, 0), (3, 4)]))
    assert [e.point.d for e in res] == [2, 3]


@st.composite
def dot_sets(draw):
    n = draw(st.integers(1, 30))
    d = draw(st.lists(st.integers(1, 60), min_size=n, max_size=n, unique=True))
    F = draw(st.lists(st.integers(-50, 50), min_size=n, max_size=n))
    return np.array(d, dtype=float), np.array(F, dtype=float)


@settings(max_examples=400, deadline=None)
@given(dot_sets())
def test_hull_matches_exact_oracle(dots):
    d, F = dots
    idx, lo, hi = lower_right_hull(d, F)
    assert set(idx.tolist()) == nondominated_exact(d, F)
    assert np.all(np.diff(d[idx]) > 0)
    assert lo[0] == 0.0 and hi[-1] == math.inf
    assert np.all(lo <= hi)
    assert np.array_equal(hi[:-1], lo[1:])
    idx2, lo2, hi2 = lower_right_hull.py_func_fallback(d, F)
    assert np.array_equal(idx, idx2) and np.array_equal(lo, lo2) and np.array_equal(hi, hi2)


def test_hull_matches_lscan_on_random_sets():
    rng = np.random.default_rng(0)
    for _ in range(100):
        n = rng.integers(1, 31)
        d = rng.uniform(0.01, 1.0, n)
        F = rng.uniform(-1.0, 1.0, n)
        idx, _, _ = lower_right_hull(d, F)
        assert set(idx.tolist()) == set(np.flatnonzero(lscan_winners(d, F, LS)).tolist())


def test_lscan_kernels_agree():
    rng = np.random.default_rng(1)
    d = rng.uniform(0.01, 1.0, 20)
    F = rng.uniform(-1.0, 1.0, 20)
    assert np.array_equal(lscan_winners(d, F, LS), lscan_winners.py_func_fallback(d, F, LS))


# -- improvement filter ---------------------------------------------------


def test_filter_examples():
    entries = hull(pts([(1, 1.0), (2, 1.5)]))
    assert entries[0].L_hi == 0.5
    kept = improvement_filter(entries, f_min=1.0, xi=0.6)
    assert [e.point.d for e in kept] == [2]
    kept = improvement_filter(entries, f_min=1.0, xi=0.0)
    assert [e.point.d for e in kept] == [1, 2]
    with pytest.raises(ValueError):
        improvement_filter(entries, 1.0, -1.0)


# -- partition-level selection ---------------------------------------------


def build(values):
    part = Partition(2, 9)
    it = iter(values)
    part.add_root(next(it), next(it))
    part.begin_iteration()
    part.subdivide(part.intervals[1], lambda k: next(it))
    return part


def test_group_representative():
    # corner values 0, 4; u=6, v=2 -> F: mid 4, left 1, right 5
    part = build([0.0, 4.0, 6.0, 2.0])
    assert group_representative(part, 1) == 2
    assert group_representative(part, 0) is None
    part = build([0.0, 0.0, 0.0, 0.0])
    assert group_representative(part, 1) == 1


def test_representatives_use_group_diagonals():
    part = build([0.0, 4.0, 6.0, 2.0])
    (p,) = representatives(part, 0, 5)
    assert p.d == 0.5 * group_diagonal(1, 2) and p.F == 1.0 and p.interval_id == 2
    assert non_dominated(part, 3, 2) == []


def test_same_group_domination_follows_F():
    part = build([0.0, 4.0, 6.0, 2.0])
    members = part.group_members(1)
    d = 0.5 * group_diagonal(1, 2)
    for L in LS[::500]:
        for a in members:
            for b in members:
                assert (a.F - L * d < b.F - L * d) == (a.F < b.F)
