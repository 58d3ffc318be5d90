"""Seeded classes of multiextremal test functions with a known global minimum.

A member is the paraboloid ``g(x) = |x - T|^2 + t`` (so T is a local
minimizer with value t) with M - 1 disjoint balls carved into it. Inside
the ball around ``m`` of radius ``rho`` the function follows, along every
ray from ``m``, the cubic ``h(r) = f_m + alpha r^2 + beta r^3`` that starts
flat at ``f_m`` and meets g with matching value and radial slope on the
sphere. The result is continuously differentiable; with T outside every
ball and ``f_m <= t`` each cubic stays above ``f_m``.

Parameters follow the five-number convention: dimension, number of local
minima (the paraboloid vertex counts as one), global value, global ball
radius, and distance from the global minimizer to the paraboloid vertex.
The domain is always [-1, 1]^N.
"""

from dataclasses import dataclass
from typing import List

import numpy as np

from .._accel import kernel
from ..core import ProblemInstance


class GenerationError(ValueError):
    """The requested class cannot be realized."""


def _gkls_numpy(x, T, t, centers, radii, values):
    diff = centers - x
    dist = np.sqrt(np.einsum("ij,ij->i", diff, diff))
    inside = np.flatnonzero(dist < radii)
    xt = x - T
    if inside.size == 0:
        return float(xt @ xt + t)
    i = inside[0]
    r = dist[i]
    if r == 0.0:
        return float(values[i])
    rho = radii[i]
    mt = centers[i] - T
    e = (x - centers[i]) / r
    c = float(e @ mt)
    G = float(mt @ mt) + 2.0 * rho * c + rho * rho + t
    dG = 2.0 * c + 2.0 * rho
    gap = G - values[i]
    alpha = (3.0 * gap - dG * rho) / (rho * rho)
    beta = (dG * rho - 2.0 * gap) / (rho * rho * rho)
    return float(values[i] + alpha * r * r + beta * r * r * r)


@kernel(_gkls_numpy)
def gkls_value(x, T, t, centers, radii, values):
    n = x.shape[0]
    for i in range(centers.shape[0]):
        r2 = 0.0
        for j in range(n):
            dx = x[j] - centers[i, j]
            r2 += dx * dx
        rho = radii[i]
        if r2 < rho * rho:
            r = np.sqrt(r2)
            if r == 0.0:
                return values[i]
            c = 0.0
            mt2 = 0.0
            for j in range(n):
                mt = centers[i, j] - T[j]
                c += (x[j] - centers[i, j]) / r * mt
                mt2 += mt * mt
            G = mt2 + 2.0 * rho * c + rho * rho + t
            dG = 2.0 * c + 2.0 * rho
            gap = G - values[i]
            alpha = (3.0 * gap - dG * rho) / (rho * rho)
            beta = (dG * rho - 2.0 * gap) / (rho * rho * rho)
            return values[i] + alpha * r2 + beta * r2 * r
    s = 0.0
    for j in range(n):
        dx = x[j] - T[j]
        s += dx * dx
    return s + t


class GKLSFunction:
    """One class member; picklable so runs can go to worker processes.

    Row 0 of ``centers`` is the global minimizer.
    """

    def __init__(self, vertex, vertex_value, centers, radii, values):
        self.vertex = np.ascontiguousarray(vertex, dtype=np.float64)
        self.vertex_value = float(vertex_value)
        self.centers = np.ascontiguousarray(centers, dtype=np.float64)
        self.radii = np.ascontiguousarray(radii, dtype=np.float64)
        self.values = np.ascontiguousarray(values, dtype=np.float64)

    @property
    def minimizer(self) -> np.ndarray:
        return self.centers[0]

    def __call__(self, x) -> float:
        x = np.ascontiguousarray(x, dtype=np.float64)
        return float(
            gkls_value(x, self.vertex, self.vertex_value, self.centers, self.radii, self.values)
        )


class Shifted:
    def __init__(self, fn, c):
        self.fn = fn
        self.c = float(c)

    def __call__(self, x):
        return self.fn(x) + self.c


@dataclass(frozen=True)
class GeneratedClass:
    N: int
    M: int = 10
    f_star: float = -1.0
    rho_star: float = 0.1
    r_star: float = 0.9
    seed: int = 0
    size: int = 100
    vertex_value: float = 0.0

    def label(self) -> str:
        return (
            f"N={self.N} M={self.M} fstar={self.f_star:g} rho={self.rho_star:g} "
            f"r={self.r_star:g} seed={self.seed}"
        )


def _check(params: GeneratedClass):
    if params.N < 1:
        raise GenerationError("dimension must be positive")
    if params.M < 2:
        raise GenerationError("M must be at least 2 (vertex plus global minimizer)")
    if not params.f_star < params.vertex_value:
        raise GenerationError(
            f"f_star={params.f_star} must lie below the vertex value {params.vertex_value}"
        )
    if not 0.0 < params.rho_star < 1.0:
        raise GenerationError(f"rho_star={params.rho_star} does not fit in [-1, 1]^N")
    if not params.rho_star < params.r_star:
        raise GenerationError(
            f"rho_star={params.rho_star} >= r_star={params.r_star}: the global ball "
            "would swallow the paraboloid vertex"
        )
    if params.r_star > 2.0 * np.sqrt(params.N) * (1.0 - params.rho_star):
        raise GenerationError(f"r_star={params.r_star} too large for the domain")


_TRIES = 2000
_MIN_RADIUS = 1e-3


def _member(params: GeneratedClass, index: int) -> GKLSFunction:
    rng = np.random.default_rng([params.seed, index, params.N, params.M])
    n, rho_g = params.N, params.rho_star
    lim = 1.0 - rho_g
    for _ in range(_TRIES):
        T = rng.uniform(-1.0, 1.0, n)
        u = rng.standard_normal(n)
        x_star = T + params.r_star * u / np.linalg.norm(u)
        if np.all(np.abs(x_star) <= lim):
            break
    else:
        raise GenerationError(
            f"could not place a global ball of radius {rho_g} at distance "
            f"{params.r_star} from the vertex inside [-1, 1]^{n}"
        )

    t = params.vertex_value
    centers = np.empty((params.M - 1, n))
    radii = np.empty(params.M - 1)
    values = np.empty(params.M - 1)
    centers[0], radii[0], values[0] = x_star, rho_g, params.f_star
    span = t - params.f_star
    for k in range(1, params.M - 1):
        placed = centers[1:k]
        for _ in range(_TRIES):
            m = rng.uniform(-1.0, 1.0, n)
            gaps = np.sqrt(np.sum((placed - m) ** 2, axis=1))
            rad = min(
                1.0 - np.max(np.abs(m)),
                0.5 * np.linalg.norm(m - T),
                np.linalg.norm(m - x_star) - rho_g,
                0.5 * gaps.min() if k > 1 else np.inf,
            )
            # earlier balls may be larger than half the gap, check both ways
            if rad >= _MIN_RADIUS and np.all(gaps >= radii[1:k] + rad):
                break
        else:
            raise GenerationError(
                f"could not fit {params.M - 1} disjoint balls in [-1, 1]^{n} "
                f"(rho_star={rho_g}, r_star={params.r_star})"
            )
        centers[k], radii[k] = m, rad
        values[k] = rng.uniform(params.f_star + 0.2 * span, t - 0.2 * span)
    return GKLSFunction(T, t, centers, radii, values)


def generate_class(params: GeneratedClass) -> List[ProblemInstance]:
    """Deterministically build the ``params.size`` members of a class."""
    _check(params)
    lower, upper = -np.ones(params.N), np.ones(params.N)
    out = []
    for i in range(params.size):
        fn = _member(params, i)
        out.append(
            ProblemInstance(
                objective=fn,
                lower=lower,
                upper=upper,
                name=f"gkls-{i + 1}",
                known_minimizers=(fn.minimizer,),
                known_minimum=params.f_star,
            )
        )
    return out


def shift(problem: ProblemInstance, c: float) -> ProblemInstance:
    """Same problem with ``c`` added to every objective value."""
    minimum = None if problem.known_minimum is None else problem.known_minimum + c
    name = problem.name if c == 0 else f"{problem.name}+{c:g}"
    return ProblemInstance(
        objective=Shifted(problem.objective, c),
        lower=problem.lower,
        upper=problem.upper,
        name=name,
        known_minimizers=problem.known_minimizers,
        known_minimum=minimum,
    )
