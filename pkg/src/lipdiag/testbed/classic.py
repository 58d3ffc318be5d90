"""Classic low-dimensional test functions with reference minimizers."""

from dataclasses import dataclass
from typing import Callable, Dict, Tuple

import numpy as np

from ..core import ProblemInstance

_SHEKEL_A = np.array(
    [
        [4.0, 4.0, 4.0, 4.0],
        [1.0, 1.0, 1.0, 1.0],
        [8.0, 8.0, 8.0, 8.0],
        [6.0, 6.0, 6.0, 6.0],
        [3.0, 7.0, 3.0, 7.0],
        [2.0, 9.0, 2.0, 9.0],
        [5.0, 5.0, 3.0, 3.0],
        [8.0, 1.0, 8.0, 1.0],
        [6.0, 2.0, 6.0, 2.0],
        [7.0, 3.6, 7.0, 3.6],
    ]
)
_SHEKEL_C = np.array([0.1, 0.2, 0.2, 0.4, 0.4, 0.6, 0.3, 0.7, 0.5, 0.5])

_HARTMAN_ALPHA = np.array([1.0, 1.2, 3.0, 3.2])
_HARTMAN3_A = np.array(
    [[3.0, 10.0, 30.0], [0.1, 10.0, 35.0], [3.0, 10.0, 30.0], [0.1, 10.0, 35.0]]
)
_HARTMAN3_P = np.array(
    [
        [0.3689, 0.1170, 0.2673],
        [0.4699, 0.4387, 0.7470],
        [0.1091, 0.8732, 0.5547],
        [0.0381, 0.5743, 0.8828],
    ]
)
_HARTMAN6_A = np.array(
    [
        [10.0, 3.0, 17.0, 3.5, 1.7, 8.0],
        [0.05, 10.0, 17.0, 0.1, 8.0, 14.0],
        [3.0, 3.5, 1.7, 10.0, 17.0, 8.0],
        [17.0, 8.0, 0.05, 10.0, 0.1, 14.0],
    ]
)
_HARTMAN6_P = 1e-4 * np.array(
    [
        [1312, 1696, 5569, 124, 8283, 5886],
        [2329, 4135, 8307, 3736, 1004, 9991],
        [2348, 1451, 3522, 2883, 3047, 6650],
        [4047, 8828, 8732, 5743, 1091, 381],
    ]
)


def _shekel(m):
    A, c = _SHEKEL_A[:m], _SHEKEL_C[:m]

    def f(x):
        diff = x - A
        return -float(np.sum(1.0 / (np.einsum("ij,ij->i", diff, diff) + c)))

    f.__name__ = f"shekel{m}"
    return f


def _hartman(A, P):
    def f(x):
        return -float(_HARTMAN_ALPHA @ np.exp(-np.sum(A * (x - P) ** 2, axis=1)))

    return f


def branin(x):
    x1, x2 = x[0], x[1]
    b = 5.1 / (4.0 * np.pi**2)
    c = 5.0 / np.pi
    t = 1.0 / (8.0 * np.pi)
    return (x2 - b * x1**2 + c * x1 - 6.0) ** 2 + 10.0 * (1.0 - t) * np.cos(x1) + 10.0


def goldstein_price(x):
    x1, x2 = x[0], x[1]
    a = 1.0 + (x1 + x2 + 1.0) ** 2 * (
        19.0 - 14.0 * x1 + 3.0 * x1**2 - 14.0 * x2 + 6.0 * x1 * x2 + 3.0 * x2**2
    )
    b = 30.0 + (2.0 * x1 - 3.0 * x2) ** 2 * (
        18.0 - 32.0 * x1 + 12.0 * x1**2 + 48.0 * x2 - 36.0 * x1 * x2 + 27.0 * x2**2
    )
    return a * b


def six_hump_camel(x):
    x1, x2 = x[0], x[1]
    return (4.0 - 2.1 * x1**2 + x1**4 / 3.0) * x1**2 + x1 * x2 + (-4.0 + 4.0 * x2**2) * x2**2


_J = np.arange(1, 6, dtype=float)


def _shubert_1d(t):
    return float(np.sum(_J * np.cos((_J + 1.0) * t + _J)))


def shubert(x):
    return _shubert_1d(x[0]) * _shubert_1d(x[1])


# Extrema of the 1-D Shubert factor inside [-8, 10]: the product is minimal
# when one factor sits at its minimum and the other at its maximum.
_SHUBERT_ARGMIN = (-7.708313734, -1.425128428, 4.858056878)
_SHUBERT_ARGMAX = (-7.083506408, -0.800321101, 5.482864205)
_SHUBERT_MINIMIZERS = tuple(
    pt
    for a in _SHUBERT_ARGMIN
    for b in _SHUBERT_ARGMAX
    for pt in ((a, b), (b, a))
)


@dataclass(frozen=True)
class ClassicFunction:
    name: str
    dim: int
    lower: Tuple[float, ...]
    upper: Tuple[float, ...]
    objective: Callable
    minimizers: Tuple[Tuple[float, ...], ...]
    minimum: float
    delta: float

    def problem(self) -> ProblemInstance:
        return ProblemInstance(
            objective=self.objective,
            lower=np.array(self.lower),
            upper=np.array(self.upper),
            name=self.name,
            known_minimizers=self.minimizers,
            known_minimum=self.minimum,
        )


def _cube(n, a, b):
    return (a,) * n, (b,) * n


CLASSIC: Dict[str, ClassicFunction] = {}


def _register(name, dim, bounds, fn, minimizers, minimum, delta):
    CLASSIC[name] = ClassicFunction(name, dim, bounds[0], bounds[1], fn, minimizers, minimum, delta)


_register(
    "shekel5", 4, _cube(4, 0.0, 10.0), _shekel(5),
    ((4.000037152, 4.000133279, 4.000037151, 4.000133277),), -10.153199679, 1e-6,
)
_register(
    "shekel7", 4, _cube(4, 0.0, 10.0), _shekel(7),
    ((4.000572914, 4.000689366, 3.999489711, 3.999606160),), -10.402940567, 1e-6,
)
_register(
    "shekel10", 4, _cube(4, 0.0, 10.0), _shekel(10),
    ((4.000746530, 4.000592937, 3.999663396, 3.999509799),), -10.536409817, 1e-6,
)
_register(
    "hartman3", 3, _cube(3, 0.0, 1.0), _hartman(_HARTMAN3_A, _HARTMAN3_P),
    ((0.114588879, 0.555648895, 0.852546986),), -3.862779787, 1e-6,
)
_register(
    "hartman6", 6, _cube(6, 0.0, 1.0), _hartman(_HARTMAN6_A, _HARTMAN6_P),
    ((0.201689509, 0.150010694, 0.476873973, 0.275332428, 0.311651617, 0.657300535),),
    -3.322368011, 1e-7,
)
_register(
    "branin", 2, ((-5.0, 0.0), (10.0, 15.0)), branin,
    ((-np.pi, 12.275), (np.pi, 2.275), (3 * np.pi, 2.475)), 0.397887358, 1e-4,
)
_register(
    "goldstein_price", 2, _cube(2, -2.0, 2.0), goldstein_price, ((0.0, -1.0),), 3.0, 1e-4,
)
_register(
    "six_hump_camel", 2, ((-3.0, -2.0), (3.0, 2.0)), six_hump_camel,
    ((0.089842009, -0.712656403), (-0.089842009, 0.712656403)), -1.031628453, 1e-4,
)
_register(
    "shubert", 2, _cube(2, -8.0, 10.0), shubert, _SHUBERT_MINIMIZERS, -186.730908831, 1e-4,
)


def classic(name: str) -> ProblemInstance:
    """Problem instance for one of the registered classic functions."""
    try:
        return CLASSIC[name].problem()
    except KeyError:
        raise KeyError(f"unknown test function {name!r}; known: {sorted(CLASSIC)}") from None
