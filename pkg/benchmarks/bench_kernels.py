"""Time the jitted numeric kernels against their pure-numpy fallbacks.

Usage::

    python3 benchmarks/bench_kernels.py [--repeat 5]

Each kernel is called once before timing so numba compilation is not
counted. With ``LIPDIAG_NUMBA=0`` both columns run the numpy path.
"""

import argparse
import timeit

import numpy as np

from lipdiag import NUMBA_ENABLED
from lipdiag.selection import lower_right_hull, lscan_winners
from lipdiag.testbed import GeneratedClass, generate_class
from lipdiag.testbed.gkls import gkls_value


def cases():
    rng = np.random.default_rng(0)
    d = rng.uniform(0.01, 1.0, 200)
    F = rng.uniform(-1.0, 1.0, 200)
    yield "lower_right_hull (200 dots)", lower_right_hull, (d, F), 200

    d = rng.uniform(0.01, 1.0, 30)
    F = rng.uniform(-1.0, 1.0, 30)
    Ls = np.logspace(-6, 6, 10_000)
    yield "lscan_winners (30 dots x 1e4 L)", lscan_winners, (d, F, Ls), 20

    fn = generate_class(GeneratedClass(N=4, M=10, seed=0, size=1))[0].objective
    x = rng.uniform(-1.0, 1.0, 4)
    args = (x, fn.vertex, fn.vertex_value, fn.centers, fn.radii, fn.values)
    yield "gkls_value (N=4 M=10)", gkls_value, args, 20_000


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    print(f"numba enabled: {NUMBA_ENABLED}")
    print(f"{'kernel':36s} {'numba us/call':>14s} {'numpy us/call':>14s} {'speedup':>8s}")
    for name, kern, a, number in cases():
        fast, slow = kern, kern.py_func_fallback
        fast(*a)
        slow(*a)
        t_fast = min(timeit.repeat(lambda: fast(*a), number=number, repeat=args.repeat)) / number
        t_slow = min(timeit.repeat(lambda: slow(*a), number=number, repeat=args.repeat)) / number
        print(f"{name:36s} {t_fast * 1e6:14.2f} {t_slow * 1e6:14.2f} {t_slow / t_fast:8.1f}")


if __name__ == "__main__":
    main()
