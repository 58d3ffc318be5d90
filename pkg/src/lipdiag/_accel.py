"""Optional numba acceleration for the numeric kernels.

Set ``LIPDIAG_NUMBA=0`` before import to run every kernel through its
pure-numpy path. When numba is not importable the fallback is used
automatically.
"""

import os

_flag = os.environ.get("LIPDIAG_NUMBA", "1").strip().lower()
_requested = _flag not in ("0", "false", "no", "off")

try:
    if not _requested:
        raise ImportError
    from numba import njit as _njit

    NUMBA_ENABLED = True
except ImportError:
    _njit = None
    NUMBA_ENABLED = False


def kernel(fallback):
    """Pick the jitted body when numba is enabled, else ``fallback``.

    Usage::

        @kernel(_hull_numpy)
        def lower_right_hull(d, F): ...

    The decorated function must be numba-compilable; ``fallback`` must
    have the same signature and semantics.
    """

    def wrap(fn):
        if NUMBA_ENABLED:
            jitted = _njit(cache=True, nogil=True)(fn)
            jitted.py_func_fallback = fallback
            return jitted
        fallback.py_func_fallback = fallback
        return fallback

    return wrap
