"""Optional numba acceleration.

Set ``OTALEARN_DISABLE_NUMBA=1`` to run the pure-Python versions of the
kernels (useful for debugging and for the benchmark baseline).
"""
import os

USE_NUMBA = os.environ.get("OTALEARN_DISABLE_NUMBA", "") not in ("1", "true", "yes")

if USE_NUMBA:
    try:
        import numba
    except ImportError:  # pragma: no cover - numba is a declared dependency
        USE_NUMBA = False


def njit(fn):
    """``numba.njit(cache=True)`` when enabled, identity otherwise.

    The undecorated function stays reachable as ``.py_func`` either way.
    """
    if USE_NUMBA:
        return numba.njit(cache=True)(fn)
    fn.py_func = fn
    return fn
