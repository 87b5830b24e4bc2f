"""Optional numba acceleration for the numeric kernels.

The hot inner loops (incomplete beta, beta quantiles, per-sample interval
construction) are written as plain scalar Python so they compile under
``numba.njit`` unchanged.  When numba is unavailable, or when the
environment variable ``ADVORDER_NO_NUMBA`` is set to a truthy value
("1", "true", "yes", "on"), the same functions run uncompiled on the
pure numpy/Python path.  Both paths execute identical double-precision
arithmetic.

``benchmarks/bench_kernels.py`` compares the two paths.
"""

import os

_TRUTHY = ("1", "true", "yes", "on")

NUMBA_DISABLED = os.environ.get("ADVORDER_NO_NUMBA", "").strip().lower() in _TRUTHY

try:
    if NUMBA_DISABLED:
        raise ImportError("numba disabled via ADVORDER_NO_NUMBA")
    from numba import njit as _numba_njit

    NUMBA_ENABLED = True

    def njit(*args, **kwargs):
        kwargs.setdefault("cache", True)
        return _numba_njit(*args, **kwargs)

except ImportError:
    NUMBA_ENABLED = False

    def njit(*args, **kwargs):
        """No-op stand-in: return the function uncompiled."""
        if args and callable(args[0]):
            return args[0]

        def wrap(func):
            return func

        return wrap
