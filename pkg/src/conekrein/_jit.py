"""Numba/NumPy backend selection.

The hot numeric kernels in this package exist in two flavours: scalar loops
compiled with ``numba.njit`` and vectorized pure-NumPy fallbacks.  The active
backend is chosen once at import time from the environment variable
``CONEKREIN_NUMBA``:

* unset / ``"1"`` / ``"true"``  -- use numba if it is importable,
* ``"0"`` / ``"false"`` / ``"off"`` -- force the pure-NumPy path.

``benchmarks/benchmark_kernels.py`` times both paths against each other.
"""

from __future__ import annotations

import os

_env = os.environ.get("CONEKREIN_NUMBA", "").strip().lower()

if _env in ("0", "false", "off", "no"):
    NUMBA_ENABLED = False
else:
    try:
        import numba  # noqa: F401

        NUMBA_ENABLED = True
    except ImportError:  # pragma: no cover - numba is a declared dependency
        if _env in ("1", "true", "on", "yes"):
            raise
        NUMBA_ENABLED = False


def maybe_njit(*args, **kwargs):
    """``numba.njit`` when the numba backend is active, identity otherwise.

    Usable both bare (``@maybe_njit``) and with options
    (``@maybe_njit(cache=True)``).
    """
    if len(args) == 1 and callable(args[0]) and not kwargs:
        func = args[0]
        if NUMBA_ENABLED:
            import numba

            return numba.njit(func)
        return func

    def wrap(func):
        if NUMBA_ENABLED:
            import numba

            return numba.njit(*args, **kwargs)(func)
        return func

    return wrap


def backend_name() -> str:
    return "numba" if NUMBA_ENABLED else "numpy"
