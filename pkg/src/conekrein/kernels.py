"""Hot numeric kernels with a numba / pure-NumPy dual implementation.

The active backend is fixed at import time by ``CONEKREIN_NUMBA`` (see
:mod:`conekrein._jit`).  Both implementations stay importable so the test
suite can assert they agree and ``benchmarks/benchmark_kernels.py`` can
time them against each other.

Kernels
-------
lattice_k0_sum        image sum  sum_gamma K_0(kappa |gamma|)
resolvent_pair_sum    once-subtracted resolvent sum over dual lattice modes
heat_trace_diff       relative heat trace on a time grid
resolvent_trace_sum   paired eigenvalue sum for the trace identity
"""

from __future__ import annotations

from ._jit import NUMBA_ENABLED, backend_name
from . import _kernels_numpy as impl_numpy

if NUMBA_ENABLED:
    from . import _kernels_numba as _impl
else:
    _impl = impl_numpy

lattice_k0_sum = _impl.lattice_k0_sum
resolvent_pair_sum = _impl.resolvent_pair_sum
heat_trace_diff = _impl.heat_trace_diff
resolvent_trace_sum = _impl.resolvent_trace_sum

__all__ = [
    "lattice_k0_sum",
    "resolvent_pair_sum",
    "heat_trace_diff",
    "resolvent_trace_sum",
    "backend_name",
    "impl_numpy",
]
