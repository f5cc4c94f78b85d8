import math

import numpy as np
import pytest

import conekrein as ck


@pytest.fixture(scope="session", autouse=True)
def warmup_kernels():
    """Touch every compiled kernel once so JIT cost stays out of timings."""
    xs = np.array([0.5, 3.0, 20.0])
    ck.gamma_fn(xs)
    ck.bessel_k(0.3, xs)
    ck.bessel_i(0.3, xs)
    ck.bessel_j(0.3, xs)
    ck.bessel_y(0.0, xs)
    ck.bessel_j_zeros(0.5, 1)
    from conekrein import kernels

    kernels.lattice_k0_sum(1.0, np.array([1.0, 2.0]))
    kernels.resolvent_pair_sum(-1.0, -2.0, np.array([1.0, 4.0]))
    kernels.heat_trace_diff(
        np.array([1.0]), np.array([1.0]), np.array([1.0]),
        np.array([2.0]), np.array([1.0]),
    )
    kernels.resolvent_trace_sum(-1.0, np.array([1.0]), np.array([1.0]),
                                np.array([2.0]), np.array([1.0]))
    tc = ck.TruncatedConeModel(theta=4 * math.pi, radius=1.0)
    bc = ck.rotation_bc(tc.channel_set(), {(0, 1): math.pi / 2})
    ck.d_function(bc, tc, -1.0)
    yield
