"""Pure-NumPy implementations of the hot array kernels.

Broadcasting versions of the loops in :mod:`conekrein._kernels_numba`;
semantics are identical and the backend-agreement tests hold the two to
~1e-12 of each other.
"""

from __future__ import annotations

import numpy as np

from ._sf_vector import besselk_vec


def lattice_k0_sum(kappa: float, norms: np.ndarray) -> float:
    z = kappa * np.asarray(norms, dtype=float)
    z = z[z <= 705.0]
    if z.size == 0:
        return 0.0
    return float(np.sum(besselk_vec(0.0, z, 15.0, 400)))


def resolvent_pair_sum(lam: float, lam0: float, xi2: np.ndarray) -> float:
    xi2 = np.asarray(xi2, dtype=float)
    return float(np.sum(1.0 / ((xi2 - lam) * (xi2 - lam0))))


def heat_trace_diff(ts, mu, mu_mult, lam, lam_mult) -> np.ndarray:
    ts = np.asarray(ts, dtype=float)[:, None]
    with np.errstate(under="ignore"):
        pos = np.exp(-np.minimum(ts * np.asarray(mu, dtype=float)[None, :], 745.0))
        neg = np.exp(-np.minimum(ts * np.asarray(lam, dtype=float)[None, :], 745.0))
    return pos @ np.asarray(mu_mult, dtype=float) - neg @ np.asarray(lam_mult, dtype=float)


def resolvent_trace_sum(lam, mu, mu_mult, lams, lam_mult) -> float:
    mu = np.asarray(mu, dtype=float)
    lams = np.asarray(lams, dtype=float)
    s = np.sum(np.asarray(mu_mult, dtype=float) / (mu - lam))
    s -= np.sum(np.asarray(lam_mult, dtype=float) / (lams - lam))
    return float(s)
