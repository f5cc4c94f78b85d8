"""Compiled (njit) implementations of the hot array kernels.

Importable only when numba is installed; :mod:`conekrein.kernels` selects
between this module and :mod:`conekrein._kernels_numpy` at import time.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit

from ._sf_scalar import besselk_scalar


@njit(cache=True)
def lattice_k0_sum(kappa: float, norms: np.ndarray) -> float:
    """sum_i K_0(kappa * norms[i]) over nonzero lattice vector lengths."""
    s = 0.0
    for i in range(norms.size):
        z = kappa * norms[i]
        if z > 705.0:  # exp underflow; the term is < 1e-306
            continue
        s += besselk_scalar(0.0, z, 15.0, 400)
    return s


@njit(cache=True)
def resolvent_pair_sum(lam: float, lam0: float, xi2: np.ndarray) -> float:
    """sum_i 1 / ((xi2[i] - lam) * (xi2[i] - lam0))."""
    s = 0.0
    for i in range(xi2.size):
        s += 1.0 / ((xi2[i] - lam) * (xi2[i] - lam0))
    return s


@njit(cache=True)
def heat_trace_diff(
    ts: np.ndarray,
    mu: np.ndarray,
    mu_mult: np.ndarray,
    lam: np.ndarray,
    lam_mult: np.ndarray,
) -> np.ndarray:
    """theta_rel(t) = sum m_j exp(-t mu_j) - sum m_j exp(-t lam_j) on a t grid."""
    out = np.zeros(ts.size)
    for k in range(ts.size):
        t = ts[k]
        acc = 0.0
        for i in range(mu.size):
            e = t * mu[i]
            if e < 745.0:
                acc += mu_mult[i] * math.exp(-e)
        for i in range(lam.size):
            e = t * lam[i]
            if e < 745.0:
                acc -= lam_mult[i] * math.exp(-e)
        out[k] = acc
    return out


@njit(cache=True)
def resolvent_trace_sum(
    lam: float, mu: np.ndarray, mu_mult: np.ndarray, lams: np.ndarray, lam_mult: np.ndarray
) -> float:
    """sum m_j/(mu_j - lam) - sum m_j/(lam_j - lam) (paired spectra)."""
    s = 0.0
    for i in range(mu.size):
        s += mu_mult[i] / (mu[i] - lam)
    for i in range(lams.size):
        s -= lam_mult[i] / (lams[i] - lam)
    return s
