"""Vectorized NumPy twins of the scalar kernels in :mod:`_sf_scalar`.

Same regime boundaries and series as the scalar versions, written with
boolean masks so an entire float64 grid is evaluated per call.  These back
the public API when the numba backend is disabled and serve as the
cross-check implementation for the backend-agreement tests and benchmarks.

The order ``nu`` is a scalar in every routine; only the argument vectorizes
(all hot call sites sweep the argument at fixed channel order).
"""

from __future__ import annotations

import math

import numpy as np

from ._sf_scalar import (
    _A1,
    _A2,
    _A3,
    _J_ASYM_SWITCH,
    _LANCZOS,
    _LANCZOS_G,
    _SQRT_2PI,
    EULER_GAMMA,
)


def gamma_vec(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    hi = x > 0.5
    z = np.where(hi, x, 1.0 - x) - 1.0
    acc = np.full_like(z, _LANCZOS[0])
    for k in range(1, 15):
        acc += _LANCZOS[k] / (z + k)
    t = z + _LANCZOS_G + 0.5
    g = _SQRT_2PI * t ** (z + 0.5) * np.exp(-t) * acc
    out[hi] = g[hi]
    lo = ~hi
    if np.any(lo):
        s = np.sin(math.pi * x[lo])
        with np.errstate(divide="ignore", invalid="ignore"):
            out[lo] = np.where(s == 0.0, np.nan, math.pi / (s * g[lo]))
    return out


def _rgamma1p(nu: float) -> float:
    # 1/Gamma(1+nu), zero at the poles
    if 1.0 + nu <= 0.0 and (1.0 + nu) == math.floor(1.0 + nu):
        return 0.0
    return 1.0 / float(gamma_vec(np.array([1.0 + nu]))[0])


def _series_ik(nu: float, x: np.ndarray, max_terms: int, alternating: bool) -> np.ndarray:
    """Ascending series of I_nu (alternating=False) or J_nu (True)."""
    t = np.exp(nu * np.log(0.5 * x)) * _rgamma1p(nu)
    s = t.copy()
    q = 0.25 * x * x
    sign = -1.0 if alternating else 1.0
    active = np.ones(x.shape, dtype=bool)
    for k in range(1, max_terms):
        t = t * (sign * q / (k * (k + nu)))
        s += np.where(active, t, 0.0)
        active &= np.abs(t) > 1e-17 * (np.abs(s) + 1e-300)
        if not active.any():
            break
    return s


def _asym_ik(nu: float, x: np.ndarray):
    mu4 = 4.0 * nu * nu
    term = np.ones_like(x)
    s_k = np.ones_like(x)
    s_i = np.ones_like(x)
    active = np.ones(x.shape, dtype=bool)
    for k in range(1, 60):
        nxt = term * ((mu4 - (2.0 * k - 1.0) ** 2) / (8.0 * k * x))
        active &= np.abs(nxt) < np.abs(term)
        term = np.where(active, nxt, 0.0)
        s_k += term
        s_i += term if k % 2 == 0 else -term
        active &= np.abs(term) >= 1e-18
        if not active.any():
            break
    kv = np.sqrt(math.pi / (2.0 * x)) * np.exp(-x) * s_k
    with np.errstate(over="ignore"):
        iv = (np.exp(x) * s_i - math.sin(math.pi * nu) * np.exp(-x) * s_k) / np.sqrt(
            2.0 * math.pi * x
        )
    iv = np.where(x > 705.0, np.inf, iv)
    return iv, kv


def _temme_gammas(mu: float):
    if abs(mu) < 1e-4:
        return -(_A1 + _A3 * mu * mu), 1.0 + _A2 * mu * mu
    fm = _rgamma1p(-mu)  # 1/Gamma(1-mu)
    fp = _rgamma1p(mu)
    return (fm - fp) / (2.0 * mu), 0.5 * (fm + fp)


def _temme_k(mu: float, x: np.ndarray, max_terms: int):
    d = -np.log(0.5 * x)
    sig = mu * d
    g1, g2 = _temme_gammas(mu)
    tiny = np.abs(sig) < 1e-8
    sig_safe = np.where(tiny, 1.0, sig)
    sinhc = np.where(tiny, 1.0 + sig * sig / 6.0, np.sinh(sig_safe) / sig_safe)
    pimu = math.pi * mu
    fact = pimu / math.sin(pimu) if abs(pimu) > 1e-15 else 1.0
    fk = fact * (g1 * np.cosh(sig) + g2 * sinhc * d)
    es = np.exp(sig)
    gp = float(gamma_vec(np.array([1.0 + mu]))[0])
    gm = float(gamma_vec(np.array([1.0 - mu]))[0])
    pk = 0.5 * es * gp
    qk = 0.5 / es * gm
    c = np.ones_like(x)
    q4 = 0.25 * x * x
    s0 = fk.copy()
    s1 = pk.copy()
    active = np.ones(x.shape, dtype=bool)
    for k in range(1, max_terms):
        fk = (k * fk + pk + qk) / (k * k - mu * mu)
        c = c * (q4 / k)
        pk = pk / (k - mu)
        qk = qk / (k + mu)
        d0 = c * fk
        s0 += np.where(active, d0, 0.0)
        s1 += np.where(active, c * (pk - k * fk), 0.0)
        active &= np.abs(d0) >= 1e-17 * np.abs(s0)
        if not active.any():
            break
    return s0, (2.0 / x) * s1


def _coshint_k(nu: float, x: np.ndarray) -> np.ndarray:
    # trapezoid on exp(-x cosh t) cosh(nu t); x > 2 here so t <= 6.1 suffices
    h = 0.17
    tmax = math.acosh(745.0 / 2.0)
    n = int(tmax / h) + 1
    t = h * np.arange(1, n + 1)
    with np.errstate(over="ignore"):
        ex = np.exp(-np.outer(x, np.cosh(t)))
    s = 0.5 * np.exp(-x) + ex @ np.cosh(nu * t)
    return h * s


def besselk_vec(nu: float, x: np.ndarray, switch_x: float, max_terms: int) -> np.ndarray:
    nu = abs(float(nu))
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    hi = x >= max(switch_x, 2.0)
    lo = (x <= 2.0) & ~hi
    mid = ~lo & ~hi
    if lo.any():
        if nu <= 0.5:
            out[lo] = _temme_k(nu, x[lo], max_terms)[0]
        else:
            out[lo] = _temme_k(nu - 1.0, x[lo], max_terms)[1]
    if mid.any():
        out[mid] = _coshint_k(nu, x[mid])
    if hi.any():
        out[hi] = _asym_ik(nu, x[hi])[1]
    return out


def besseli_vec(nu: float, x: np.ndarray, switch_x: float, max_terms: int) -> np.ndarray:
    nu = float(nu)
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    hi = x >= switch_x
    lo = ~hi
    if hi.any():
        out[hi] = _asym_ik(nu, x[hi])[0]
    if lo.any():
        if abs(nu + 1.0) < 1e-12:
            out[lo] = _series_ik(1.0, x[lo], max_terms, False)
        elif nu < 0.0:
            a = -nu
            out[lo] = _series_ik(a, x[lo], max_terms, False) + (
                2.0 / math.pi
            ) * math.sin(math.pi * a) * besselk_vec(a, x[lo], switch_x, max_terms)
        else:
            out[lo] = _series_ik(nu, x[lo], max_terms, False)
    return out


def _hankel_pq(nu: float, x: np.ndarray):
    mu4 = 4.0 * nu * nu
    p = np.ones_like(x)
    q = np.zeros_like(x)
    term = np.ones_like(x)
    active = np.ones(x.shape, dtype=bool)
    sgn_q = 1.0
    sgn_p = -1.0
    for k in range(1, 60):
        nxt = term * ((mu4 - (2.0 * k - 1.0) ** 2) / (8.0 * k * x))
        active &= np.abs(nxt) < np.abs(term)
        term = np.where(active, nxt, 0.0)
        if k % 2 == 1:
            q += sgn_q * term
            sgn_q = -sgn_q
        else:
            p += sgn_p * term
            sgn_p = -sgn_p
        active &= np.abs(term) >= 1e-18
        if not active.any():
            break
    return p, q


def besselj_vec(nu: float, x: np.ndarray, max_terms: int) -> np.ndarray:
    # small orders only (|nu| < 2); the eigenvalue towers use the scalar
    # Miller recurrence, which is not grid-hot
    nu = float(nu)
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    lo = x < _J_ASYM_SWITCH
    if lo.any():
        out[lo] = _series_ik(nu, x[lo], max_terms, True)
    hi = ~lo
    if hi.any():
        p, q = _hankel_pq(nu, x[hi])
        w = x[hi] - (0.5 * nu + 0.25) * math.pi
        out[hi] = np.sqrt(2.0 / (math.pi * x[hi])) * (np.cos(w) * p - np.sin(w) * q)
    return out


def bessely0_vec(x: np.ndarray, max_terms: int) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    hi = x >= _J_ASYM_SWITCH
    if hi.any():
        p, q = _hankel_pq(0.0, x[hi])
        w = x[hi] - 0.25 * math.pi
        out[hi] = np.sqrt(2.0 / (math.pi * x[hi])) * (np.sin(w) * p + np.cos(w) * q)
    lo = ~hi
    if lo.any():
        xl = x[lo]
        j0 = _series_ik(0.0, xl, max_terms, True)
        q4 = 0.25 * xl * xl
        t = np.ones_like(xl)
        s = np.zeros_like(xl)
        hk = 0.0
        sgn = 1.0
        active = np.ones(xl.shape, dtype=bool)
        for k in range(1, max_terms):
            t = t * (q4 / (k * k))
            hk += 1.0 / k
            s += np.where(active, sgn * t * hk, 0.0)
            sgn = -sgn
            active &= t * hk >= 1e-17 * (np.abs(s) + 1e-300)
            if not active.any():
                break
        out[lo] = (2.0 / math.pi) * ((np.log(0.5 * xl) + EULER_GAMMA) * j0 + s)
    return out
