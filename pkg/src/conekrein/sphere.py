"""Genus-0 example: the flat sphere with one 4*pi and six pi cone points.

The metric |z|^2 |dz|^2 / prod |z - z_k| on the Riemann sphere is flat with
a 4*pi cone point at z = 0 and pi cone points at the six roots z_k.  Near
z = 0 the distinguished conformal parameter is

    zeta(z) = ( int_0^z w dw / sqrt(prod_k (w - z_k)) )^{1/2},

with a square-root branch kept continuous along the integration path and
normalized so zeta ~ c z with Re c > 0.  The harmonic limit of the
scattering block on the two power channels nu = +-1/2 is controlled by the
Schwarzian derivative of the inverse map z(zeta) at zeta = 0:

    S_{1/2,1/2}(0)  = -(1/6) {z, zeta}|_0,
    S_{-1/2,-1/2}(0) = conj(S_{1/2,1/2}(0)),      off-diagonal entries = 0.

For a regular hexagon z_k = e^{i pi k / 3} the product is z^6 - 1, the
expansion of zeta has no z^2..z^6 corrections, and the block vanishes.

Away from lam = 0 the scattering matrix of this surface is not computable
in closed form; :class:`SphereS54Model` exposes the infinite-cone
asymptotic values instead (exact up to O(|lam|^-inf) by locality of the
resolvent), which is all the determinant-comparison constants need.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .channels import ChannelSet
from .errors import DomainError, UnsupportedModelError
from .models import SpectralModel, cone_s00, cone_snn

__all__ = [
    "SphereConfig",
    "hexagon_config",
    "distinguished_param",
    "zeta_series",
    "s0_block",
    "SphereS54Model",
]


@dataclass(frozen=True)
class SphereConfig:
    """Six pairwise distinct nonzero branch points z_1..z_6."""

    z_points: tuple

    def __post_init__(self):
        pts = tuple(complex(z) for z in self.z_points)
        if len(pts) != 6:
            raise DomainError("need exactly six branch points")
        if any(z == 0 for z in pts):
            raise DomainError("branch points must be nonzero")
        for i in range(6):
            for j in range(i + 1, 6):
                if pts[i] == pts[j]:
                    raise DomainError("branch points must be pairwise distinct")
        object.__setattr__(self, "z_points", pts)

    @property
    def min_radius(self) -> float:
        return min(abs(z) for z in self.z_points)

    def product_at(self, w: complex) -> complex:
        q = 1.0 + 0.0j
        for zk in self.z_points:
            q *= w - zk
        return q


def hexagon_config(scale: float = 1.0) -> SphereConfig:
    """The regular-hexagon configuration z_k = scale * e^{i pi k/3}."""
    return SphereConfig(tuple(scale * cmath.exp(1j * math.pi * k / 3.0) for k in range(1, 7)))


def _leading_constant(cfg: SphereConfig) -> complex:
    """c with zeta ~ c z near 0: c^2 = 1/(2 sqrt(q(0))), Re c > 0."""
    s0 = cmath.sqrt(cfg.product_at(0.0))  # principal branch anchors everything
    c2 = 1.0 / (2.0 * s0)
    c = cmath.sqrt(c2)
    if c.real < 0 or (c.real == 0 and c.imag < 0):
        c = -c
    return c


# 15-point Gauss-Legendre nodes/weights on [0, 1]
_GL_X, _GL_W = np.polynomial.legendre.leggauss(15)
_GL_X = 0.5 * (_GL_X + 1.0)
_GL_W = 0.5 * _GL_W


def distinguished_param(cfg: SphereConfig, z: complex, abs_tol: float = 1e-11) -> complex:
    """zeta(z) by composite quadrature along the straight segment [0, z].

    The square root of prod (w - z_k) is tracked continuously along the
    path (panels are split until the product's phase step is < pi/4), and
    the final square root is aligned with the small-z normalization
    zeta ~ c z, Re c > 0.

    Raises
    ------
    DomainError
        If the segment passes through (numerically: within 1e-9 of) a
        branch point.
    """
    z = complex(z)
    if z == 0:
        return 0.0j
    # segment distance to each branch point
    for zk in cfg.z_points:
        t = max(0.0, min(1.0, (zk.conjugate() * z).real / abs(z) ** 2))
        if abs(t * z - zk) < 1e-9:
            raise DomainError("integration path passes through a branch point")

    # initial split keeping the endpoint phase step of q below pi/4 so the
    # branch continuation cannot slip a sheet
    ts = [0.0, 1.0]
    i = 0
    while i + 1 < len(ts):
        qa = cfg.product_at(ts[i] * z)
        qb = cfg.product_at(ts[i + 1] * z)
        dphi = abs(cmath.phase(qb / qa))
        if dphi > math.pi / 4.0 and ts[i + 1] - ts[i] > 1e-6:
            ts.insert(i + 1, 0.5 * (ts[i] + ts[i + 1]))
        else:
            i += 1

    def panel(a, b, sref):
        """GL15 value of int_a^b t z^2 / sqrt(q(t z)) dt with branch from sref."""
        h = b - a
        acc = 0.0j
        s = sref
        for x, w in zip(_GL_X, _GL_W):
            t = a + h * x
            q = cfg.product_at(t * z)
            r = cmath.sqrt(q)
            if abs(r - s) > abs(r + s):
                r = -r
            s = r
            acc += w * t / r
        # carry the branch to the right endpoint
        r = cmath.sqrt(cfg.product_at(b * z))
        if abs(r - s) > abs(r + s):
            r = -r
        return acc * h * z * z, r

    total = 0.0j
    sref = cmath.sqrt(cfg.product_at(0.0))
    stack = list(zip(ts[:-1], ts[1:]))
    panel_tol = 0.25 * abs_tol / max(len(stack), 1) * 1e-2
    while stack:
        a, b = stack.pop(0)
        coarse, _ = panel(a, b, sref)
        m = 0.5 * (a + b)
        left, smid = panel(a, m, sref)
        right, send = panel(m, b, smid)
        if abs(coarse - (left + right)) < max(panel_tol * (b - a), 1e-16) or b - a < 1e-7:
            total += left + right
            sref = send
        else:
            stack.insert(0, (m, b))
            stack.insert(0, (a, m))
    # zeta = sqrt(total), aligned with the c z normalization near the origin
    c = _leading_constant(cfg)
    zeta = cmath.sqrt(total)
    ref = c * z
    if abs(zeta - ref) > abs(zeta + ref):
        zeta = -zeta
    return zeta


def _poly_mul(a, b, order):
    out = [0.0j] * (order + 1)
    for i, ai in enumerate(a):
        if i > order:
            break
        for j, bj in enumerate(b):
            if i + j > order:
                break
            out[i + j] += ai * bj
    return out


def zeta_series(cfg: SphereConfig, order: int = 6) -> np.ndarray:
    """Taylor coefficients [c_1..c_order] of zeta(z) = sum c_n z^n at 0.

    From the power sums P_m = sum_k z_k^{-m}:
    1/sqrt(q(w)) = q(0)^{-1/2} exp( (1/2) sum_m P_m w^m / m ), integrated
    termwise and square-rooted as a series.
    """
    n = order + 2
    pm = [sum(zk ** (-m) for zk in cfg.z_points) for m in range(1, n + 1)]
    # exp of g(w) = 1/2 sum P_m w^m / m, coefficients E_0..E_{n}
    g = [0.0j] + [0.5 * pm[m - 1] / m for m in range(1, n + 1)]
    e = [1.0 + 0.0j] + [0.0j] * n
    for k in range(1, n + 1):  # e' = g' e
        acc = 0.0j
        for j in range(1, k + 1):
            acc += j * g[j] * e[k - j]
        e[k] = acc / k
    # zeta^2 = q(0)^{-1/2} sum_j E_j z^{j+2}/(j+2) = c^2 z^2 (1 + sum r_j z^j)
    r = [2.0 * e[j] / (j + 2.0) for j in range(1, order + 1)]
    # sqrt(1 + sum r_j z^j) as a series: u with u_0 = 1
    u = [1.0 + 0.0j] + [0.0j] * order
    for k in range(1, order + 1):
        acc = r[k - 1] if k - 1 < len(r) else 0.0j
        for j in range(1, k):
            acc -= u[j] * u[k - j]
        u[k] = 0.5 * acc
    c = _leading_constant(cfg)
    return np.array([c * u[j - 1] for j in range(1, order + 1)])


def invert_series(c: np.ndarray) -> np.ndarray:
    """Coefficients [a_1..a_N] of the inverse of z -> sum c_n z^n (c_1 != 0)."""
    N = len(c)
    if c[0] == 0:
        raise DomainError("series not invertible: vanishing linear coefficient")
    a = [0.0j] * (N + 1)  # a[n] multiplies zeta^n
    a[1] = 1.0 / c[0]
    for n in range(2, N + 1):
        # the zeta^n coefficient of sum_k c_k z(zeta)^k must vanish; with
        # a_n temporarily 0 it equals acc, and the full coefficient is
        # acc + c_1 a_n
        cur = [0.0j] + a[1:n] + [0.0j] * (N + 1 - n)
        zk = cur[:]
        acc = c[0] * zk[n]
        for k in range(2, n + 1):
            zk = _poly_mul(zk, cur, n)
            acc += c[k - 1] * zk[n]
        a[n] = -acc / c[0]
    return np.array(a[1:])


def schwarzian_at_zero(a: np.ndarray) -> complex:
    """{z, zeta}|_0 for z = a_1 zeta + a_2 zeta^2 + a_3 zeta^3 + ..."""
    a1, a2, a3 = a[0], a[1], a[2]
    return 6.0 * a3 / a1 - 6.0 * (a2 / a1) ** 2


def s0_block(cfg: SphereConfig) -> np.ndarray:
    """Harmonic-limit scattering block over the nu = (-1/2, +1/2) channels.

    Diagonal 2x2 in channel order (k = -1, k = +1); the k = +1 entry is
    -(1/6) {z, zeta}|_0 and the k = -1 entry its complex conjugate.
    """
    coeffs = zeta_series(cfg, order=5)
    a = invert_series(coeffs[:4])
    s_plus = -schwarzian_at_zero(a) / 6.0
    return np.array([[s_plus.conjugate(), 0.0], [0.0, s_plus]])


@dataclass(frozen=True)
class SphereS54Model(SpectralModel):
    """The 4*pi + six-pi-points sphere, exposed through its cone asymptotics.

    ``s_matrix(lam)`` returns the infinite-cone diagonal values, which agree
    with the true scattering matrix up to O(|lam|^{-inf}) for lam -> -inf;
    this is exact enough for the asymptotic constants (alpha_0, Gamma) but
    *not* a small-|lam| approximation -- use ``s_matrix_at_zero`` there.
    """

    config: SphereConfig

    s_matrix_is_asymptotic = True
    supports_positive_lambda = False
    friedrichs_kernel_dim = 1  # constants

    def channel_set(self) -> ChannelSet:
        pts = [(0, 4.0 * math.pi)] + [(i, math.pi) for i in range(1, 7)]
        return ChannelSet(points=tuple(pts))

    def s_matrix(self, lam: float) -> np.ndarray:
        cs = self.channel_set()
        diag = [
            cone_s00(lam) if c.is_log else cone_snn(c.nu, lam) for c in cs.channels
        ]
        return np.diag(np.array(diag, dtype=complex))

    def s_matrix_at_zero(self) -> np.ndarray:
        """Full-size S(0); log-channel entries are nan (undefined at lam = 0)."""
        cs = self.channel_set()
        out = np.full((cs.n, cs.n), 0.0, dtype=complex)
        block = s0_block(self.config)
        im, ip = cs.index(0, -1), cs.index(0, 1)
        out[im, im] = block[0, 0]
        out[ip, ip] = block[1, 1]
        for i in cs.log_indices:
            out[i, i] = complex(math.nan, 0.0)
        return out

    def friedrichs_eigenvalues(self, lmax: float):
        raise UnsupportedModelError(
            "sphere model: eigenvalues of the curved-glued surface are not "
            "computable in closed form (only asymptotic constants and S(0))"
        )

    def to_json_dict(self) -> dict:
        return {
            "type": "sphere_s54",
            "z_points": [[z.real, z.imag] for z in self.config.z_points],
        }
