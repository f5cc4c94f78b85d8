"""Solvable spectral models: S-matrices, eigenvalue towers, channel data.

A :class:`SpectralModel` exposes, for one exactly solvable flat geometry,

* ``channel_set()``          -- the cone points and their channels,
* ``s_matrix(lam)``          -- the scattering matrix mapping incoming to
                                outgoing coefficients (real lam < 0 always;
                                compact models continue it meromorphically
                                to lam > 0),
* ``s_matrix_at_zero()``     -- the harmonic limit where defined,
* ``friedrichs_eigenvalues`` -- the spectrum of the Friedrichs extension.

Implemented geometries:

``cone_s_matrix``       infinite cone of angle theta (closed form),
``TruncatedConeModel``  cone truncated at r = R with a Dirichlet circle,
``TorusPointModel``     flat torus with one marked 2*pi point (log channel
                        only), via image sums of K_0 and once-subtracted
                        dual-lattice sums,
``SphereS54Model``      (in :mod:`conekrein.sphere`) the genus-0 example.

Sign conventions follow the closed cone forms

    S_00(lam)    = ln(sqrt(-lam)) - (ln 2 - gamma),
    S_nunu(lam)  = -Gamma(1-|nu|) (-lam)^|nu| / (2^{2|nu|} Gamma(1+|nu|)),

which every compact model must approach as lam -> -inf (locality of the
resolvent); the Krein trace-identity tests pin the remaining signs.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from . import kernels
from .channels import ChannelSet
from .errors import DomainError, PoleError, UnsupportedModelError
from .specfun import (
    bessel_i,
    bessel_j,
    bessel_j_zeros_upto,
    bessel_k,
    bessel_y,
    gamma_fn,
)
from ._sf_scalar import EULER_GAMMA

LN2_MINUS_GAMMA = math.log(2.0) - EULER_GAMMA


# ----------------------------------------------------------------------
# spectra
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class SpectrumList:
    """Nondecreasing eigenvalues with integer multiplicities and labels."""

    values: np.ndarray
    multiplicities: np.ndarray
    labels: tuple

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        m = np.asarray(self.multiplicities, dtype=int)
        if v.shape != m.shape or v.ndim != 1 or len(self.labels) != v.size:
            raise DomainError("spectrum arrays must be 1-d of equal length")
        if np.any(np.diff(v) < -1e-12 * np.maximum(1.0, np.abs(v[:-1]))):
            raise DomainError("eigenvalues must be nondecreasing")
        if np.any(m < 1):
            raise DomainError("multiplicities must be >= 1")
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "multiplicities", m)
        object.__setattr__(self, "labels", tuple(self.labels))

    @staticmethod
    def from_unsorted(values, multiplicities, labels) -> "SpectrumList":
        order = np.argsort(np.asarray(values, dtype=float), kind="stable")
        v = np.asarray(values, dtype=float)[order]
        m = np.asarray(multiplicities, dtype=int)[order]
        lab = tuple(labels[i] for i in order)
        return SpectrumList(v, m, lab)

    def truncated(self, lmax: float) -> "SpectrumList":
        keep = self.values <= lmax
        return SpectrumList(
            self.values[keep],
            self.multiplicities[keep],
            tuple(l for l, k in zip(self.labels, keep) if k),
        )

    def select(self, label: str) -> "SpectrumList":
        keep = np.array([l == label for l in self.labels], dtype=bool)
        return SpectrumList(
            self.values[keep],
            self.multiplicities[keep],
            tuple(l for l in self.labels if l == label),
        )

    def count_below(self, x: float) -> int:
        return int(np.sum(self.multiplicities[self.values < x]))

    @property
    def total(self) -> int:
        return int(np.sum(self.multiplicities))

    def rows(self):
        """(eigenvalue, multiplicity, channel) rows for CSV export."""
        return [
            (float(v), int(m), l)
            for v, m, l in zip(self.values, self.multiplicities, self.labels)
        ]


# ----------------------------------------------------------------------
# infinite cone (closed form)
# ----------------------------------------------------------------------


def cone_s00(lam: float) -> float:
    """Log-channel entry of the infinite-cone S-matrix (angle independent)."""
    if lam >= 0:
        raise DomainError("infinite cone: need lam < 0")
    return 0.5 * math.log(-lam) - LN2_MINUS_GAMMA


def cone_snn(nu: float, lam: float) -> float:
    """Power-channel diagonal entry of the infinite-cone S-matrix."""
    if lam >= 0:
        raise DomainError("infinite cone: need lam < 0")
    a = abs(nu)
    g = float(gamma_fn(1.0 - a)) / float(gamma_fn(1.0 + a))
    return -g * (-lam) ** a / 4.0**a


def cone_s_matrix(theta: float, lam: float) -> tuple:
    """Diagonal S-matrix of the infinite cone of angle ``theta`` at lam < 0.

    Returns ``(channel_set, matrix)``; off-diagonal entries are exactly 0.
    The essential spectrum of the cone is [0, inf), so no continuation to
    lam >= 0 is offered.
    """
    cs = ChannelSet(points=((0, float(theta)),))
    if lam >= 0:
        raise DomainError("infinite cone: need lam < 0")
    diag = [
        cone_s00(lam) if c.is_log else cone_snn(c.nu, lam) for c in cs.channels
    ]
    return cs, np.diag(np.array(diag, dtype=float))


# ----------------------------------------------------------------------
# model protocol
# ----------------------------------------------------------------------


class SpectralModel:
    """Common surface of the solvable models (duck-typed; see module doc)."""

    has_s0_log_channel = False
    supports_positive_lambda = False
    s_matrix_is_asymptotic = False
    friedrichs_kernel_dim = 0

    def channel_set(self) -> ChannelSet:
        raise NotImplementedError

    def s_matrix(self, lam: float) -> np.ndarray:
        raise NotImplementedError

    def s_matrix_at_zero(self) -> np.ndarray:
        raise UnsupportedModelError(f"{type(self).__name__}: S(0) not defined")

    def friedrichs_eigenvalues(self, lmax: float) -> SpectrumList:
        raise NotImplementedError

    def channel_tower(self, k: int, lmax: float) -> SpectrumList:
        """Friedrichs tower coupled to channel (0, k); overridden for speed."""
        return self.friedrichs_eigenvalues(lmax).select(f"0:{k}")

    def s_matrix_deriv(self, lam: float):
        """Analytic dS/dlam where available, else None (callers fall back to FD)."""
        return None

    def to_json_dict(self) -> dict:
        raise NotImplementedError


# ----------------------------------------------------------------------
# truncated cone with Dirichlet boundary circle
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class TruncatedConeModel(SpectralModel):
    """Cone of angle ``theta`` cut at r = R, Dirichlet condition at r = R.

    Separation of variables gives per-channel scattering entries

        S_nunu(lam<0) = S^cone_nunu(lam) [1 + (2 sin(pi nu)/pi) K_nu(kR)/I_nu(kR)],
        S_00(lam<0)   = ln(k/2) + gamma + K_0(kR)/I_0(kR),        k = sqrt(-lam),

    continued through lam = 0 (S_nunu(0) = -R^{-2 nu}, S_00(0) = -ln R) to

        S_nunu(lam>0) = -(s/2)^{2 nu} [G(1-nu)/G(1+nu)] J_{-nu}(sR)/J_nu(sR),
        S_00(lam>0)   = ln(s/2) + gamma - (pi/2) Y_0(sR)/J_0(sR),  s = sqrt(lam),

    by matching the decaying/oscillatory radial solutions at the Dirichlet
    circle.  Friedrichs eigenvalues are (j_{nu,m}/R)^2 over all angular
    modes, including the integer-like towers with exponent >= 1.
    """

    theta: float
    radius: float = 1.0

    has_s0_log_channel = True
    supports_positive_lambda = True

    def __post_init__(self):
        if self.theta <= 0 or self.radius <= 0:
            raise DomainError("need theta > 0 and R > 0")

    def channel_set(self) -> ChannelSet:
        return ChannelSet(points=((0, self.theta),))

    def _check_pole(self, sr: float, orders) -> None:
        for a in orders:
            if abs(float(bessel_j(a, sr))) < 1e-13:
                raise PoleError(
                    f"lambda is at (or numerically at) a Dirichlet eigenvalue "
                    f"(J_{a:g}({sr:g}) ~ 0)"
                )

    def s_matrix(self, lam: float) -> np.ndarray:
        cs = self.channel_set()
        R = self.radius
        diag = np.empty(cs.n)
        if lam < 0:
            kap = math.sqrt(-lam)
            z = kap * R
            for i, c in enumerate(cs.channels):
                a = abs(c.nu)
                ratio = float(bessel_k(a, z)) / float(bessel_i(a, z))
                if c.is_log:
                    diag[i] = cone_s00(lam) + ratio
                else:
                    diag[i] = cone_snn(a, lam) * (
                        1.0 + (2.0 * math.sin(math.pi * a) / math.pi) * ratio
                    )
        elif lam == 0:
            return self.s_matrix_at_zero()
        else:
            s = math.sqrt(lam)
            z = s * R
            self._check_pole(z, sorted({abs(c.nu) for c in cs.channels}))
            for i, c in enumerate(cs.channels):
                a = abs(c.nu)
                if c.is_log:
                    diag[i] = (
                        math.log(0.5 * s)
                        + EULER_GAMMA
                        - 0.5 * math.pi * float(bessel_y(0.0, z)) / float(bessel_j(0.0, z))
                    )
                else:
                    g = float(gamma_fn(1.0 - a)) / float(gamma_fn(1.0 + a))
                    diag[i] = (
                        -((0.5 * s) ** (2 * a))
                        * g
                        * float(bessel_j(-a, z))
                        / float(bessel_j(a, z))
                    )
        return np.diag(diag)

    def s_matrix_at_zero(self) -> np.ndarray:
        cs = self.channel_set()
        R = self.radius
        diag = [
            -math.log(R) if c.is_log else -R ** (-2.0 * abs(c.nu))
            for c in cs.channels
        ]
        return np.diag(np.array(diag))

    def friedrichs_eigenvalues(self, lmax: float) -> SpectrumList:
        if lmax <= 0:
            return SpectrumList(np.array([]), np.array([], dtype=int), ())
        R = self.radius
        xmax = math.sqrt(lmax) * R
        vals, mults, labels = [], [], []
        m = 0
        while True:
            nu = 2.0 * math.pi * m / self.theta
            if nu > xmax + 2.0:  # first zero exceeds the window
                break
            zeros = bessel_j_zeros_upto(nu, xmax)
            if zeros.size == 0 and nu > 1.0:
                break
            for z in zeros:
                lam = (z / R) ** 2
                if m == 0:
                    vals.append(lam)
                    mults.append(1)
                    labels.append("0:0")
                elif nu < 1.0:
                    for k in (m, -m):
                        vals.append(lam)
                        mults.append(1)
                        labels.append(f"0:{k}")
                else:
                    vals.append(lam)
                    mults.append(2)
                    labels.append(f"bulk:0:{m}")
            m += 1
        return SpectrumList.from_unsorted(
            np.array(vals), np.array(mults, dtype=int), labels
        )

    def channel_tower(self, k: int, lmax: float) -> SpectrumList:
        """Friedrichs eigenvalues of one channel: (j_{|nu|,m}/R)^2 <= lmax.

        Cheap compared to ``friedrichs_eigenvalues`` (no bulk towers), which
        matters when the trace-identity oracle wants 10^2..10^3 gap pairs.
        """
        cs = self.channel_set()
        nu = abs(cs.channels[cs.index(0, k)].nu)
        zeros = bessel_j_zeros_upto(nu, math.sqrt(max(lmax, 0.0)) * self.radius)
        vals = (zeros / self.radius) ** 2
        lab = f"0:{k}"
        return SpectrumList(vals, np.ones(vals.size, dtype=int), tuple(lab for _ in vals))

    def g_profile(self, k: int, lam: float, n_samples: int = 200) -> "GProfile":
        return _tc_g_profile(self, k, lam, n_samples)

    def s_matrix_deriv(self, lam: float):
        return None  # finite differences are accurate enough here

    def to_json_dict(self) -> dict:
        return {"type": "truncated_cone", "theta": self.theta, "radius": self.radius}


# ----------------------------------------------------------------------
# channel comparison profiles on the truncated cone
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class GProfile:
    """Radial profile of the channel comparison function at one (channel, lam).

    ``values`` carry the a- = 1 normalization (unit coefficient of
    r^{-|nu|}); ``norm_sq`` is the squared L2 norm in the cone measure
    theta * int |radial|^2 r dr.
    """

    point_id: int
    k: int
    lam: float
    r: np.ndarray
    values: np.ndarray
    norm_sq: float


def _tc_radial(model: TruncatedConeModel, nu: float, kap: float):
    R = model.radius
    c = float(bessel_k(nu, kap * R)) / float(bessel_i(nu, kap * R))
    btil = (
        (2.0 * math.sin(math.pi * nu) / math.pi)
        * float(gamma_fn(1.0 - nu))
        * (0.5 * kap) ** nu
    )

    def radial(r):
        return btil * (
            float(bessel_k(nu, kap * r)) - c * float(bessel_i(nu, kap * r))
        )

    return radial


def _tc_g_profile(model: TruncatedConeModel, k: int, lam: float, n_samples: int) -> GProfile:
    if lam >= 0:
        raise DomainError("g_profile: need lam < 0")
    if k == 0:
        raise UnsupportedModelError(
            "log-channel comparison profiles are excluded: the printed "
            "log-channel entry decreases in lam, so no positive norm "
            "convention reproduces its derivative"
        )
    cs = model.channel_set()
    nu = abs(cs.channels[cs.index(0, k)].nu)
    kap = math.sqrt(-lam)
    radial = _tc_radial(model, nu, kap)
    R = model.radius
    # integrate |radial|^2 r dr with r = u^{1/(1-nu)} to flatten the
    # r^{-2 nu} endpoint singularity
    p = 1.0 / (1.0 - nu)

    def integrand(u):
        r = u**p
        return p * radial(r) ** 2 * u ** (2.0 * p - 1.0)

    val, _ = quad(integrand, 0.0, R ** (1.0 / p), epsabs=1e-11, epsrel=1e-11, limit=200)
    rs = np.linspace(R / n_samples, R, n_samples)
    return GProfile(
        point_id=0,
        k=k,
        lam=lam,
        r=rs,
        values=np.array([radial(r) for r in rs]),
        norm_sq=model.theta * val,
    )


def g_gram(model, mu_k: int, nu_k: int, lam: float) -> float:
    """Inner product of two channel comparison functions at lam < 0.

    Distinct channels at the same point are orthogonal (angular modes);
    the diagonal equals dS_nunu/dlam in the normalization where that
    identity holds, i.e. with channel constants 1/sqrt(2|nu| theta)
    (the derivative test in the suite pins this convention).
    """
    if not isinstance(model, TruncatedConeModel):
        raise UnsupportedModelError("g_gram: only the truncated cone exposes profiles")
    if mu_k != nu_k:
        return 0.0
    prof = model.g_profile(nu_k, lam)
    cs = model.channel_set()
    nu = abs(cs.channels[cs.index(0, nu_k)].nu)
    return prof.norm_sq / (2.0 * nu * model.theta)


# ----------------------------------------------------------------------
# flat torus with one marked point
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class TorusLattice:
    """Lattice data of a flat torus R^2 / L, L spanned by v1 and v2.

    The dual basis satisfies b_i . v_j = 2 pi delta_ij, so the Friedrichs
    eigenvalues are |m b1 + n b2|^2 over integers (m, n).
    """

    v1: tuple
    v2: tuple

    def __post_init__(self):
        v1 = (float(self.v1[0]), float(self.v1[1]))
        v2 = (float(self.v2[0]), float(self.v2[1]))
        if abs(v1[0] * v2[1] - v1[1] * v2[0]) <= 0:
            raise DomainError("lattice vectors must be linearly independent")
        object.__setattr__(self, "v1", v1)
        object.__setattr__(self, "v2", v2)

    @property
    def area(self) -> float:
        return abs(self.v1[0] * self.v2[1] - self.v1[1] * self.v2[0])

    @property
    def dual_basis(self) -> tuple:
        a = self.v1[0] * self.v2[1] - self.v1[1] * self.v2[0]
        b1 = (2.0 * math.pi * self.v2[1] / a, -2.0 * math.pi * self.v2[0] / a)
        b2 = (-2.0 * math.pi * self.v1[1] / a, 2.0 * math.pi * self.v1[0] / a)
        return b1, b2

    def vector_norms_upto(self, rmax: float) -> np.ndarray:
        """Norms of all nonzero lattice vectors with |gamma| <= rmax."""
        b1, b2 = self.dual_basis
        m_max = int(rmax * math.hypot(*b1) / (2.0 * math.pi)) + 1
        n_max = int(rmax * math.hypot(*b2) / (2.0 * math.pi)) + 1
        ms = np.arange(-m_max, m_max + 1)
        ns = np.arange(-n_max, n_max + 1)
        mm, nn = np.meshgrid(ms, ns, indexing="ij")
        gx = mm * self.v1[0] + nn * self.v2[0]
        gy = mm * self.v1[1] + nn * self.v2[1]
        r = np.hypot(gx, gy).ravel()
        r = r[(r > 0) & (r <= rmax)]
        return np.sort(r)

    def dual_norms_sq_upto(self, smax: float) -> np.ndarray:
        """|xi|^2 (including 0) over dual vectors with |xi|^2 <= smax."""
        b1, b2 = self.dual_basis
        rmax = math.sqrt(max(smax, 0.0))
        m_max = int(rmax * math.hypot(*self.v1) / (2.0 * math.pi)) + 1
        n_max = int(rmax * math.hypot(*self.v2) / (2.0 * math.pi)) + 1
        ms = np.arange(-m_max, m_max + 1)
        ns = np.arange(-n_max, n_max + 1)
        mm, nn = np.meshgrid(ms, ns, indexing="ij")
        gx = mm * b1[0] + nn * b2[0]
        gy = mm * b1[1] + nn * b2[1]
        s = (gx * gx + gy * gy).ravel()
        return np.sort(s[s <= smax])

    @property
    def shortest_vector(self) -> float:
        return float(self.vector_norms_upto(max(math.hypot(*self.v1), math.hypot(*self.v2)) + 1e-9)[0])


# image-sum truncation: K_0(z) < 1e-16 once z > 38, and the lattice tail
# beyond that radius is dominated by a geometric factor
_K0_CUT = 38.0


@dataclass(frozen=True)
class TorusPointModel(SpectralModel):
    """Flat torus with one marked smooth (angle 2 pi) point.

    The marked point carries a single logarithmic channel.  For lam < 0
    the comparison function is the periodized free kernel, giving

        S_00(lam) = ln(sqrt(-lam)/2) + gamma - sum_{gamma != 0} K_0(sqrt(-lam) |gamma|),

    which approaches the plane (2 pi cone) value exponentially fast in
    sqrt(-lam) * (shortest lattice vector).  Away from the negative axis the
    entry continues through the once-subtracted dual-lattice sum

        S_00(lam) = S_00(lam0) - (lam - lam0) (2 pi / A) sum_xi 1/((|xi|^2-lam)(|xi|^2-lam0)),

    anchored at a lam0 < 0 evaluated by the image sum.  (The minus sign is
    forced by dS_00/dlam = -(2 pi/A) sum (|xi|^2-lam)^{-2} < 0, matching the
    decreasing cone entry; the Krein trace-identity suite cross-checks it.)
    """

    lattice: TorusLattice
    anchor_lam: float = None
    dual_tail_atol: float = 1e-9

    has_s0_log_channel = False  # lam = 0 is a Friedrichs eigenvalue (pole)
    supports_positive_lambda = True
    friedrichs_kernel_dim = 1  # the constant function

    def __post_init__(self):
        if self.anchor_lam is None:
            # image sum at the anchor should see only O(10^3) lattice points
            lmin = self.lattice.shortest_vector
            object.__setattr__(self, "anchor_lam", -max(1.0, (2.0 / lmin) ** 2))
        if self.anchor_lam >= 0:
            raise DomainError("anchor must be negative")
        object.__setattr__(self, "_cache", {})
        object.__setattr__(self, "_lock", threading.Lock())
        object.__setattr__(self, "_dual_cache", {})

    def channel_set(self) -> ChannelSet:
        return ChannelSet(points=((0, 2.0 * math.pi),))

    # -- image sum (lam < 0) ------------------------------------------------

    def s00_image(self, lam: float) -> float:
        if lam >= 0:
            raise DomainError("image sum: need lam < 0")
        key = float(lam)
        with self._lock:
            if key in self._cache:
                return self._cache[key]
        kap = math.sqrt(-lam)
        rmax = _K0_CUT / kap
        norms = self.lattice.vector_norms_upto(rmax)
        val = cone_s00(lam) - kernels.lattice_k0_sum(kap, norms)
        with self._lock:
            self._cache[key] = val
        return val

    # -- once-subtracted dual sum (any real lam off the spectrum) -----------

    def _dual_modes(self, smax: float) -> np.ndarray:
        key = round(smax, 6)
        with self._lock:
            arr = self._dual_cache.get(key)
        if arr is None:
            arr = self.lattice.dual_norms_sq_upto(smax)
            with self._lock:
                self._dual_cache[key] = arr
        return arr

    def s00_spectral(self, lam: float, lam0: float = None) -> float:
        lam0 = self.anchor_lam if lam0 is None else lam0
        base = self.s00_image(lam0)
        if lam == lam0:
            return base
        area = self.lattice.area
        # cutoff from the fluctuation scale of the counting function; the
        # smooth part of the tail is added back in closed form below
        T = max(
            64.0,
            16.0 * abs(lam),
            16.0 * abs(lam0),
            (4.0 * area / self.dual_tail_atol) ** (2.0 / 3.0),
        )
        xi2 = self._dual_modes(T)
        self._check_pole(lam, xi2)
        s = kernels.resolvent_pair_sum(lam, lam0, xi2)
        # continuum tail: density A/(4 pi) modes per unit of |xi|^2
        if abs(lam - lam0) > 1e-300:
            tail = (
                area
                / (4.0 * math.pi)
                * math.log((T - lam0) / (T - lam))
                / (lam - lam0)
            )
        else:
            tail = area / (4.0 * math.pi) / (T - lam)
        return base - (lam - lam0) * (2.0 * math.pi / area) * (s + tail)

    @staticmethod
    def _check_pole(lam: float, xi2: np.ndarray) -> None:
        if xi2.size and np.min(np.abs(xi2 - lam)) < 1e-9 * max(1.0, abs(lam)):
            raise PoleError("lambda is at (or numerically at) a torus eigenvalue")

    def s00(self, lam: float) -> float:
        # the image sum needs ~ (K0 cutoff / (kappa l_min))^2 lattice points,
        # so hand small |lam| to the spectral continuation instead
        lmin = self.lattice.shortest_vector
        if lam < 0 and (-lam) >= (0.7 / lmin) ** 2:
            return self.s00_image(lam)
        return self.s00_spectral(lam)

    def s_matrix(self, lam: float) -> np.ndarray:
        return np.array([[self.s00(lam)]])

    def s_matrix_deriv(self, lam: float) -> np.ndarray:
        """dS_00/dlam = -(2 pi / A) sum (|xi|^2 - lam)^{-2} (exact sum + tail)."""
        area = self.lattice.area
        T = max(64.0, 16.0 * abs(lam), (4.0 * area / self.dual_tail_atol) ** (2.0 / 3.0))
        xi2 = self._dual_modes(T)
        self._check_pole(lam, xi2)
        s = kernels.resolvent_pair_sum(lam, lam, xi2)
        tail = area / (4.0 * math.pi) / (T - lam)
        return np.array([[-(2.0 * math.pi / area) * (s + tail)]])

    def channel_tower(self, k: int, lmax: float) -> SpectrumList:
        """The single (log) channel couples to the whole dual spectrum."""
        if k != 0:
            raise DomainError("torus has only the k = 0 channel")
        return self.friedrichs_eigenvalues(lmax)

    def friedrichs_eigenvalues(self, lmax: float) -> SpectrumList:
        s = self._dual_modes(max(lmax, 0.0))
        s = s[s <= lmax]
        vals, mults = [], []
        i = 0
        while i < s.size:
            j = i
            while j + 1 < s.size and s[j + 1] - s[i] <= 1e-9 * max(1.0, s[i]):
                j += 1
            vals.append(float(np.mean(s[i : j + 1])))
            mults.append(j - i + 1)
            i = j + 1
        labels = tuple("0:0" for _ in vals)
        return SpectrumList(np.array(vals), np.array(mults, dtype=int), labels)

    def to_json_dict(self) -> dict:
        return {
            "type": "torus",
            "v1": list(self.lattice.v1),
            "v2": list(self.lattice.v2),
            "anchor_lam": self.anchor_lam,
        }


def model_from_json(d: dict) -> SpectralModel:
    """Rebuild a model from its JSON description (type tag + parameters)."""
    kind = d.get("type")
    if kind == "truncated_cone":
        return TruncatedConeModel(theta=float(d["theta"]), radius=float(d.get("radius", 1.0)))
    if kind == "torus":
        lat = TorusLattice(tuple(d["v1"]), tuple(d["v2"]))
        anchor = d.get("anchor_lam")
        return TorusPointModel(
            lat, anchor_lam=None if anchor is None else float(anchor)
        )
    if kind == "sphere_s54":
        from .sphere import SphereConfig, SphereS54Model

        pts = [complex(re, im) for re, im in d["z_points"]]
        return SphereS54Model(SphereConfig(tuple(pts)))
    raise DomainError(f"unknown model type {kind!r}")
