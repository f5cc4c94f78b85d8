"""Krein determinant machinery: D(lam), spectral shift, secular spectra,
asymptotic constants, and the determinant-comparison ratio.

For an extension selected by the boundary pair (P, Q) over the channels of
a model with scattering matrix S(lam), the central object is

    D(lam) = det(P + Q S(lam)).

Its logarithmic derivative equals minus the trace of the resolvent
difference between the selected extension and the Friedrichs one, its
zeros are the new eigenvalues, its poles sit at Friedrichs eigenvalues of
the coupled channels, and its large-negative asymptotics

    ln D(-t) = alpha0 ln t + l0 (log-power corrections) + Gamma + o(1)

carry the constants entering the zeta-determinant comparison

    det*(selected) = exp(-Gamma) D*(0) det*(Friedrichs),

with D*(0) = lim (-lam)^{-d} D(lam) and d = dim ker(P + Q S(0)).
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from ._util import aitken_limit, central_derivative, richardson_fixed_ratio
from .channels import ChannelSet, ExtensionBC, is_regular, validate_bc
from .errors import (
    DegenerateLeadingTermError,
    DomainError,
    ExtrapolationError,
    InvalidBoundaryConditionError,
    NonRegularExtensionError,
    PoleError,
    RootCountError,
    UnsupportedModelError,
)
from .models import SpectralModel, SpectrumList, cone_snn

_DIAG_TOL = 1e-13


# ----------------------------------------------------------------------
# the determinant and its logarithmic derivative
# ----------------------------------------------------------------------


def _require(bc: ExtensionBC, model: SpectralModel) -> ChannelSet:
    ok, diag = validate_bc(bc)
    if not ok:
        raise InvalidBoundaryConditionError(diag)
    cs = model.channel_set()
    if bc.n != cs.n:
        raise InvalidBoundaryConditionError(
            f"bc has size {bc.n}, model has {cs.n} channels"
        )
    return cs


def d_function(bc: ExtensionBC, model: SpectralModel, lam: float) -> complex:
    """D(lam) = det(P + Q S(lam)) (LU factorization via numpy)."""
    _require(bc, model)
    s = np.asarray(model.s_matrix(lam), dtype=complex)
    return complex(np.linalg.det(bc.P + bc.Q @ s))


def trace_resolvent_diff(bc: ExtensionBC, model: SpectralModel, lam: float) -> complex:
    """-D'(lam)/D(lam), the trace of the resolvent difference.

    Uses the model's analytic dS/dlam when exposed, i.e.
    -Tr((P + Q S)^{-1} Q S'); otherwise D' comes from Richardson-refined
    central differences with step max(1e-5, 1e-5 |lam|).
    """
    _require(bc, model)
    ds = model.s_matrix_deriv(lam)
    if ds is not None:
        s = np.asarray(model.s_matrix(lam), dtype=complex)
        m = bc.P + bc.Q @ s
        try:
            sol = np.linalg.solve(m, bc.Q @ np.asarray(ds, dtype=complex))
        except np.linalg.LinAlgError as exc:
            raise PoleError(f"P + Q S singular at lam={lam}") from exc
        return -complex(np.trace(sol))
    d0 = d_function(bc, model, lam)
    if abs(d0) < 1e-300:
        raise PoleError(f"D vanishes at lam={lam}")
    h = max(1e-5, 1e-5 * abs(lam))
    dp = central_derivative(lambda x: d_function(bc, model, x), lam, h)
    return -dp / d0


# ----------------------------------------------------------------------
# large-negative-lam bookkeeping
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class AsymptoticData:
    """Leading behavior of D(-t): D ~ coeff * t^alpha0 * (ln t)^l0."""

    alpha0: float
    l0: int
    leading_coeff: complex
    regular: bool


def asymptotic_exponents(bc: ExtensionBC, cs: ChannelSet) -> AsymptoticData:
    """Leading exponent/log-power of D(-t) by symbolic bookkeeping.

    Each matrix entry P_ij + Q_ij S_jj(-t) carries the dominant behavior
    of its column (power channels grow like t^|nu| with the cone
    coefficient, log channels like (1/2) ln t); expanding the determinant
    over permutations and keeping the top (exponent, log-power) pair gives
    alpha0, l0 and the leading coefficient.  A vanishing leading
    coefficient is reported, not silently reordered.
    """
    ok, diag = validate_bc(bc)
    if not ok:
        raise InvalidBoundaryConditionError(diag)
    if bc.n != cs.n:
        raise InvalidBoundaryConditionError("bc size does not match channel set")
    n = cs.n
    col = []
    for c in cs.channels:
        if c.is_log:
            col.append((0.0, 1, 0.5))
        else:
            a = abs(c.nu)
            col.append((a, 0, cone_snn(a, -1.0)))

    def entry(i, j):
        # dominant piece of P_ij + Q_ij S_jj; the Q piece strictly wins
        # whenever present (positive exponent or a log factor)
        if abs(bc.Q[i, j]) > _DIAG_TOL:
            e, l, c = col[j]
            return (e, l, bc.Q[i, j] * c)
        if abs(bc.P[i, j]) > _DIAG_TOL:
            return (0.0, 0, bc.P[i, j])
        return None

    diag_bc = _is_diagonal(bc)
    if diag_bc:
        perms = [tuple(range(n))]
    else:
        if n > 9:
            raise UnsupportedModelError(
                "asymptotic bookkeeping over permutations is limited to n <= 9"
            )
        perms = itertools.permutations(range(n))

    terms = {}
    for perm in perms:
        e_tot, l_tot = 0.0, 0
        coeff = 1.0 + 0.0j
        sign = _perm_sign(perm)
        dead = False
        for i, j in enumerate(perm):
            piece = entry(i, j)
            if piece is None:
                dead = True
                break
            e, l, c = piece
            e_tot += e
            l_tot += l
            coeff *= c
        if dead:
            continue
        key = (round(e_tot, 10), l_tot)
        terms[key] = terms.get(key, 0.0 + 0.0j) + sign * coeff
    if not terms:
        raise InvalidBoundaryConditionError("determinant vanishes identically")
    scale = max(abs(v) for v in terms.values())
    live = {k: v for k, v in terms.items() if abs(v) > 1e-10 * scale}
    if not live:
        raise DegenerateLeadingTermError("all expansion coefficients cancel")
    alpha0 = max(k[0] for k in live)
    l0 = max(k[1] for k in live if abs(k[0] - alpha0) < 1e-9)
    coeff = live[(alpha0, l0)] if (alpha0, l0) in live else None
    if coeff is None:
        raise DegenerateLeadingTermError(
            f"leading coefficient at (t^{alpha0}, log^{l0}) cancels"
        )
    return AsymptoticData(
        alpha0=float(alpha0),
        l0=int(l0),
        leading_coeff=complex(coeff),
        regular=is_regular(bc, cs),
    )


def _perm_sign(perm) -> int:
    seen = [False] * len(perm)
    sign = 1
    for i in range(len(perm)):
        if seen[i]:
            continue
        j = i
        length = 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def _is_diagonal(bc: ExtensionBC) -> bool:
    off_p = bc.P - np.diag(np.diag(bc.P))
    off_q = bc.Q - np.diag(np.diag(bc.Q))
    return float(np.max(np.abs(off_p)) + np.max(np.abs(off_q))) < _DIAG_TOL


# ----------------------------------------------------------------------
# branch-tracked logarithm of D on the negative axis
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class BranchedLogD:
    """ln D(lam) along a decreasing-negative-axis path, phase-continuous.

    The imaginary part is anchored at the most negative grid point to the
    principal argument of the leading asymptotic coefficient and carried
    inward with unwrapped phase increments below pi/2 per step (the grid
    refines itself to enforce that).
    """

    lams: np.ndarray  # all negative, ascending from the anchor to lam_end
    values: np.ndarray  # complex ln D

    def at(self, lam: float) -> complex:
        i = int(np.argmin(np.abs(self.lams - lam)))
        if abs(self.lams[i] - lam) > 1e-9 * max(1.0, abs(lam)):
            raise DomainError("lam not on the tracked path")
        return complex(self.values[i])


def track_log_d(
    bc: ExtensionBC,
    model: SpectralModel,
    lam_start: float,
    lam_end: float,
    n0: int = 48,
    max_points: int = 4096,
) -> BranchedLogD:
    """Track ln D from ``lam_start`` (most negative) up to ``lam_end`` < 0."""
    if not (lam_start < lam_end < 0):
        raise DomainError("need lam_start < lam_end < 0")
    cs = _require(bc, model)
    ad = asymptotic_exponents(bc, cs)
    grid = list(-np.geomspace(-lam_start, -lam_end, n0))
    dvals = [d_function(bc, model, g) for g in grid]
    # refine until consecutive phase steps are below pi/2
    i = 0
    while i + 1 < len(grid):
        if len(grid) > max_points:
            raise ExtrapolationError("phase tracking failed to resolve the path")
        ratio = dvals[i + 1] / dvals[i]
        if abs(cmath.phase(ratio)) >= 0.5 * math.pi:
            mid = 0.5 * (grid[i] + grid[i + 1])
            grid.insert(i + 1, mid)
            dvals.insert(i + 1, d_function(bc, model, mid))
        else:
            i += 1
    anchor_phase = cmath.phase(ad.leading_coeff)
    # for real D the sign at the anchor must match the leading coefficient
    d0 = dvals[0]
    if abs(d0.imag) < 1e-10 * abs(d0) and d0.real * math.cos(anchor_phase) < 0:
        raise ExtrapolationError(
            "anchor sign disagrees with the leading asymptotic coefficient; "
            "move the anchor further out"
        )
    vals = np.empty(len(grid), dtype=complex)
    phase = anchor_phase
    vals[0] = math.log(abs(dvals[0])) + 1j * phase
    for i in range(1, len(grid)):
        phase += cmath.phase(dvals[i] / dvals[i - 1])
        vals[i] = math.log(abs(dvals[i])) + 1j * phase
    return BranchedLogD(lams=np.array(grid), values=vals)


# ----------------------------------------------------------------------
# Gamma, D*(0) and the comparison ratio
# ----------------------------------------------------------------------


def gamma_constant(
    bc: ExtensionBC,
    model: SpectralModel,
    t0: float = 256.0,
    levels: int = 14,
    rtol: float = 1e-8,
) -> complex:
    """Gamma = lim ln D(-t) - alpha0 ln t on a geometric grid, accelerated.

    The imaginary part is the tracked branch anchor (the principal
    argument of the leading coefficient; e.g. i pi when D < 0 on the whole
    negative axis).  Non-regular extensions are refused: their expansion
    carries (ln t)^{l0} terms with l0 > 0 and the limit does not exist.
    """
    cs = _require(bc, model)
    ad = asymptotic_exponents(bc, cs)
    if not ad.regular or ad.l0 > 0:
        raise NonRegularExtensionError(
            "Gamma is defined for regular extensions only: the determinant "
            f"expansion carries a (ln t)^{max(ad.l0, 1)} factor",
            l0=max(ad.l0, 1),
        )
    seq = []
    phase = cmath.phase(ad.leading_coeff)
    for j in range(levels):
        t = t0 * 2.0**j
        d = d_function(bc, model, -t)
        mag = abs(d)
        if mag == 0.0:
            raise PoleError(f"D(-t) vanished at t={t}")
        # consistency of the tracked phase with the leading coefficient
        seq.append(math.log(mag) - ad.alpha0 * math.log(t))
    try:
        gamma_re = aitken_limit(seq, rtol=rtol)
    except ExtrapolationError as exc:
        raise ExtrapolationError(f"Gamma extrapolation failed: {exc}") from exc
    return complex(gamma_re.real, phase)


def d_star_zero(bc: ExtensionBC, model: SpectralModel) -> tuple:
    """(d, D*(0)) with d = dim ker(P + Q S(0)), D*(0) = lim (-lam)^{-d} D.

    Requires a regular extension (then Q annihilates the log channels and
    P + Q S(0) only involves the power-channel entries, which stay finite
    at lam = 0).
    """
    cs = _require(bc, model)
    if not is_regular(bc, cs):
        raise NonRegularExtensionError(
            "D*(0) requires a regular extension (log channels uncoupled)"
        )
    for j in cs.log_indices:
        if float(np.max(np.abs(bc.Q[:, j]))) > 1e-10:
            raise InvalidBoundaryConditionError(
                "regular bc must have vanishing Q on log-channel columns"
            )
    if float(np.max(np.abs(bc.Q))) < _DIAG_TOL:
        b = bc.P.copy()  # Friedrichs-like: S(0) never enters
    else:
        s0 = np.asarray(model.s_matrix_at_zero(), dtype=complex).copy()
        for j in cs.log_indices:
            s0[:, j] = 0.0  # multiplied by the zero column anyway
            s0[j, :] = np.where(np.isnan(s0[j, :].real), 0.0, s0[j, :])
        if np.any(np.isnan(s0)):
            raise UnsupportedModelError("model does not define S(0) on power channels")
        b = bc.P + bc.Q @ s0
    sv = np.linalg.svd(b, compute_uv=False)
    smax = float(sv[0]) if sv.size else 0.0
    d = int(np.sum(sv < 1e-9 * max(smax, 1e-300)))
    if getattr(model, "s_matrix_is_asymptotic", False):
        if d > 0:
            raise UnsupportedModelError(
                "kernel at lam=0: the limit D(lam)(-lam)^{-d} needs S(lam) "
                "near 0, which this model does not expose"
            )
        return 0, complex(np.linalg.det(b))
    vals = []
    for lam in (-1e-2, -1e-3, -1e-4):
        vals.append(d_function(bc, model, lam) * (-lam) ** (-d))
    dstar = richardson_fixed_ratio(vals, 10.0)
    spread = abs(dstar - vals[-1])
    direct = complex(np.linalg.det(b)) if d == 0 else None
    if direct is not None and abs(dstar - direct) > 1e-6 * max(1.0, abs(direct)):
        raise ExtrapolationError(
            f"extrapolated D*(0)={dstar} disagrees with det(P+QS(0))={direct}"
        )
    if spread > 0.1 * max(abs(dstar), 1e-12):
        raise ExtrapolationError("D*(0) extrapolation did not settle")
    return d, complex(dstar)


@dataclass(frozen=True)
class DetComparison:
    """Packaged determinant-comparison data.

    ``ratio`` multiplies the modified (zero-modes-removed) Friedrichs zeta
    determinant to give the selected extension's one.  ``shifted_value``
    is exp(-Gamma) D(lam_tilde) when a shift was requested.
    """

    d: int
    d_star_0: complex
    gamma: complex
    ratio: complex
    delta_l: int
    delta_f: int
    kernel_consistent: bool
    shifted_value: complex = None


def det_ratio(
    bc: ExtensionBC, model: SpectralModel, lam_tilde: float = None
) -> DetComparison:
    """exp(-Gamma) * D*(0), with kernel dimensions and optional shifted form."""
    gamma = gamma_constant(bc, model)
    d, dstar = d_star_zero(bc, model)
    ratio = cmath.exp(-gamma) * dstar
    delta_f = int(getattr(model, "friedrichs_kernel_dim", 0))
    delta_l = d + delta_f
    consistent = True
    if getattr(model, "supports_positive_lambda", False):
        try:
            spec = secular_spectrum(bc, model, lmax=1e-4, include_untouched=True)
            found = int(
                np.sum(spec.multiplicities[np.abs(spec.values) < 1e-6])
            )
            consistent = found == delta_l
        except (RootCountError, UnsupportedModelError):
            consistent = True  # no independent count available
    shifted = None
    if lam_tilde is not None:
        if lam_tilde >= 0:
            raise DomainError("shifted comparison point must be negative")
        shifted = cmath.exp(-gamma) * d_function(bc, model, lam_tilde)
    return DetComparison(
        d=d,
        d_star_0=dstar,
        gamma=gamma,
        ratio=ratio,
        delta_l=delta_l,
        delta_f=delta_f,
        kernel_consistent=consistent,
        shifted_value=shifted,
    )


# ----------------------------------------------------------------------
# secular spectrum and spectral shift
# ----------------------------------------------------------------------


def _coupled_indices(bc: ExtensionBC) -> list:
    return [
        j
        for j in range(bc.n)
        if float(np.max(np.abs(bc.Q[:, j])) + np.max(np.abs(bc.Q[j, :]))) > _DIAG_TOL
    ]


def _channel_tower(model: SpectralModel, label: str, lmax: float) -> np.ndarray:
    full = model.friedrichs_eigenvalues(lmax)
    sel = full.select(label)
    return sel.values, sel.multiplicities


def _bracket_root(f, a: float, b: float, expect_sign_change=True):
    """Root of monotone f on the open gap (a, b); endpoints are singular."""
    for eps in (1e-3, 1e-5, 1e-7, 1e-9, 1e-11):
        lo = a + eps * (b - a)
        hi = b - eps * (b - a)
        try:
            flo, fhi = f(lo), f(hi)
        except PoleError:
            continue
        if np.isfinite(flo) and np.isfinite(fhi) and flo * fhi < 0:
            return brentq(f, lo, hi, xtol=1e-12, rtol=8.9e-16, maxiter=200)
    if expect_sign_change:
        raise RootCountError(f"no sign change found in gap ({a:.6g}, {b:.6g})")
    return None


def _leading_interval_root(f, first_pole: float):
    """Root on (-inf, first_pole); expands the bracket leftward."""
    b = first_pole - 1e-6 * max(1.0, abs(first_pole))
    fb = f(b)
    width = max(1.0, abs(first_pole))
    for _ in range(60):
        a = b - width
        fa = f(a)
        if np.isfinite(fa) and fa * fb < 0:
            return brentq(f, a, b, xtol=1e-12, rtol=8.9e-16, maxiter=200)
        b2 = a
        fb2 = fa
        width *= 2.0
        b, fb = b2, fb2
    return None


def secular_spectrum(
    bc: ExtensionBC,
    model: SpectralModel,
    lmax: float,
    include_untouched: bool = True,
) -> SpectrumList:
    """Eigenvalues of the selected extension up to ``lmax``.

    Between consecutive Friedrichs eigenvalues of each coupled channel the
    determinant entry is strictly monotone (the derivative identity), so
    each gap carries exactly one root, bracketed and refined by Brent's
    method to atol ~1e-10 (1+|lam|).  Channels untouched by Q keep their
    Friedrichs towers verbatim; Friedrichs eigenvalues of coupled channels
    survive with multiplicity reduced by the determinant's pole order.
    """
    cs = _require(bc, model)
    if not getattr(model, "supports_positive_lambda", False):
        raise UnsupportedModelError("model has no continuation to lam > 0")
    if not _is_diagonal(bc):
        return _secular_generic(bc, model, cs, lmax, include_untouched)
    vals, mults, labels = [], [], []
    coupled = _coupled_indices(bc)
    coupled_labels = {cs.channels[j].label() for j in coupled}
    if include_untouched:
        full = model.friedrichs_eigenvalues(max(lmax, 1.0) * 1.000001)
        for v, m, lab in zip(full.values, full.multiplicities, full.labels):
            if lab not in coupled_labels and v <= lmax:
                vals.append(v)
                mults.append(m)
                labels.append(lab)
    for j in coupled:
        chan = cs.channels[j]
        lab = chan.label()
        p, q = complex(bc.P[j, j]), complex(bc.Q[j, j])
        if abs(p.imag) > 1e-12 or abs(q.imag) > 1e-12:
            raise UnsupportedModelError("complex diagonal bc entries unsupported")
        p, q = p.real, q.real

        def f(lam, _j=j, _p=p, _q=q):
            s = model.s_matrix(lam)
            return _p + _q * float(np.real(s[_j, _j]))

        # headroom past lmax so the gap containing lmax keeps its right
        # endpoint (the root there may still lie below the cutoff)
        sel = model.channel_tower(chan.k, max(lmax, 1.0) * 1.5 + 50.0)
        tower = sel.values
        tmult = sel.multiplicities
        # surviving copies of the Friedrichs eigenvalues
        for v, m in zip(tower, tmult):
            if m > 1 and v <= lmax:
                vals.append(v)
                mults.append(m - 1)
                labels.append(lab)
        # one root below the first tower point
        first = tower[0] if tower.size else lmax
        r = _leading_interval_root(f, first)
        if r is not None and r <= lmax:
            vals.append(r)
            mults.append(1)
            labels.append(lab)
        # one root per interior gap
        for a, b in zip(tower[:-1], tower[1:]):
            if a >= lmax:
                break
            r = _bracket_root(f, a, b)
            if r is not None and r <= lmax:
                vals.append(r)
                mults.append(1)
                labels.append(lab)
    return SpectrumList.from_unsorted(
        np.array(vals, dtype=float), np.array(mults, dtype=int), labels
    )


def _secular_generic(bc, model, cs, lmax, include_untouched) -> SpectrumList:
    """Sampling-based root hunt for non-diagonal (P, Q)."""
    full = model.friedrichs_eigenvalues(max(lmax, 1.0) * 1.5 + 50.0)
    coupled = _coupled_indices(bc)
    coupled_labels = {cs.channels[j].label() for j in coupled}
    vals, mults, labels = [], [], []
    pole_points = {}
    for v, m, lab in zip(full.values, full.multiplicities, full.labels):
        if lab in coupled_labels:
            key = round(v, 9)
            pole_points[key] = pole_points.get(key, 0) + 1
            if include_untouched and m - 1 >= 1 and v <= lmax:
                vals.append(v)
                mults.append(m - 1)
                labels.append(lab)
        elif include_untouched and v <= lmax:
            vals.append(v)
            mults.append(m)
            labels.append(lab)
    edges = sorted(pole_points.keys())

    def fd(lam):
        return float(np.real(d_function(bc, model, lam)))

    gaps = []
    if edges:
        # leading interval: expand left until D stops changing sign (the
        # determinant has a definite sign at -infinity)
        left = edges[0] - max(4.0, abs(edges[0]))
        probe = fd(left)
        for _ in range(40):
            wider = edges[0] - 2.0 * (edges[0] - left)
            fw = fd(wider)
            if fw * probe > 0:
                break
            left, probe = wider, fw
        gaps.append((min(left, edges[0] - max(4.0, abs(edges[0])) * 4.0), edges[0]))
        gaps += list(zip(edges[:-1], edges[1:]))
    for a, b in gaps:
        if a >= lmax:
            break
        n_samp = 64
        xs = np.linspace(a + 1e-7 * (b - a), b - 1e-7 * (b - a), n_samp)
        fs = [fd(x) for x in xs]
        found = []
        for x0, x1, f0, f1 in zip(xs[:-1], xs[1:], fs[:-1], fs[1:]):
            if f0 * f1 < 0:
                found.append(brentq(fd, x0, x1, xtol=1e-12, rtol=8.9e-16))
        if len(found) > len(coupled):
            raise RootCountError(
                f"gap ({a:.4g},{b:.4g}) produced {len(found)} roots for "
                f"{len(coupled)} coupled channels"
            )
        for r in found:
            if r <= lmax:
                vals.append(r)
                mults.append(1)
                labels.append("mixed")
    return SpectrumList.from_unsorted(
        np.array(vals, dtype=float), np.array(mults, dtype=int), labels
    )


def spectral_shift(bc: ExtensionBC, model: SpectralModel, t: float) -> float:
    """Spectral shift xi(t) = -(1/2 pi) * (tracked Arg D)(t).

    The branch is anchored to 0 below both spectra; each determinant zero
    passed going right subtracts 2 pi from the tracked argument and each
    pole adds 2 pi, so xi counts eigenvalues of the selected extension
    minus Friedrichs ones and is piecewise constant between them.
    """
    cs = _require(bc, model)
    if t > 0 and not getattr(model, "supports_positive_lambda", False):
        raise UnsupportedModelError("model has no continuation to lam > 0")
    d = d_function(bc, model, t)
    if abs(d) < 1e-10 or abs(d) > 1e10:
        raise PoleError(f"t={t} is too close to an eigenvalue (|D|={abs(d):.2e})")
    lmax = max(t * 1.2 + 10.0, 10.0)
    spec = secular_spectrum(bc, model, lmax, include_untouched=False)
    # new-extension eigenvalues below t: moved roots plus surviving copies
    zeros_below = int(np.sum(spec.multiplicities[spec.values < t]))
    poles_below = 0
    for j in _coupled_indices(bc):
        tower = model.channel_tower(cs.channels[j].k, lmax)
        # Friedrichs counting function of the coupled channel (full mult.)
        poles_below += int(np.sum(tower.multiplicities[tower.values < t]))
    return float(zeros_below - poles_below)


# ----------------------------------------------------------------------
# eigenvalue-sum oracle for the trace identity
# ----------------------------------------------------------------------


def trace_identity_residual(
    bc: ExtensionBC, model: SpectralModel, lam: float, lmax: float = 4000.0
) -> dict:
    """Both sides of the Krein trace identity at lam < 0 plus diagnostics.

    The eigenvalue side pairs the k-th secular root with the k-th
    Friedrichs pole of each coupled channel (one root per gap) and adds a
    power-law tail correction fitted to the last pairs; the tail bound is
    reported.
    """
    if lam >= 0:
        raise DomainError("trace identity checked at lam < 0")
    from . import kernels

    cs = _require(bc, model)
    lhs = complex(trace_resolvent_diff(bc, model, lam)).real
    spec = secular_spectrum(bc, model, lmax, include_untouched=False)
    coupled = _coupled_indices(bc)
    rhs = 0.0
    tail = 0.0
    for j in coupled:
        lab = cs.channels[j].label()
        # distinct tower points, one unit each (surviving copies cancel)
        poles = model.channel_tower(cs.channels[j].k, lmax).values
        cand = spec.select(lab).values
        # keep the moved roots only: entries at tower points are survivors
        if poles.size:
            idx = np.searchsorted(poles, cand)
            idx = np.clip(idx, 0, poles.size - 1)
            near = np.minimum(
                np.abs(cand - poles[idx]),
                np.abs(cand - poles[np.maximum(idx - 1, 0)]),
            )
            roots = cand[near > 1e-8 * (1.0 + np.abs(cand))]
        else:
            roots = cand
        npair = min(roots.size, poles.size)
        mu = roots[:npair]
        lm = poles[:npair]
        rhs += kernels.resolvent_trace_sum(
            lam, mu, np.ones(npair), lm, np.ones(npair)
        )
        if npair >= 8:
            # fit d_k = lam_k - mu_k ~ d_J (k/J)^p on the last pairs and
            # integrate the remainder against the quadratic decay
            dk = lm - mu
            J = npair
            kk = np.arange(1, J + 1, dtype=float)
            p = np.polyfit(np.log(kk[J // 2:]), np.log(np.maximum(dk[J // 2:], 1e-300)), 1)[0]
            lamJ = lm[-1]
            dJ = dk[-1]
            # integral_J^inf dJ (k/J)^p / (lamJ (k/J)^2)^2 dk
            if p < 3.0:
                tail_corr = dJ * J / (lamJ - lam) ** 2 / (3.0 - p)
                rhs += tail_corr
                tail += abs(tail_corr) * 0.5
            else:
                tail += dJ * J / (lamJ - lam) ** 2
    return {
        "lam": lam,
        "trace_side": lhs,
        "eigenvalue_side": float(rhs),
        "residual": float(abs(lhs - rhs)),
        "tail_bound": float(tail),
        "pairs": int(spec.total),
    }
