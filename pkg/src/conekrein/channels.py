"""Channel bookkeeping and the (P, Q) algebra of self-adjoint extensions.

Functions in the operator domain behave near a cone point of total angle
``theta`` like

    C_0 (a+_0 + a-_0 ln r)  +  sum_nu C_nu (a+_nu r^|nu| + a-_nu r^-|nu|) e^{i nu theta},

with one *channel* per admissible exponent: the pair ``(point, k)`` with
``nu = 2 pi k / theta``, ``0 < |k| < theta/(2 pi)``, plus the logarithmic
channel ``k = 0``.  A self-adjoint extension is the lagrangian subspace
``P A- + Q A+ = 0`` of coefficient space, where ``[P | Q]`` has full rank
and ``P* Q`` is Hermitian.

Channel ordering is point-major, then k ascending, and every matrix in the
package uses this indexing.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import null_space

from .errors import DomainError, InvalidBoundaryConditionError

RANK_RTOL = 1e-10  # relative singular-value threshold for numerical rank
HERM_ATOL = 1e-12  # Hermiticity tolerance on P*Q
NULLSPACE_ATOL = 1e-10  # log-channel content threshold in regularity tests


@dataclass(frozen=True)
class Channel:
    """One scattering channel: cone point id and integer index k."""

    point_id: int
    k: int
    theta: float

    @property
    def nu(self) -> float:
        """Channel exponent 2 pi k / theta (0 for the log channel)."""
        return 2.0 * math.pi * self.k / self.theta

    @property
    def is_log(self) -> bool:
        return self.k == 0

    @property
    def c_norm(self) -> float:
        """Printed normalization constant sqrt(2 theta) / sqrt(2 |nu| theta)."""
        if self.k == 0:
            return math.sqrt(2.0 * self.theta)
        return math.sqrt(2.0 * abs(self.nu) * self.theta)

    def label(self) -> str:
        return f"{self.point_id}:{self.k}"


@dataclass(frozen=True)
class ChannelSet:
    """Ordered channels of a collection of cone points.

    Parameters
    ----------
    points : list of (point_id, theta) pairs, theta > 0 in radians.
    """

    points: tuple
    channels: tuple = field(init=False)

    def __post_init__(self):
        chans = []
        seen = set()
        for pid, theta in self.points:
            if theta <= 0:
                raise DomainError(f"cone angle must be positive, got {theta}")
            if pid in seen:
                raise DomainError(f"duplicate point id {pid}")
            seen.add(pid)
            kmax = theta / (2.0 * math.pi)
            ks = [k for k in range(-int(math.ceil(kmax)) - 1, int(math.ceil(kmax)) + 2)
                  if k == 0 or 0 < abs(k) < kmax]
            for k in sorted(ks):
                chans.append(Channel(pid, k, theta))
        object.__setattr__(self, "channels", tuple(chans))

    @property
    def n(self) -> int:
        return len(self.channels)

    def index(self, point_id: int, k: int) -> int:
        for i, c in enumerate(self.channels):
            if c.point_id == point_id and c.k == k:
                return i
        raise KeyError(f"no channel ({point_id}, {k})")

    @property
    def log_indices(self) -> list:
        return [i for i, c in enumerate(self.channels) if c.is_log]

    @property
    def nus(self) -> np.ndarray:
        return np.array([c.nu for c in self.channels])


@dataclass(frozen=True)
class CoefficientVector:
    """Incoming (a-) and outgoing (a+) coefficient vectors over a ChannelSet."""

    minus: np.ndarray
    plus: np.ndarray

    def __post_init__(self):
        if self.minus.shape != self.plus.shape or self.minus.ndim != 1:
            raise DomainError("coefficient vectors must be 1-d of equal length")


@dataclass(frozen=True)
class ExtensionBC:
    """A (P, Q) matrix pair selecting the extension P A- + Q A+ = 0."""

    P: np.ndarray
    Q: np.ndarray

    def __post_init__(self):
        P = np.asarray(self.P, dtype=complex)
        Q = np.asarray(self.Q, dtype=complex)
        if P.shape != Q.shape or P.ndim != 2 or P.shape[0] != P.shape[1]:
            raise InvalidBoundaryConditionError("P, Q must be square of equal size")
        object.__setattr__(self, "P", P)
        object.__setattr__(self, "Q", Q)

    @property
    def n(self) -> int:
        return self.P.shape[0]

    def stacked(self) -> np.ndarray:
        """The n x 2n block [P | Q]."""
        return np.hstack([self.P, self.Q])

    def to_json(self) -> str:
        def mat(m):
            return [[[float(v.real), float(v.imag)] for v in row] for row in m]

        return json.dumps({"n": self.n, "P": mat(self.P), "Q": mat(self.Q)})

    @classmethod
    def from_json(cls, text: str) -> "ExtensionBC":
        d = json.loads(text)

        def mat(rows):
            return np.array([[complex(re, im) for re, im in row] for row in rows])

        bc = cls(mat(d["P"]), mat(d["Q"]))
        if bc.n != d["n"]:
            raise InvalidBoundaryConditionError("size field disagrees with matrices")
        return bc


def validate_bc(bc: ExtensionBC) -> tuple:
    """Check rank([P|Q]) = n plus Hermiticity of P*Q and of P Q*.

    Maximal rank together with P Q* Hermitian is equivalent to the
    admissible set {P A- + Q A+ = 0} being lagrangian for the boundary
    form sum(a+ conj(b-) - a- conj(b+)); the P*Q condition alone admits
    pairs whose subspace is not lagrangian (the two coincide for the
    diagonal pairs used by the solvable models).  Both are enforced.
    Returns ``(ok, diagnostic)``.
    """
    s = np.linalg.svd(bc.stacked(), compute_uv=False)
    rank = int(np.sum(s > RANK_RTOL * s[0])) if s.size else 0
    if rank != bc.n:
        return False, f"rank([P|Q]) = {rank}, expected {bc.n}"
    for name, h in (
        ("P*Q", bc.P.conj().T @ bc.Q),
        ("PQ*", bc.P @ bc.Q.conj().T),
    ):
        dev = np.max(np.abs(h - h.conj().T)) if bc.n else 0.0
        scale = max(1.0, float(np.max(np.abs(h)))) if bc.n else 1.0
        if dev > HERM_ATOL * scale:
            return False, f"{name} deviates from Hermitian by {dev:.2e}"
    return True, "ok"


def _require_valid(bc: ExtensionBC):
    ok, diag = validate_bc(bc)
    if not ok:
        raise InvalidBoundaryConditionError(diag)


def boundary_subspace(bc: ExtensionBC) -> np.ndarray:
    """Orthonormal basis (2n x n) of {(A-, A+) : P A- + Q A+ = 0}."""
    ns = null_space(bc.stacked(), rcond=RANK_RTOL)
    if ns.shape[1] != bc.n:
        raise InvalidBoundaryConditionError(
            f"boundary relation has nullity {ns.shape[1]}, expected {bc.n}"
        )
    return ns


def is_regular(bc: ExtensionBC, cs: ChannelSet) -> bool:
    """True iff no admissible coefficient vector carries a log singularity.

    Checked on a null-space basis of [P | Q]: the A- rows belonging to
    log channels must vanish identically.
    """
    _require_valid(bc)
    if bc.n != cs.n:
        raise InvalidBoundaryConditionError("bc size does not match channel set")
    ns = boundary_subspace(bc)
    rows = cs.log_indices
    if not rows:
        return True
    return bool(np.max(np.abs(ns[rows, :])) < NULLSPACE_ATOL)


def same_extension(bc1: ExtensionBC, bc2: ExtensionBC, atol: float = 1e-8) -> bool:
    """Whether two (P, Q) pairs select the same lagrangian subspace.

    (P, Q) representatives are not unique; equality is decided by the
    principal angles between the null spaces of the stacked blocks.
    """
    n1, n2 = boundary_subspace(bc1), boundary_subspace(bc2)
    if n1.shape != n2.shape:
        return False
    sv = np.linalg.svd(n1.conj().T @ n2, compute_uv=False)
    return bool(np.all(np.abs(sv - 1.0) < atol))


@dataclass(frozen=True)
class BlockDecomposition:
    """Row/column transformed form of a boundary pair.

    ``T`` (invertible row transform) and unitary ``U`` (channel rotation)
    bring ``(P, Q)`` to

        T P U = [[P2, P3], [0, P1]],    T Q U = [[Q1, 0], [0, 0]],

    with ``P1`` and ``Q1`` invertible and ``L = Q1^{-1} P2`` Hermitian.
    ``r`` is the size of the invertible Q block.
    """

    T: np.ndarray
    U: np.ndarray
    P1: np.ndarray
    P2: np.ndarray
    P3: np.ndarray
    Q1: np.ndarray
    L: np.ndarray
    r: int

    def assembled(self) -> tuple:
        n = self.r + self.P1.shape[0]
        p = np.zeros((n, n), dtype=complex)
        q = np.zeros((n, n), dtype=complex)
        p[: self.r, : self.r] = self.P2
        p[: self.r, self.r :] = self.P3
        p[self.r :, self.r :] = self.P1
        q[: self.r, : self.r] = self.Q1
        return p, q


def block_decompose(bc: ExtensionBC) -> BlockDecomposition:
    """Split channel space into the Q-coupled block and the pure-P block.

    The coupled block E1 is the A- range of the boundary subspace; on it
    the extension acts through the Hermitian map L (A+ = -L A-), while the
    complementary coordinates satisfy A- = 0.
    """
    _require_valid(bc)
    n = bc.n
    ns = boundary_subspace(bc)
    nm, npl = ns[:n, :], ns[n:, :]
    u_, s, _ = np.linalg.svd(nm)
    r = int(np.sum(s > RANK_RTOL * max(s[0], 1e-300))) if s.size else 0
    U = u_  # first r columns span E1, the rest span its complement
    if r:
        nm_t = U.conj().T @ nm
        np_t = U.conj().T @ npl
        # on the coupled block, A+|_1 = -L A-|_1
        L = -np_t[:r, :] @ np.linalg.pinv(nm_t[:r, :], rcond=1e-12)
        herm_dev = np.max(np.abs(L - L.conj().T))
        if herm_dev > 1e-8 * max(1.0, np.max(np.abs(L))):
            raise InvalidBoundaryConditionError(
                f"coupled-block map deviates from Hermitian by {herm_dev:.2e}"
            )
        L = 0.5 * (L + L.conj().T)
    else:
        L = np.zeros((0, 0), dtype=complex)
    P1 = np.eye(n - r, dtype=complex)
    P2 = L.copy()
    P3 = np.zeros((r, n - r), dtype=complex)
    Q1 = np.eye(r, dtype=complex)
    target_p = np.zeros((n, n), dtype=complex)
    target_q = np.zeros((n, n), dtype=complex)
    target_p[:r, :r] = P2
    target_p[r:, r:] = P1
    target_q[:r, :r] = Q1
    # solve T [P U | Q U] = [target_p | target_q]; the stacked block has
    # full row rank, so the least-squares solution is exact
    A = np.hstack([bc.P @ U, bc.Q @ U])
    B = np.hstack([target_p, target_q])
    T = B @ np.linalg.pinv(A, rcond=1e-12)
    if np.max(np.abs(T @ A - B)) > 1e-9 * max(1.0, np.max(np.abs(B))):
        raise InvalidBoundaryConditionError("block decomposition failed to reassemble")
    return BlockDecomposition(T=T, U=U, P1=P1, P2=P2, P3=P3, Q1=Q1, L=L, r=r)


def friedrichs_bc(cs: ChannelSet) -> ExtensionBC:
    """The extension killing all incoming coefficients: P = I, Q = 0."""
    n = cs.n
    return ExtensionBC(np.eye(n, dtype=complex), np.zeros((n, n), dtype=complex))


def rotation_bc(cs: ChannelSet, angles, require_regular: bool = False) -> ExtensionBC:
    """Diagonal extension P = diag(cos t_c), Q = diag(sin t_c).

    ``angles`` maps ``(point_id, k)`` to its rotation angle; unlisted
    channels default to 0 (Friedrichs).  With ``require_regular`` set, a
    nonzero sin on a log channel raises.
    """
    th = np.zeros(cs.n)
    for key, val in dict(angles).items():
        th[cs.index(*key)] = float(val)
    if require_regular:
        for i in cs.log_indices:
            if abs(math.sin(th[i])) > 1e-14:
                raise InvalidBoundaryConditionError(
                    "regular extension requested but a log channel has sin != 0"
                )
    return ExtensionBC(np.diag(np.cos(th)).astype(complex), np.diag(np.sin(th)).astype(complex))
