"""conekrein: scattering matrices and determinant comparisons on flat cones.

Numerical machinery for Laplacians on surfaces that are flat except at
finitely many cone points.  Every self-adjoint realization of the operator
is selected by a boundary pair (P, Q) acting on the coefficient channel of
each cone point; the package computes

* scattering matrices S(lam) of exactly solvable geometries (infinite and
  truncated cones, marked flat torus, the genus-0 sphere example),
* the Krein determinant D(lam) = det(P + Q S(lam)), its secular spectra,
  spectral shift function and trace identity,
* the constants (alpha0, l0, Gamma, D*(0)) of its large/small spectral
  parameter behavior and the resulting zeta-determinant comparison ratio,
* an independent relative-zeta oracle built from eigenvalue lists alone.

Hot kernels run through numba by default with a pure-NumPy fallback
selected by the ``CONEKREIN_NUMBA`` environment variable.
"""

from ._jit import NUMBA_ENABLED, backend_name
from .channels import (
    Channel,
    ChannelSet,
    CoefficientVector,
    ExtensionBC,
    BlockDecomposition,
    block_decompose,
    boundary_subspace,
    friedrichs_bc,
    is_regular,
    rotation_bc,
    same_extension,
    validate_bc,
)
from .errors import (
    ConeKreinError,
    ConvergenceError,
    DegenerateLeadingTermError,
    DomainError,
    ExtrapolationError,
    InvalidBoundaryConditionError,
    NonRegularExtensionError,
    PoleError,
    RootCountError,
    TruncationError,
    ValidationError,
)
from .krein import (
    AsymptoticData,
    BranchedLogD,
    DetComparison,
    asymptotic_exponents,
    d_function,
    d_star_zero,
    det_ratio,
    gamma_constant,
    secular_spectrum,
    spectral_shift,
    trace_identity_residual,
    trace_resolvent_diff,
    track_log_d,
)
from .models import (
    GProfile,
    SpectralModel,
    SpectrumList,
    TorusLattice,
    TorusPointModel,
    TruncatedConeModel,
    cone_s00,
    cone_s_matrix,
    cone_snn,
    g_gram,
    model_from_json,
)
from .relzeta import (
    RelZetaResult,
    closed_form_channel_zeta,
    half_channel_spectra,
    probe_alpha0,
    rel_zeta_result,
    relative_heat_trace,
    relative_zeta,
    riemann_zeta_em,
    spectrum_from_csv,
)
from .specfun import (
    DEFAULT_ACCURACY,
    SpecfunAccuracy,
    bessel_i,
    bessel_j,
    bessel_j_zeros,
    bessel_j_zeros_upto,
    bessel_k,
    bessel_y,
    gamma_fn,
)
from .sphere import (
    SphereConfig,
    SphereS54Model,
    distinguished_param,
    hexagon_config,
    s0_block,
    zeta_series,
)

__version__ = "0.1.0"
