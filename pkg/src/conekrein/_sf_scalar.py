"""Scalar special-function kernels (numba-compatible).

These are the compiled cores behind :mod:`conekrein.specfun`.  Every function
here takes and returns plain floats so that the whole module can be jitted;
the vectorized NumPy twins live in :mod:`conekrein._sf_vector` and the public
dispatching API in :mod:`conekrein.specfun`.

Algorithm map (real order ``nu``, argument ``x > 0``):

* ``gamma``      -- Lanczos approximation (g = 607/128, 15 terms), reflection
                    below 1/2.
* ``I_nu``       -- ascending series below the large-argument switch, Hankel
                    asymptotic series (with the subdominant e^{-x} term)
                    above; negative orders via I_{-a} = I_a + (2/pi) sin(pi a) K_a.
* ``K_nu``       -- Temme's series for x <= 2, trapezoidal evaluation of
                    int_0^inf exp(-x cosh t) cosh(nu t) dt on 2 < x < switch
                    (double-exponential decay makes the trapezoid rule
                    spectrally accurate there), asymptotic series above.
* ``J_nu, Y_0``  -- ascending series below x = 12, Hankel P/Q asymptotics
                    above; orders >= 1 (needed for eigenvalue towers) by
                    Miller downward recurrence normalized against the
                    fractional-order value.

The naive route K_nu = pi/2 (I_{-nu} - I_nu)/sin(pi nu) is *not* used at
moderate x: the subtraction loses ~e^{2x} digits, which already fails a
1e-11 budget near x = 13.  Temme's recursion is the stable rewrite of the
same combination for small x.
"""

from __future__ import annotations

import math

from ._jit import maybe_njit

# Euler-Mascheroni constant and zeta(3).
EULER_GAMMA = 0.5772156649015328606
ZETA3 = 1.2020569031595942854

# Taylor coefficients of 1/Gamma(1+u) = 1 + A1 u + A2 u^2 + A3 u^3 + ...
_A1 = EULER_GAMMA
_A2 = 0.5 * EULER_GAMMA**2 - math.pi**2 / 12.0
_A3 = ZETA3 / 3.0 - EULER_GAMMA * math.pi**2 / 12.0 + EULER_GAMMA**3 / 6.0

# Lanczos approximation, g = 607/128, 15 coefficients (Godfrey's set).
_LANCZOS_G = 4.7421875
_LANCZOS = (
    0.99999999999999709182,
    57.156235665862923517,
    -59.597960355475491248,
    14.136097974741747174,
    -0.49191381609762019978,
    0.33994649984811888699e-4,
    0.46523628927048575665e-4,
    -0.98374475304879564677e-4,
    0.15808870322491248884e-3,
    -0.21026444172410488319e-3,
    0.21743961811521264320e-3,
    -0.16431810653676389022e-3,
    0.84418223983852743293e-4,
    -0.26190838401581408670e-4,
    0.36899182659531622704e-5,
)

_SQRT_2PI = 2.5066282746310005024


@maybe_njit(cache=True)
def gamma_scalar(x: float) -> float:
    """Gamma(x) for real non-pole x.  Returns nan at nonpositive integers."""
    if x > 0.5:
        z = x - 1.0
        acc = _LANCZOS[0]
        for k in range(1, 15):
            acc += _LANCZOS[k] / (z + k)
        t = z + _LANCZOS_G + 0.5
        return _SQRT_2PI * t ** (z + 0.5) * math.exp(-t) * acc
    # reflection; sin(pi x) vanishes exactly at the poles
    s = math.sin(math.pi * x)
    if s == 0.0:
        return math.nan
    y = 1.0 - x  # > 0.5
    z = y - 1.0
    acc = _LANCZOS[0]
    for k in range(1, 15):
        acc += _LANCZOS[k] / (z + k)
    t = z + _LANCZOS_G + 0.5
    gy = _SQRT_2PI * t ** (z + 0.5) * math.exp(-t) * acc
    return math.pi / (s * gy)


@maybe_njit(cache=True)
def rgamma_scalar(x: float) -> float:
    """1/Gamma(x); zero at the poles of Gamma."""
    if x <= 0.0 and x == math.floor(x):
        return 0.0
    return 1.0 / gamma_scalar(x)


# ----------------------------------------------------------------------
# modified Bessel functions I, K
# ----------------------------------------------------------------------


@maybe_njit(cache=True)
def _besseli_series(nu: float, x: float, max_terms: int) -> float:
    # ascending series; all terms positive for nu > -1, no cancellation
    t = math.exp(nu * math.log(0.5 * x)) * rgamma_scalar(1.0 + nu)
    s = t
    q = 0.25 * x * x
    for k in range(1, max_terms):
        t *= q / (k * (k + nu))
        s += t
        if t <= 1e-17 * s:
            break
    return s


@maybe_njit(cache=True)
def _besselik_asym(nu: float, x: float):
    # Hankel asymptotic sums S_K = sum a_k/x^k, S_I = sum (-1)^k a_k/x^k
    mu4 = 4.0 * nu * nu
    term = 1.0
    s_k = 1.0
    s_i = 1.0
    for k in range(1, 60):
        fac = (mu4 - (2.0 * k - 1.0) ** 2) / (8.0 * k * x)
        nxt = term * fac
        if abs(nxt) >= abs(term):  # past optimal truncation
            break
        term = nxt
        s_k += term
        if k % 2 == 0:
            s_i += term
        else:
            s_i -= term
        if abs(term) < 1e-18:
            break
    kv = math.sqrt(math.pi / (2.0 * x)) * math.exp(-x) * s_k
    if x > 705.0:  # e^x overflows; only ratios against K survive anyway
        return math.inf, kv
    iv = (math.exp(x) * s_i - math.sin(math.pi * nu) * math.exp(-x) * s_k) / math.sqrt(
        2.0 * math.pi * x
    )
    return iv, kv


@maybe_njit(cache=True)
def _temme_gammas(mu: float):
    # Gamma1 = [1/G(1-mu) - 1/G(1+mu)]/(2 mu), Gamma2 = [1/G(1-mu) + 1/G(1+mu)]/2
    if abs(mu) < 1e-4:
        g1 = -(_A1 + _A3 * mu * mu)
        g2 = 1.0 + _A2 * mu * mu
    else:
        fm = rgamma_scalar(1.0 - mu)
        fp = rgamma_scalar(1.0 + mu)
        g1 = (fm - fp) / (2.0 * mu)
        g2 = 0.5 * (fm + fp)
    return g1, g2


@maybe_njit(cache=True)
def _besselk_temme(mu: float, x: float, max_terms: int):
    # K_mu(x) and K_{mu+1}(x) for |mu| <= 1/2, 0 < x <= 2 (Temme's series)
    d = -math.log(0.5 * x)  # ln(2/x)
    sig = mu * d
    g1, g2 = _temme_gammas(mu)
    if abs(sig) < 1e-8:
        sinhc = 1.0 + sig * sig / 6.0
    else:
        sinhc = math.sinh(sig) / sig
    pimu = math.pi * mu
    if abs(pimu) < 1e-15:
        fact = 1.0
    else:
        fact = pimu / math.sin(pimu)
    fk = fact * (g1 * math.cosh(sig) + g2 * sinhc * d)
    es = math.exp(sig)  # (2/x)^mu
    pk = 0.5 * es * gamma_scalar(1.0 + mu)
    qk = 0.5 / es * gamma_scalar(1.0 - mu)
    c = 1.0
    q4 = 0.25 * x * x
    s0 = fk
    s1 = pk  # h_0 = p_0
    for k in range(1, max_terms):
        fk = (k * fk + pk + qk) / (k * k - mu * mu)
        c *= q4 / k
        pk /= k - mu
        qk /= k + mu
        d0 = c * fk
        s0 += d0
        s1 += c * (pk - k * fk)
        if abs(d0) < 1e-17 * abs(s0):
            break
    return s0, (2.0 / x) * s1


@maybe_njit(cache=True)
def _besselk_coshint(nu: float, x: float) -> float:
    # trapezoid rule on int_0^inf exp(-x cosh t) cosh(nu t) dt; the integrand
    # decays doubly exponentially, so a fixed step is spectrally accurate
    h = 0.17
    s = 0.5 * math.exp(-x)
    for j in range(1, 400):
        t = h * j
        e = math.exp(-x * math.cosh(t)) * math.cosh(nu * t)
        s += e
        if e < 1e-18 * s:
            break
    return h * s


@maybe_njit(cache=True)
def besselk_scalar(nu: float, x: float, switch_x: float, max_terms: int) -> float:
    """K_nu(x) for |nu| <= 1.0001, x > 0."""
    nu = abs(nu)  # K is even in the order
    if x > 2.0:
        if x >= switch_x:
            return _besselik_asym(nu, x)[1]
        return _besselk_coshint(nu, x)
    if nu <= 0.5:
        return _besselk_temme(nu, x, max_terms)[0]
    return _besselk_temme(nu - 1.0, x, max_terms)[1]


@maybe_njit(cache=True)
def besseli_scalar(nu: float, x: float, switch_x: float, max_terms: int) -> float:
    """I_nu(x) for -1 <= nu <= 2, x > 0."""
    if x >= switch_x:
        return _besselik_asym(nu, x)[0]
    if abs(nu + 1.0) < 1e-12:
        return _besseli_series(1.0, x, max_terms)  # I_{-1} = I_1
    if nu < 0.0:
        a = -nu  # in (0, 1)
        refl = (2.0 / math.pi) * math.sin(math.pi * a) * besselk_scalar(
            a, x, switch_x, max_terms
        )
        return _besseli_series(a, x, max_terms) + refl
    return _besseli_series(nu, x, max_terms)


# ----------------------------------------------------------------------
# Bessel functions of the first/second kind J, Y
# ----------------------------------------------------------------------

_J_ASYM_SWITCH = 12.0


@maybe_njit(cache=True)
def _besselj_series(nu: float, x: float, max_terms: int) -> float:
    t = math.exp(nu * math.log(0.5 * x)) * rgamma_scalar(1.0 + nu)
    s = t
    q = 0.25 * x * x
    for k in range(1, max_terms):
        t *= -q / (k * (k + nu))
        s += t
        if abs(t) <= 1e-17 * (abs(s) + 1e-300):
            break
    return s


@maybe_njit(cache=True)
def _hankel_pq(nu: float, x: float):
    # P ~ 1 - a2/x^2 + a4/x^4 ..., Q ~ a1/x - a3/x^3 + ...
    mu4 = 4.0 * nu * nu
    p = 1.0
    q = 0.0
    term = 1.0
    sgn_q = 1.0
    sgn_p = -1.0
    for k in range(1, 60):
        fac = (mu4 - (2.0 * k - 1.0) ** 2) / (8.0 * k * x)
        nxt = term * fac
        if abs(nxt) >= abs(term):
            break
        term = nxt
        if k % 2 == 1:
            q += sgn_q * term
            sgn_q = -sgn_q
        else:
            p += sgn_p * term
            sgn_p = -sgn_p
        if abs(term) < 1e-18:
            break
    return p, q


@maybe_njit(cache=True)
def _besselj_smallorder(nu: float, x: float, max_terms: int) -> float:
    # -1 < nu, any x; accurate for |nu| up to ~2 (series/Hankel regimes)
    if x < _J_ASYM_SWITCH:
        return _besselj_series(nu, x, max_terms)
    p, q = _hankel_pq(nu, x)
    w = x - (0.5 * nu + 0.25) * math.pi
    return math.sqrt(2.0 / (math.pi * x)) * (math.cos(w) * p - math.sin(w) * q)


@maybe_njit(cache=True)
def bessely0_scalar(x: float, max_terms: int) -> float:
    """Y_0(x), the second solution driving the logarithmic channel."""
    if x >= _J_ASYM_SWITCH:
        p, q = _hankel_pq(0.0, x)
        w = x - 0.25 * math.pi
        return math.sqrt(2.0 / (math.pi * x)) * (math.sin(w) * p + math.cos(w) * q)
    j0 = _besselj_series(0.0, x, max_terms)
    q4 = 0.25 * x * x
    t = 1.0
    hk = 0.0
    s = 0.0
    sgn = 1.0
    for k in range(1, max_terms):
        t *= q4 / (k * k)
        hk += 1.0 / k
        s += sgn * t * hk
        sgn = -sgn
        if t * hk < 1e-17 * (abs(s) + 1e-300):
            break
    return (2.0 / math.pi) * ((math.log(0.5 * x) + EULER_GAMMA) * j0 + s)


@maybe_njit(cache=True)
def besselj_scalar(nu: float, x: float, max_terms: int) -> float:
    """J_nu(x) for nu > -1 (Miller downward recurrence for nu >= 2)."""
    if nu < 2.0:
        return _besselj_smallorder(nu, x, max_terms)
    frac = nu - math.floor(nu)
    nsteps = int(round(nu - frac))
    # start well past the turning point so the minimal solution dominates
    mstart = nsteps + 20 + int(1.2 * x)
    jp = 0.0
    jc = 1e-280
    val_nu = 0.0
    val_a = 0.0  # order frac
    val_b = 0.0  # order frac + 1
    m = mstart
    while m >= 0:
        order = frac + m
        jm = (2.0 * (order + 1.0) / x) * jc - jp
        jp = jc
        jc = jm
        if abs(jc) > 1e250:  # renormalize to avoid overflow
            jc *= 1e-250
            jp *= 1e-250
            val_nu *= 1e-250
            val_a *= 1e-250
            val_b *= 1e-250
        if m == nsteps:
            val_nu = jc
        if m == 1:
            val_b = jc
        if m == 0:
            val_a = jc
        m -= 1
    ja = _besselj_smallorder(frac, x, max_terms)
    jb = _besselj_smallorder(frac + 1.0, x, max_terms)
    if abs(val_b) > abs(val_a):
        scale = jb / val_b
    else:
        scale = ja / val_a
    return val_nu * scale
