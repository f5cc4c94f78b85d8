import cmath
import math

import numpy as np
import pytest

import conekrein as ck
from conekrein.errors import (
    DegenerateLeadingTermError,
    NonRegularExtensionError,
    PoleError,
    UnsupportedModelError,
)

import oracles

PI = math.pi
COTH1 = 1.0 / math.tanh(1.0)
TRACE_EXACT = math.tanh(1.0) / 2.0 - (COTH1 - 1.0) / 2.0  # 0.22427943522821670


@pytest.fixture(scope="module")
def tc():
    return ck.TruncatedConeModel(theta=4 * PI, radius=1.0)


@pytest.fixture(scope="module")
def half_bc(tc):
    # (P, Q) = (0, 1) on the nu = +1/2 channel, Friedrichs elsewhere
    return ck.rotation_bc(tc.channel_set(), {(0, 1): PI / 2})


@pytest.fixture(scope="module")
def torus():
    return ck.TorusPointModel(ck.TorusLattice((1.0, 0.0), (0.0, 1.0)))


@pytest.fixture(scope="module")
def torus_bc(torus):
    return ck.rotation_bc(torus.channel_set(), {(0, 0): PI / 2})


class TestDFunction:
    def test_friedrichs_is_one(self, tc):
        bc = ck.friedrichs_bc(tc.channel_set())
        for lam in (-10.0, -1.0, 3.3):
            assert ck.d_function(bc, tc, lam) == pytest.approx(1.0)

    def test_half_channel_closed_form(self, tc, half_bc):
        assert ck.d_function(half_bc, tc, -1.0) == pytest.approx(-COTH1, rel=1e-12)

    def test_sphere_bc_determinant_structure(self):
        model = ck.SphereS54Model(ck.hexagon_config())
        th = 0.6
        bc = ck.rotation_bc(model.channel_set(), {(0, 1): th, (0, -1): th})
        lam = -16.0
        s = model.s_matrix(lam)
        want = (math.cos(th) + math.sin(th) * s[0, 0].real) * (
            math.cos(th) + math.sin(th) * s[2, 2].real
        )
        assert ck.d_function(bc, model, lam) == pytest.approx(want, rel=1e-12)


class TestTraceResolventDiff:
    def test_friedrichs_zero(self, tc):
        bc = ck.friedrichs_bc(tc.channel_set())
        assert abs(ck.trace_resolvent_diff(bc, tc, -2.0)) < 1e-12

    def test_half_channel_series_value(self, tc, half_bc):
        got = complex(ck.trace_resolvent_diff(half_bc, tc, -1.0)).real
        assert got == pytest.approx(TRACE_EXACT, abs=1e-9)

    def test_eigenvalue_sum_oracle(self, tc, half_bc):
        r = ck.trace_identity_residual(half_bc, tc, -1.0, lmax=4.0e6)
        assert r["eigenvalue_side"] == pytest.approx(TRACE_EXACT, abs=1e-8)
        assert r["residual"] < 1e-8

    def test_torus_trace_identity(self, torus, torus_bc):
        r = ck.trace_identity_residual(torus_bc, torus, -5.0, lmax=4 * PI * 1.05e4)
        assert r["pairs"] >= 1e4
        assert r["residual"] <= 1e-4 * abs(r["trace_side"])

    def test_residue_structure_near_secular_root(self, tc, half_bc):
        # -D'/D - 1/(mu - lam) stays bounded near the simple root mu
        mu = (PI / 2.0) ** 2
        vals = []
        for eps in (1e-2, 1e-3, 1e-4):
            lam = mu - eps
            v = complex(ck.trace_resolvent_diff(half_bc, tc, lam)).real
            vals.append(v - 1.0 / (mu - lam))
        assert np.max(np.abs(np.diff(vals))) < 0.2
        assert abs(vals[-1]) < 10.0

    def test_residue_structure_near_friedrichs_pole(self, tc, half_bc):
        # eps stays above the finite-difference stencil width 4h ~ 4e-4
        lam_j = PI**2
        vals = []
        for eps in (5e-2, 1e-2, 2e-3):
            lam = lam_j - eps
            v = complex(ck.trace_resolvent_diff(half_bc, tc, lam)).real
            vals.append(v + 1.0 / (lam_j - lam))
        assert np.max(np.abs(np.diff(vals))) < 0.2


class TestSecularSpectrum:
    def test_friedrichs_returns_towers_verbatim(self, tc):
        bc = ck.friedrichs_bc(tc.channel_set())
        spec = ck.secular_spectrum(bc, tc, 120.0)
        ref = tc.friedrichs_eigenvalues(120.0)
        assert np.allclose(spec.values, ref.values, atol=1e-12)

    def test_first_twenty_half_channel_roots(self, tc, half_bc):
        lmax = ((20.5) * PI) ** 2
        spec = ck.secular_spectrum(half_bc, tc, lmax, include_untouched=False)
        roots = spec.select("0:1").values[:20]
        want = np.array([((m - 0.5) * PI) ** 2 for m in range(1, 21)])
        assert np.max(np.abs(roots - want)) < 1e-10

    def test_untouched_channels_verbatim(self, tc, half_bc):
        spec = ck.secular_spectrum(half_bc, tc, 100.0)
        other = spec.select("0:-1").values
        ref = tc.friedrichs_eigenvalues(100.0).select("0:-1").values
        assert np.allclose(other, ref, atol=1e-12)

    def test_log_channel_bound_state(self):
        # coupling the log channel of the R=2 truncated cone pulls one
        # eigenvalue below zero: S_00 decreases through -ln 2 at lam = 0
        model = ck.TruncatedConeModel(theta=4 * PI, radius=2.0)
        bc = ck.rotation_bc(model.channel_set(), {(0, 0): PI / 2})
        spec = ck.secular_spectrum(bc, model, 5.0, include_untouched=False)
        roots = spec.select("0:0").values
        assert roots.size >= 1 and roots[0] < 0
        assert abs(float(model.s_matrix(roots[0])[1, 1])) < 1e-9
        assert ck.spectral_shift(bc, model, 2.0 * roots[0]) == 0.0  # below it
        assert ck.spectral_shift(bc, model, 0.5) == 1.0  # above it, below poles

    def test_unitary_mixing_invariance(self, tc):
        # mixing the two equal-|nu| channels leaves the spectrum unchanged
        th = np.array([0.9, 0.0, 0.9])
        p0 = np.diag(np.cos(th)).astype(complex)
        q0 = np.diag(np.sin(th)).astype(complex)
        a = 0.77
        u = np.eye(3, dtype=complex)
        u[0, 0] = u[2, 2] = math.cos(a)
        u[0, 2] = math.sin(a)
        u[2, 0] = -math.sin(a)
        bc_diag = ck.ExtensionBC(p0, q0)
        bc_mix = ck.ExtensionBC(u @ p0 @ u.conj().T, u @ q0 @ u.conj().T)
        s1 = ck.secular_spectrum(bc_diag, tc, 60.0, include_untouched=False)
        s2 = ck.secular_spectrum(bc_mix, tc, 60.0, include_untouched=False)
        assert np.allclose(np.sort(s1.values), np.sort(s2.values), atol=1e-9)


class TestSpectralShift:
    def test_zero_below_spectra(self, tc, half_bc):
        assert ck.spectral_shift(half_bc, tc, -5.0) == 0.0
        assert ck.spectral_shift(half_bc, tc, 0.5 * (PI / 2) ** 2) == 0.0

    def test_jump_pattern(self, tc, half_bc):
        t1 = 0.5 * ((PI / 2) ** 2 + PI**2)  # between new root and old pole
        t2 = 0.5 * (PI**2 + (1.5 * PI) ** 2)
        assert ck.spectral_shift(half_bc, tc, t1) == 1.0
        assert ck.spectral_shift(half_bc, tc, t2) == 0.0

    def test_jump_positions_match_closed_forms(self, tc, half_bc):
        for m in (1, 2, 3):
            mu = ((m - 0.5) * PI) ** 2
            assert (
                ck.spectral_shift(half_bc, tc, mu + 1e-6)
                - ck.spectral_shift(half_bc, tc, mu - 1e-6)
            ) == 1.0
            lj = (m * PI) ** 2
            assert (
                ck.spectral_shift(half_bc, tc, lj + 1e-6)
                - ck.spectral_shift(half_bc, tc, lj - 1e-6)
            ) == -1.0

    def test_proximity_error(self, tc, half_bc):
        with pytest.raises(PoleError):
            ck.spectral_shift(half_bc, tc, (PI / 2) ** 2 + 1e-14)


class TestAsymptoticExponents:
    def test_sphere_bc(self):
        model = ck.SphereS54Model(ck.hexagon_config())
        cs = model.channel_set()
        bc = ck.rotation_bc(cs, {(0, 1): 0.7, (0, -1): 0.7})
        ad = ck.asymptotic_exponents(bc, cs)
        assert ad.alpha0 == pytest.approx(1.0)
        assert ad.l0 == 0 and ad.regular
        assert ad.leading_coeff.real == pytest.approx(math.sin(0.7) ** 2, rel=1e-12)

    def test_half_channel(self, tc, half_bc):
        ad = ck.asymptotic_exponents(half_bc, tc.channel_set())
        assert ad.alpha0 == pytest.approx(0.5)
        assert ad.l0 == 0
        assert ad.leading_coeff.real == pytest.approx(-1.0, rel=1e-12)

    def test_torus_log_power(self, torus, torus_bc):
        ad = ck.asymptotic_exponents(torus_bc, torus.channel_set())
        assert ad.alpha0 == 0.0 and ad.l0 == 1 and not ad.regular
        assert ad.leading_coeff.real == pytest.approx(0.5)

    def test_degenerate_leading_coefficient_reported(self, tc):
        # rank-1 coupling of the two equal-|nu| channels: t^1 terms cancel
        # (identity and swap permutations), the true growth is t^{1/2}
        cs = tc.channel_set()
        p = np.array([[2.0, 0, 1.0], [0, 1.0, 0], [1.0, 0, 2.0]], dtype=complex)
        q = np.array([[1.0, 0, 1.0], [0, 0.0, 0], [1.0, 0, 1.0]], dtype=complex)
        bc = ck.ExtensionBC(p, q)
        ok, diag = ck.validate_bc(bc)
        assert ok, diag
        with pytest.raises(DegenerateLeadingTermError):
            ck.asymptotic_exponents(bc, cs)


class TestGammaAndComparison:
    def test_friedrichs_gamma_zero(self, tc):
        bc = ck.friedrichs_bc(tc.channel_set())
        assert abs(ck.gamma_constant(bc, tc)) < 1e-10

    def test_half_channel_gamma_is_i_pi(self, tc, half_bc):
        g = ck.gamma_constant(half_bc, tc)
        assert abs(g.real) < 1e-8
        assert g.imag == pytest.approx(PI)

    def test_sphere_gamma_log_sin_squared(self):
        model = ck.SphereS54Model(ck.hexagon_config())
        th = 0.7
        bc = ck.rotation_bc(model.channel_set(), {(0, 1): th, (0, -1): th})
        g = ck.gamma_constant(bc, model)
        assert g == pytest.approx(math.log(math.sin(th) ** 2), abs=1e-8)

    def test_non_regular_refused_with_l0(self, torus, torus_bc):
        with pytest.raises(NonRegularExtensionError) as exc:
            ck.gamma_constant(torus_bc, torus)
        assert exc.value.l0 == 1

    def test_d_star_zero_values(self, tc, half_bc):
        d, ds = ck.d_star_zero(half_bc, tc)
        assert d == 0
        assert ds.real == pytest.approx(-1.0, abs=1e-8)
        bc = ck.friedrichs_bc(tc.channel_set())
        d, ds = ck.d_star_zero(bc, tc)
        assert d == 0 and ds == pytest.approx(1.0)

    def test_d_star_zero_with_kernel(self, tc):
        # cos t + sin t S(0) = 0 at t = pi/4 since S_{1/2 1/2}(0) = -1
        bc = ck.rotation_bc(tc.channel_set(), {(0, 1): PI / 4})
        d, ds = ck.d_star_zero(bc, tc)
        assert d == 1
        # frozen from the expansion S = -1 + lam/3 + O(lam^2):
        # D = cos(pi/4) lam / 3, so D*(0) = -sqrt(2)/6
        assert ds.real == pytest.approx(-math.sqrt(2.0) / 6.0, abs=1e-8)

    def test_det_ratio_half_channel_is_one(self, tc, half_bc):
        res = ck.det_ratio(half_bc, tc)
        assert res.ratio.real == pytest.approx(1.0, abs=1e-7)
        assert abs(res.ratio.imag) < 1e-12
        assert res.d == 0 and res.delta_l == 0 and res.delta_f == 0
        assert res.kernel_consistent

    def test_det_ratio_with_kernel_cross_check(self, tc):
        bc = ck.rotation_bc(tc.channel_set(), {(0, 1): PI / 4})
        res = ck.det_ratio(bc, tc)
        assert res.d == 1 and res.delta_l == 1 and res.delta_f == 0
        assert res.kernel_consistent  # secular solver finds the 0-eigenvalue
        assert res.ratio.real == pytest.approx(1.0 / 3.0, abs=1e-7)

    def test_det_ratio_general_radius_matches_relzeta_closed_form(self):
        # exp(-Gamma) D*(0) = 1/R; the relative-zeta side gives exp(-ln R)
        model = ck.TruncatedConeModel(theta=4 * PI, radius=2.0)
        bc = ck.rotation_bc(model.channel_set(), {(0, 1): PI / 2})
        res = ck.det_ratio(bc, model)
        assert res.ratio.real == pytest.approx(0.5, abs=1e-7)

    def test_shifted_form(self, tc, half_bc):
        res = ck.det_ratio(half_bc, tc, lam_tilde=-1.0)
        want = cmath.exp(-1j * PI) * (-COTH1)
        assert res.shifted_value == pytest.approx(want, rel=1e-7)

    def test_friedrichs_vs_itself(self, tc):
        bc = ck.friedrichs_bc(tc.channel_set())
        res = ck.det_ratio(bc, tc)
        assert res.ratio == pytest.approx(1.0)


class TestBranchTracking:
    def test_negative_axis_phase_constant_i_pi(self, tc, half_bc):
        # D < 0 on the whole negative axis: tracked Im ln D == pi throughout
        tr = ck.track_log_d(half_bc, tc, -1e4, -1e-3)
        assert np.allclose(tr.values.imag, PI, atol=1e-12)
        assert np.all(np.diff(tr.lams) > 0)

    def test_magnitude_matches_closed_form(self, tc, half_bc):
        tr = ck.track_log_d(half_bc, tc, -100.0, -0.5)
        for lam, v in zip(tr.lams, tr.values):
            k = math.sqrt(-lam)
            assert v.real == pytest.approx(math.log(k / math.tanh(k)), rel=1e-10)

    def test_xi_prime_asymptotic_bound_regular(self, tc, half_bc):
        # t^2 |2 i pi xi'(-t) - alpha0/t| bounded and decreasing; the grid
        # stops at t = 64 because the e^{-2 sqrt(t)} signal falls below the
        # finite-difference noise floor beyond that
        ad = ck.asymptotic_exponents(half_bc, tc.channel_set())
        vals = []
        for t in (16.0, 36.0, 64.0):
            lhs = complex(ck.trace_resolvent_diff(half_bc, tc, -t)).real
            vals.append(t * t * abs(lhs - ad.alpha0 / t))
        assert vals[0] < 1.0
        assert vals[0] > vals[1] > vals[2]

    def test_xi_prime_asymptotic_nonregular_torus(self, torus, torus_bc):
        # t ln t d/dt ln D(-t) -> l0 = 1 within 2% by t = 1e6
        def ln_d(t):
            return math.log(abs(ck.d_function(torus_bc, torus, -t)))

        t = 1e6
        h = 1e-3 * t
        slope = (ln_d(t + h) - ln_d(t - h)) / (2 * h)
        assert t * math.log(t) * slope == pytest.approx(1.0, abs=0.02)


class TestGuards:
    def test_gamma_needs_matching_sizes(self, tc):
        bad = ck.friedrichs_bc(ck.ChannelSet(points=((0, 2 * PI),)))
        with pytest.raises(Exception):
            ck.d_function(bad, tc, -1.0)

    def test_secular_needs_positive_continuation(self):
        model = ck.SphereS54Model(ck.hexagon_config())
        bc = ck.friedrichs_bc(model.channel_set())
        with pytest.raises(UnsupportedModelError):
            ck.secular_spectrum(bc, model, 10.0)
