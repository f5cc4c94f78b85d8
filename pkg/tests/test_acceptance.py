"""Acceptance suite: one test per criterion, at the stated tolerances.

Each test prints a PASS line with its runtime (visible under ``pytest -s``
or with ``-rP``); runtimes are asserted after the session-wide JIT warmup
fixture has run.
"""

import math
import time

import numpy as np
import pytest

import conekrein as ck
from conekrein.errors import NonRegularExtensionError

PI = math.pi
EULER_GAMMA = 0.5772156649015329


class _Timer:
    def __init__(self, limit):
        self.limit = limit

    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.t0
        return False


def _report(n, timer, detail):
    print(f"ACCEPTANCE {n}: PASS ({timer.elapsed:.2f}s < {timer.limit:.0f}s) {detail}")
    assert timer.elapsed < timer.limit


@pytest.fixture(scope="module")
def tc():
    return ck.TruncatedConeModel(theta=4 * PI, radius=1.0)


@pytest.fixture(scope="module")
def half_bc(tc):
    return ck.rotation_bc(tc.channel_set(), {(0, 1): PI / 2})


def test_criterion_1_cone_smatrix():
    with _Timer(1.0) as t:
        _, s = ck.cone_s_matrix(4 * PI, -1.0)
        e00 = s[1, 1]
        ehh = s[2, 2]
    assert e00 == pytest.approx(EULER_GAMMA - math.log(2.0), abs=1e-10)
    assert ehh == pytest.approx(-1.0, abs=1e-12)
    _report(1, t, f"S_00(-1)={e00:.12f}, S_hh(-1)={ehh:.14f}")


def test_criterion_2_closed_form_channel(tc):
    with _Timer(1.0) as t:
        lams = np.linspace(-100.0, -0.01, 50)
        worst = 0.0
        for lam in lams:
            k = math.sqrt(-lam)
            want = -k / math.tanh(k)
            got = tc.s_matrix(lam)[2, 2]
            worst = max(worst, abs(got - want) / abs(want))
        assert worst < 1e-10
        # continuation: matches -sqrt(lam) cot sqrt(lam) off poles
        worst_pos = 0.0
        for m in range(1, 21):
            lam = ((m - 0.2) * PI) ** 2  # safely off zeros and poles
            s = math.sqrt(lam)
            want = -s / math.tan(s)
            got = tc.s_matrix(lam)[2, 2]
            worst_pos = max(worst_pos, abs(got - want) / abs(want))
        assert worst_pos < 1e-10
    _report(2, t, f"negative-axis rtol {worst:.2e}, continuation rtol {worst_pos:.2e}")


def test_criterion_3_trace_identity(tc, half_bc):
    target = math.tanh(1.0) / 2.0 - (1.0 / math.tanh(1.0) - 1.0) / 2.0
    with _Timer(30.0) as t:
        lhs = complex(ck.trace_resolvent_diff(half_bc, tc, -1.0)).real
        r = ck.trace_identity_residual(half_bc, tc, -1.0, lmax=4.0e6)
        assert lhs == pytest.approx(0.2242794352, abs=1e-8)
        assert lhs == pytest.approx(target, abs=1e-8)
        assert r["eigenvalue_side"] == pytest.approx(target, abs=1e-8)
        torus = ck.TorusPointModel(ck.TorusLattice((1.0, 0.0), (0.0, 1.0)))
        tbc = ck.rotation_bc(torus.channel_set(), {(0, 0): PI / 2})
        rt = ck.trace_identity_residual(tbc, torus, -5.0, lmax=4 * PI * 1.05e4)
        assert rt["pairs"] >= 10_000
        assert rt["residual"] <= 1e-4 * abs(rt["trace_side"])
    _report(3, t, f"cone sides {lhs:.10f}/{r['eigenvalue_side']:.10f}, "
                  f"torus rel residual {rt['residual']/abs(rt['trace_side']):.1e} "
                  f"({rt['pairs']} eigenvalues)")


def test_criterion_4_secular_and_shift(tc, half_bc):
    with _Timer(5.0) as t:
        lmax = (20.5 * PI) ** 2
        spec = ck.secular_spectrum(half_bc, tc, lmax, include_untouched=False)
        roots = spec.select("0:1").values[:20]
        want = np.array([((m - 0.5) * PI) ** 2 for m in range(1, 21)])
        err = float(np.max(np.abs(roots - want)))
        assert err < 1e-10
        # shift jumps: +1 at each new eigenvalue, -1 at each Friedrichs one
        for m in (1, 2):
            mu = ((m - 0.5) * PI) ** 2
            jump = ck.spectral_shift(half_bc, tc, mu + 1e-6) - ck.spectral_shift(
                half_bc, tc, mu - 1e-6
            )
            assert jump == 1.0
            lj = (m * PI) ** 2
            jump = ck.spectral_shift(half_bc, tc, lj + 1e-6) - ck.spectral_shift(
                half_bc, tc, lj - 1e-6
            )
            assert jump == -1.0
    _report(4, t, f"first 20 roots atol {err:.2e}, jump pattern +1/-1 verified")


def test_criterion_5_determinant_comparison(tc, half_bc):
    with _Timer(60.0) as t:
        gamma = ck.gamma_constant(half_bc, tc)
        assert abs(gamma.real) < 1e-6
        assert gamma.imag == pytest.approx(PI, abs=1e-12)
        d, dstar = ck.d_star_zero(half_bc, tc)
        assert d == 0
        assert dstar.real == pytest.approx(-1.0, abs=1e-8)
        ratio = ck.det_ratio(half_bc, tc).ratio
        assert ratio.real == pytest.approx(1.0, abs=1e-7)
        mu, lam = ck.half_channel_spectra(12000)
        res = ck.rel_zeta_result(mu, lam)
        assert res.zeta_at_zero == pytest.approx(0.5, abs=1e-4)
        assert res.zeta_prime_at_zero == pytest.approx(0.0, abs=1e-6)
        assert res.det_ratio == pytest.approx(ratio.real, rel=2e-6)
    _report(5, t, f"Re Gamma={gamma.real:.1e}, Im Gamma=pi, D*(0)={dstar.real:.10f}, "
                  f"Krein ratio={ratio.real:.10f}, zeta ratio={res.det_ratio:.10f}")


def test_criterion_6_locality(tc):
    with _Timer(5.0) as t:
        errs_tc, errs_to = {}, {}
        torus = ck.TorusPointModel(ck.TorusLattice((2.0, 0.0), (0.0, 2.0)))
        for tt in (25.0, 100.0):
            _, cone = ck.cone_s_matrix(4 * PI, -tt)
            errs_tc[tt] = float(np.max(np.abs(tc.s_matrix(-tt) - cone)))
            errs_to[tt] = abs(torus.s00_image(-tt) - ck.cone_s00(-tt))
        assert errs_tc[100.0] < 1e-6 and errs_to[100.0] < 1e-6
        assert errs_tc[100.0] / errs_tc[25.0] < 1e-2
        assert errs_to[100.0] / errs_to[25.0] < 1e-2
    _report(6, t, f"|S - S_cone| at t=100: cone {errs_tc[100.0]:.1e}, "
                  f"torus {errs_to[100.0]:.1e}; quartic-step ratios "
                  f"{errs_tc[100.0]/errs_tc[25.0]:.1e}, {errs_to[100.0]/errs_to[25.0]:.1e}")


def test_criterion_7_sphere_hexagon():
    with _Timer(10.0) as t:
        hexagon = ck.hexagon_config()
        blk = ck.s0_block(hexagon)
        assert np.max(np.abs(blk)) < 1e-8
        th = 0.7
        model = ck.SphereS54Model(hexagon)
        bc = ck.rotation_bc(model.channel_set(), {(0, 1): th, (0, -1): th})
        res = ck.det_ratio(bc, model)
        assert res.ratio.real == pytest.approx(1.0 / math.tan(th) ** 2, rel=1e-7)
        # perturbed configuration against the finite-difference oracle
        import cmath

        import oracles

        pts = [1.1 * cmath.exp(1j * PI / 3)] + [
            cmath.exp(1j * PI * k / 3) for k in range(2, 7)
        ]
        cfg = ck.SphereConfig(tuple(pts))
        entry = ck.s0_block(cfg)[1, 1]
        ref = oracles.fd_schwarzian_block_entry(cfg)
        assert entry == pytest.approx(ref, rel=1e-6)
    _report(7, t, f"hexagon |S(0)| < 1e-8, ratio=cot^2 ok, "
                  f"perturbed entry {entry:.8f} vs oracle rel "
                  f"{abs(entry-ref)/abs(ref):.1e}")


def test_criterion_8_nonregular_asymptotics():
    with _Timer(5.0) as t:
        torus = ck.TorusPointModel(ck.TorusLattice((1.0, 0.0), (0.0, 1.0)))
        cs = torus.channel_set()
        bc = ck.rotation_bc(cs, {(0, 0): PI / 2})
        ad = ck.asymptotic_exponents(bc, cs)
        assert ad.alpha0 == 0.0 and ad.l0 == 1

        def ln_d(tt):
            return math.log(abs(ck.d_function(bc, torus, -tt)))

        tt = 1e6
        h = 1e-3 * tt
        slope = (ln_d(tt + h) - ln_d(tt - h)) / (2 * h)
        limit = tt * math.log(tt) * slope
        assert limit == pytest.approx(1.0, abs=0.02)
        with pytest.raises(NonRegularExtensionError):
            ck.gamma_constant(bc, torus)
    _report(8, t, f"alpha0=0, l0=1, t ln t dlnD/dt -> {limit:.4f}, refusal raised")


def test_criterion_9_property_suites(tc):
    import oracles

    with _Timer(60.0) as t:
        # specfun identities at rtol 1e-10
        rng = np.random.default_rng(1234)
        for _ in range(12):
            x = float(rng.uniform(0.3, 60.0))
            nu = float(rng.uniform(0.0, 0.95))
            dk = oracles.fd_derivative_bessel(lambda s: float(ck.bessel_k(nu, s)), x)
            di = oracles.fd_derivative_bessel(lambda s: float(ck.bessel_i(nu, s)), x)
            w = float(ck.bessel_i(nu, x)) * dk - di * float(ck.bessel_k(nu, x))
            assert w == pytest.approx(-1.0 / x, rel=1e-10)
        for _ in range(12):
            x = float(rng.uniform(0.02, 0.98))
            r = float(ck.gamma_fn(x)) * float(ck.gamma_fn(1 - x)) * math.sin(PI * x) / PI
            assert r == pytest.approx(1.0, rel=1e-10)
        # randomized boundary-pair classification
        cs = tc.channel_set()
        for _ in range(40):
            angles = {(0, k): float(rng.uniform(-PI, PI)) for k in (-1, 0, 1)}
            bc = ck.rotation_bc(cs, angles)
            ok, diag = ck.validate_bc(bc)
            assert ok, diag
            assert ck.is_regular(bc, cs) == (abs(math.sin(angles[(0, 0)])) < 1e-12)
        # Gram vs finite-difference derivative on non-log channels
        for theta, k in ((4 * PI, 1), (3 * PI, 1)):
            model = ck.TruncatedConeModel(theta=theta, radius=1.0)
            idx = model.channel_set().index(0, k)
            for lam in (-1.0, -3.0):
                gram = ck.g_gram(model, k, k, lam)
                fd = oracles.fd_derivative(
                    lambda s: float(model.s_matrix(s)[idx, idx]), lam, 1e-4
                )
                assert gram == pytest.approx(fd, rel=1e-6)
        # monotonicity of S_nunu between Friedrichs eigenvalues
        jdx = tc.channel_set().index(0, 1)
        for a, b in [(PI**2, (2 * PI) ** 2), ((2 * PI) ** 2, (3 * PI) ** 2)]:
            grid = np.linspace(a + 0.04 * (b - a), b - 0.04 * (b - a), 8)
            vals = [tc.s_matrix(x)[jdx, jdx] for x in grid]
            assert np.all(np.diff(vals) > 0)
    _report(9, t, "Wronskian/reflection 1e-10, bc classification, Gram 1e-6, "
                  "monotonicity all verified")
