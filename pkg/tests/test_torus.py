import math

import numpy as np
import pytest

import conekrein as ck
from conekrein.errors import PoleError


@pytest.fixture(scope="module")
def unit_torus():
    return ck.TorusPointModel(ck.TorusLattice((1.0, 0.0), (0.0, 1.0)))


class TestLattice:
    def test_area_and_dual(self):
        lat = ck.TorusLattice((2.0, 0.0), (0.5, 1.5))
        assert lat.area == pytest.approx(3.0)
        b1, b2 = lat.dual_basis
        for b, v, ref in [(b1, lat.v1, 2 * math.pi), (b1, lat.v2, 0.0),
                          (b2, lat.v2, 2 * math.pi), (b2, lat.v1, 0.0)]:
            assert b[0] * v[0] + b[1] * v[1] == pytest.approx(ref, abs=1e-12)

    def test_shortest_vector(self):
        lat = ck.TorusLattice((1.5, 0.0), (0.75, 0.75 * math.sqrt(3)))
        assert lat.shortest_vector == pytest.approx(1.5)

    def test_degenerate_rejected(self):
        with pytest.raises(Exception):
            ck.TorusLattice((1.0, 0.0), (2.0, 0.0))


class TestChannelStructure:
    def test_single_log_channel(self, unit_torus):
        cs = unit_torus.channel_set()
        assert cs.n == 1 and cs.channels[0].is_log

    def test_friedrichs_multiplicities(self, unit_torus):
        spec = unit_torus.friedrichs_eigenvalues(90.0)
        four_pi_sq = 4 * math.pi**2
        assert spec.values[0] == 0.0 and spec.multiplicities[0] == 1
        assert spec.values[1] == pytest.approx(four_pi_sq)
        assert spec.multiplicities[1] == 4  # (+-1, 0), (0, +-1)
        assert spec.values[2] == pytest.approx(2 * four_pi_sq)
        assert spec.multiplicities[2] == 4  # (+-1, +-1)


class TestS00:
    def test_far_negative_matches_plane_value(self, unit_torus):
        # image terms bounded by K_0(10) ~ 1.8e-5 at lam = -100
        diff = unit_torus.s00_image(-100.0) - ck.cone_s00(-100.0)
        assert abs(diff) < 1e-3
        assert abs(diff) == pytest.approx(4 * float(ck.bessel_k(0.0, 10.0)), rel=0.05)

    def test_exponential_approach_to_plane(self, unit_torus):
        # error ~ e^{-sqrt(-lam) l_min}: monotone in sqrt(-lam), ratio bound
        errs = []
        for t in (25.0, 49.0, 100.0):
            errs.append(abs(unit_torus.s00_image(-t) - ck.cone_s00(-t)))
        assert errs[0] > errs[1] > errs[2]
        # e(100)/e(25) ~ e^{-(10-5)} ~ 7e-3 up to algebraic prefactors
        assert errs[2] / errs[0] < 1e-2

    def test_once_subtracted_identity_at_anchor(self, unit_torus):
        lam0 = unit_torus.anchor_lam
        assert unit_torus.s00_spectral(lam0) == unit_torus.s00_image(lam0)

    @pytest.mark.parametrize("lam", [-0.5, -3.0, -7.7])
    def test_spectral_sum_matches_image_sum(self, unit_torus, lam):
        a = unit_torus.s00_image(lam)
        b = unit_torus.s00_spectral(lam)
        assert a == pytest.approx(b, abs=1e-9)

    def test_spectral_sum_other_lattice(self):
        lat = ck.TorusLattice((1.5, 0.0), (0.75, 0.75 * math.sqrt(3)))
        tp = ck.TorusPointModel(lat)
        for lam in (-0.9, -4.4):
            assert tp.s00_image(lam) == pytest.approx(tp.s00_spectral(lam), abs=1e-9)

    def test_decreasing_on_gaps(self, unit_torus):
        four_pi_sq = 4 * math.pi**2
        grid = np.linspace(0.1 * four_pi_sq, 0.9 * four_pi_sq, 7)
        vals = [unit_torus.s00(x) for x in grid]
        assert np.all(np.diff(vals) < 0)
        grid = np.linspace(-30.0, -0.5, 7)
        vals = [unit_torus.s00(x) for x in grid]
        assert np.all(np.diff(vals) < 0)

    def test_pole_error_on_spectrum(self, unit_torus):
        with pytest.raises(PoleError):
            unit_torus.s00_spectral(4 * math.pi**2)

    def test_derivative_exact_sum(self, unit_torus):
        d = float(unit_torus.s_matrix_deriv(-2.0)[0, 0])
        h = 1e-4
        fd = (unit_torus.s00(-2.0 + h) - unit_torus.s00(-2.0 - h)) / (2 * h)
        assert d == pytest.approx(fd, rel=1e-7)
        assert d < 0


class TestSecularInterlacing:
    def test_one_root_strictly_inside_each_gap(self, unit_torus):
        bc = ck.rotation_bc(unit_torus.channel_set(), {(0, 0): math.pi / 2})
        spec = ck.secular_spectrum(bc, unit_torus, 180.0, include_untouched=False)
        towers = unit_torus.friedrichs_eigenvalues(180.0).values
        # moved roots: those not sitting at tower points
        moved = [v for v in spec.values
                 if np.min(np.abs(towers - v)) > 1e-8 * (1 + abs(v))]
        gaps = [(-np.inf, towers[0])] + list(zip(towers[:-1], towers[1:]))
        assert len(moved) == len([g for g in gaps if g[0] < 180.0])
        for (a, b), r in zip(gaps, moved):
            assert a < r < b

    def test_thread_safe_cache(self, unit_torus):
        import concurrent.futures

        with concurrent.futures.ThreadPoolExecutor(max_workers=8) as ex:
            vals = list(ex.map(unit_torus.s00_image, [-3.0] * 16))
        assert len(set(vals)) == 1
