import math

import numpy as np
import pytest

import conekrein as ck
from conekrein.errors import DomainError, InvalidBoundaryConditionError


@pytest.fixture
def cs4pi():
    return ck.ChannelSet(points=((0, 4 * math.pi),))


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)


class TestChannelSet:
    def test_channel_enumeration_and_order(self, cs4pi):
        assert [(c.point_id, c.k) for c in cs4pi.channels] == [(0, -1), (0, 0), (0, 1)]
        assert cs4pi.channels[0].nu == pytest.approx(-0.5)
        assert cs4pi.channels[2].nu == pytest.approx(0.5)
        assert cs4pi.log_indices == [1]

    def test_exponents_strictly_inside_unit_interval(self):
        cs = ck.ChannelSet(points=((0, 3 * math.pi), (1, 2 * math.pi), (2, math.pi)))
        for c in cs.channels:
            if not c.is_log:
                assert 0 < abs(c.nu) < 1
        # 2 pi and pi points carry only the log channel
        assert [c.k for c in cs.channels if c.point_id == 1] == [0]
        assert [c.k for c in cs.channels if c.point_id == 2] == [0]

    def test_normalization_constants(self, cs4pi):
        th = 4 * math.pi
        assert cs4pi.channels[1].c_norm == pytest.approx(math.sqrt(2 * th))
        assert cs4pi.channels[2].c_norm == pytest.approx(math.sqrt(2 * 0.5 * th))

    def test_invalid_angles(self):
        with pytest.raises(DomainError):
            ck.ChannelSet(points=((0, -1.0),))


class TestCoefficientVector:
    def test_equal_length_invariant(self, cs4pi):
        v = ck.CoefficientVector(np.zeros(cs4pi.n, complex), np.ones(cs4pi.n, complex))
        assert v.minus.size == cs4pi.n
        with pytest.raises(Exception):
            ck.CoefficientVector(np.zeros(2, complex), np.zeros(3, complex))

    def test_scattering_relation_on_cone(self, cs4pi):
        # outgoing = S(lam) incoming for the infinite-cone matrix
        _, s = ck.cone_s_matrix(4 * math.pi, -1.0)
        a_minus = np.array([1.0, 0.5, -2.0], dtype=complex)
        v = ck.CoefficientVector(a_minus, s @ a_minus)
        assert v.plus[2] == pytest.approx(-a_minus[2])


class TestValidateBC:
    def test_friedrichs_and_transpose(self, cs4pi):
        n = cs4pi.n
        ok, _ = ck.validate_bc(ck.ExtensionBC(np.eye(n), np.zeros((n, n))))
        assert ok
        ok, _ = ck.validate_bc(ck.ExtensionBC(np.zeros((n, n)), np.eye(n)))
        assert ok

    def test_anti_hermitian_rejected(self):
        ok, diag = ck.validate_bc(ck.ExtensionBC(np.eye(2), 1j * np.eye(2)))
        assert not ok and "Hermitian" in diag

    def test_rank_deficiency_rejected(self):
        p = np.zeros((2, 2))
        p[0, 0] = 1.0
        ok, diag = ck.validate_bc(ck.ExtensionBC(p, np.zeros((2, 2))))
        assert not ok and "rank" in diag

    def test_dimension_mismatch(self):
        with pytest.raises(InvalidBoundaryConditionError):
            ck.ExtensionBC(np.eye(2), np.eye(3))


class TestRegularity:
    def test_friedrichs_regular(self, cs4pi):
        assert ck.is_regular(ck.friedrichs_bc(cs4pi), cs4pi)

    def test_free_log_channel_not_regular(self, cs4pi):
        n = cs4pi.n
        bc = ck.ExtensionBC(np.zeros((n, n)), np.eye(n))
        assert not ck.is_regular(bc, cs4pi)

    def test_s54_style_rotation_regular(self, cs4pi):
        bc = ck.rotation_bc(cs4pi, {(0, 1): 0.9, (0, -1): 0.9})
        assert ck.is_regular(bc, cs4pi)

    def test_regularity_iff_log_angles_vanish_mod_pi(self, cs4pi, rng):
        for _ in range(25):
            angles = {
                (0, -1): rng.uniform(-math.pi, math.pi),
                (0, 0): rng.uniform(-math.pi, math.pi),
                (0, 1): rng.uniform(-math.pi, math.pi),
            }
            bc = ck.rotation_bc(cs4pi, angles)
            ok, _ = ck.validate_bc(bc)
            assert ok
            expected = abs(math.sin(angles[(0, 0)])) < 1e-12
            assert ck.is_regular(bc, cs4pi) == expected


class TestBlockDecompose:
    def test_friedrichs_all_p(self, cs4pi):
        bd = ck.block_decompose(ck.friedrichs_bc(cs4pi))
        assert bd.r == 0
        assert bd.P1.shape == (3, 3)

    def test_all_q(self, cs4pi):
        n = cs4pi.n
        bd = ck.block_decompose(ck.ExtensionBC(np.zeros((n, n)), np.eye(n)))
        assert bd.r == n
        assert np.max(np.abs(bd.L)) < 1e-12

    def test_roundtrip_random_rotations(self, cs4pi, rng):
        for _ in range(20):
            angles = {(0, k): rng.uniform(-math.pi, math.pi) for k in (-1, 0, 1)}
            bc = ck.rotation_bc(cs4pi, angles)
            bd = ck.block_decompose(bc)
            pa, qa = bd.assembled()
            assert np.max(np.abs(bd.T @ bc.P @ bd.U - pa)) < 1e-10
            assert np.max(np.abs(bd.T @ bc.Q @ bd.U - qa)) < 1e-10
            assert np.max(np.abs(bd.L - bd.L.conj().T)) < 1e-10
            assert np.linalg.cond(bd.Q1) < 1e8 if bd.r else True

    def test_roundtrip_mixed_unitary(self, rng):
        # couple two channels through a random unitary; still lagrangian
        th = np.array([0.3, 0.0, 1.1])
        p0, q0 = np.diag(np.cos(th)), np.diag(np.sin(th))
        # rotate within the two power channels (indices 0 and 2)
        a = rng.uniform(0, 2 * math.pi)
        u = np.eye(3, dtype=complex)
        u[0, 0] = u[2, 2] = math.cos(a)
        u[0, 2] = math.sin(a)
        u[2, 0] = -math.sin(a)
        bc = ck.ExtensionBC(u @ p0 @ u.conj().T, u @ q0 @ u.conj().T)
        ok, diag = ck.validate_bc(bc)
        assert ok, diag
        bd = ck.block_decompose(bc)
        pa, qa = bd.assembled()
        assert np.max(np.abs(bd.T @ bc.P @ bd.U - pa)) < 1e-10
        assert np.max(np.abs(bd.T @ bc.Q @ bd.U - qa)) < 1e-10


class TestConstructorsAndJson:
    def test_rotation_all_zero_is_friedrichs(self, cs4pi):
        bc = ck.rotation_bc(cs4pi, {})
        assert ck.same_extension(bc, ck.friedrichs_bc(cs4pi))

    def test_rotation_halfpi_is_pure_q(self, cs4pi):
        bc = ck.rotation_bc(cs4pi, {(0, 1): math.pi / 2})
        j = cs4pi.index(0, 1)
        assert abs(bc.P[j, j]) < 1e-15 and bc.Q[j, j] == pytest.approx(1.0)

    def test_rotation_matches_block_diagonal_form(self, cs4pi):
        # the two-power-channel rotation pair in explicit matrix form
        th = 0.8
        p = np.diag([math.cos(th), 1.0, math.cos(th)]).astype(complex)
        q = np.diag([math.sin(th), 0.0, math.sin(th)]).astype(complex)
        bc = ck.rotation_bc(cs4pi, {(0, 1): th, (0, -1): th})
        assert ck.same_extension(bc, ck.ExtensionBC(p, q))
        assert ck.is_regular(bc, cs4pi)

    def test_require_regular_flag(self, cs4pi):
        with pytest.raises(InvalidBoundaryConditionError):
            ck.rotation_bc(cs4pi, {(0, 0): 0.4}, require_regular=True)

    def test_json_roundtrip(self, cs4pi, rng):
        angles = {(0, k): rng.uniform(-1, 1) for k in (-1, 0, 1)}
        bc = ck.rotation_bc(cs4pi, angles)
        bc2 = ck.ExtensionBC.from_json(bc.to_json())
        assert np.array_equal(bc.P, bc2.P) and np.array_equal(bc.Q, bc2.Q)

    def test_same_extension_invariant_under_row_transform(self, rng):
        p = np.diag([1.0, 0.0]).astype(complex)
        q = np.diag([0.0, 1.0]).astype(complex)
        t = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        bc1 = ck.ExtensionBC(p, q)
        bc2 = ck.ExtensionBC(t @ p, t @ q)
        assert ck.same_extension(bc1, bc2)
        assert not ck.same_extension(bc1, ck.ExtensionBC(q, p))
