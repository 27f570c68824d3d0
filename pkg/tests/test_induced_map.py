import numpy as np
import pytest

from liouvint import forms, induced_map as im, linalg
from liouvint.errors import (
    DimensionMismatch,
    Exceptional,
    Incompatible,
    NotHamiltonian,
    NotSymmetric,
)


def random_symmetric(rng, d):
    S = rng.uniform(-1.0, 1.0, (d, d))
    return (S + S.T) / 2


class TestConstruction:
    def test_midpoint_from_zero_S(self):
        m = im.from_S(np.zeros((2, 2)))
        assert np.array_equal(m.B, 0.5 * np.eye(2))
        assert np.array_equal(m.C, 0.5 * np.eye(2))

    def test_type_II_gives_euler_A_coefficients(self):
        m = im.from_form(forms.named_form("II", 1))
        assert np.array_equal(m.B, [[0.0, 0.0], [0.0, 1.0]])
        assert np.array_equal(m.C, [[1.0, 0.0], [0.0, 0.0]])

    def test_type_III_gives_euler_B_coefficients(self):
        m = im.from_form(forms.named_form("III", 1))
        assert np.array_equal(m.B, [[1.0, 0.0], [0.0, 0.0]])
        assert np.array_equal(m.C, [[0.0, 0.0], [0.0, 1.0]])

    def test_from_form_equals_from_S_of_extract(self):
        pf = forms.abg_family(1, 0.8, 0.1, -0.3)
        m1 = im.from_form(pf)
        m2 = im.from_S(forms.extract_S(pf))
        assert np.array_equal(m1.B, m2.B)
        assert np.array_equal(m1.C, m2.C)

    def test_from_hamiltonian_matrix_round_trip(self):
        rng = np.random.default_rng(41)
        for n in (1, 2):
            S = random_symmetric(rng, 2 * n)
            H = 2.0 * (linalg.complex_structure(n) @ S)
            m = im.from_hamiltonian_matrix(H)
            assert np.max(np.abs(m.S - S)) <= 1e-14

    def test_rejects_asymmetric_S(self):
        with pytest.raises(NotSymmetric):
            im.from_S([[0.0, 1.0], [0.0, 0.0]])

    def test_rejects_incompatible_form(self):
        with pytest.raises(Incompatible):
            im.from_form(forms.named_form("I", 1))

    def test_rejects_non_hamiltonian(self):
        with pytest.raises(NotHamiltonian):
            im.from_hamiltonian_matrix(np.eye(2))

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_structural_invariants(self, n):
        # seed 42+n; 200 random symmetric S each
        rng = np.random.default_rng(42 + n)
        O = linalg.omega_matrix(n)
        for _ in range(200):
            m = im.from_S(random_symmetric(rng, 2 * n))
            assert np.array_equal(m.B + m.C, np.eye(2 * n))
            W = O @ (m.C - m.B)
            assert np.max(np.abs(W - W.T)) <= 1e-13
            assert linalg.is_hamiltonian(m.C - m.B, 1e-12)

    def test_coefficients_are_liouvillian_shaped(self):
        # Jc B - Jc/2 and Jc C - Jc/2 are symmetric and opposite
        rng = np.random.default_rng(45)
        for n in (1, 2):
            m = im.from_S(random_symmetric(rng, 2 * n))
            Jc = linalg.complex_structure(n)
            SB = Jc @ m.B - 0.5 * Jc
            SC = Jc @ m.C - 0.5 * Jc
            assert np.max(np.abs(SB - SB.T)) <= 1e-13
            assert np.max(np.abs(SC - SC.T)) <= 1e-13
            assert np.max(np.abs(SB + SC)) <= 1e-13


class TestEvaluate:
    def test_diagonal_fixed_exactly(self):
        rng = np.random.default_rng(51)
        for n in (1, 2):
            m = im.from_S(random_symmetric(rng, 2 * n))
            for _ in range(20):
                z = rng.uniform(-5.0, 5.0, 2 * n)
                assert np.array_equal(im.evaluate(m, z, z), z)

    def test_midpoint_average(self):
        m = im.from_S(np.zeros((2, 2)))
        out = im.evaluate(m, [0.0, 0.0], [2.0, 4.0])
        assert np.array_equal(out, [1.0, 2.0])

    def test_phi_family_closed_form(self):
        # projected coordinates of the one-angle family, 50-point grid,
        # 20 random state pairs each (seed 52)
        rng = np.random.default_rng(52)
        for phi in np.linspace(0.0, np.pi / 2, 50):
            m = im.from_form(forms.phi_family(1, phi))
            c, s = np.cos(phi), np.sin(phi)
            for _ in range(20):
                q, p, Q, P = rng.uniform(-2.0, 2.0, 4)
                got = im.evaluate(m, [q, p], [Q, P])
                want = np.array([
                    c * c * Q + s * s * q + c * s * (p - P),
                    c * c * p + s * s * P + c * s * (q - Q),
                ])
                assert np.max(np.abs(got - want)) <= 1e-12

    def test_dimension_mismatch(self):
        m = im.from_S(np.zeros((2, 2)))
        with pytest.raises(DimensionMismatch):
            im.evaluate(m, [1.0, 2.0, 3.0], [0.0, 0.0])


class TestClassify:
    def test_induced_maps_are_single_flow_line(self):
        rng = np.random.default_rng(53)
        for n in (1, 2, 3):
            for _ in range(20):
                m = im.from_S(random_symmetric(rng, 2 * n))
                assert im.classify(m.B, m.C) is im.MapClass.SINGLE_FLOW_LINE

    def test_nilpotent_split_is_single_flow_line(self):
        # b1 = N has Omega N = [[0,0],[0,1]] symmetric, and b1 = -b2
        N = np.array([[0.0, 1.0], [0.0, 0.0]])
        B = 0.5 * np.eye(2) + N
        C = 0.5 * np.eye(2) - N
        assert im.classify(B, C) is im.MapClass.SINGLE_FLOW_LINE

    def test_sum_violation_is_not_interleaving(self):
        assert im.classify(np.eye(2), np.eye(2)) is im.MapClass.NOT_INTERLEAVING

    def test_non_hamiltonian_difference_is_not_interleaving(self):
        # b1 = diag(1, 0) is not Hamiltonian and neither is b = 2 b1
        N = np.diag([1.0, 0.0])
        assert im.classify(0.5 * np.eye(2) + N, 0.5 * np.eye(2) - N) \
            is im.MapClass.NOT_INTERLEAVING


class TestConsistencyMap:
    def test_zero_S_gives_identity(self):
        m = im.from_S(np.zeros((4, 4)))
        assert np.array_equal(im.consistency_map(m), np.eye(4))

    def test_symplectic_for_random_S(self):
        # seed 54; gate at |det(I+H)| > 0.1 for conditioning headroom
        rng = np.random.default_rng(54)
        done = 0
        while done < 100:
            n = int(rng.integers(1, 4))
            S = random_symmetric(rng, 2 * n)
            H = 2.0 * (linalg.complex_structure(n) @ S)
            if not linalg.is_non_exceptional(H, 0.1):
                continue
            done += 1
            m = im.from_S(S)
            psi = im.consistency_map(m)
            assert linalg.symplectic_residual(psi) <= 1e-10
            # involution: cayley(psi) recovers H
            assert np.max(np.abs(linalg.cayley(psi) - H)) <= 1e-10

    def test_type_II_map_is_exceptional(self):
        # H = 2 Jc S for the type-II form is diag(1, -1): det(I + H) = 0,
        # so euler A has no consistency map
        m = im.from_form(forms.named_form("II", 1))
        with pytest.raises(Exceptional):
            im.consistency_map(m)

    def test_round_trip_with_adapted_form(self):
        t = 1.1
        Psi = np.array([[np.cos(t), -np.sin(t)], [np.sin(t), np.cos(t)]])
        _, S = forms.form_for_symplectic(Psi)
        assert np.max(np.abs(im.consistency_map(im.from_S(S)) - Psi)) <= 1e-10


class TestProjectionCommutes:
    def test_zero_vector(self):
        lhs, rhs = im.projection_commutes(1, np.zeros(4))
        assert np.array_equal(lhs, np.zeros(2))
        assert np.array_equal(rhs, np.zeros(2))

    def test_basis_vector(self):
        lhs, rhs = im.projection_commutes(1, [1.0, 0.0, 0.0, 0.0])
        assert np.array_equal(lhs, rhs)

    def test_random_vectors_exact(self):
        # seed 55; 100 random vectors, both sides agree to the bit
        rng = np.random.default_rng(55)
        for _ in range(100):
            n = int(rng.integers(1, 4))
            v = rng.uniform(-3.0, 3.0, 4 * n)
            lhs, rhs = im.projection_commutes(n, v)
            assert np.max(np.abs(lhs - rhs)) <= 1e-14

    def test_length_checked(self):
        with pytest.raises(DimensionMismatch):
            im.projection_commutes(1, np.zeros(6))
