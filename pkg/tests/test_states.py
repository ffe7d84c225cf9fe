import numpy as np
import pytest
from hypothesis import given, strategies as st

from linpovm.modes import block_diag_unitary, random_unitary, swap_unitary
from linpovm.states import (BOSON, FERMION, BilinearForm, TwoQuditState, apply_local, bell_basis,
                            bell_state, embed_bilinear, inner_product, random_state, reduced_density,
                            transform_bilinear)

S2 = 1 / np.sqrt(2)
STATS = [BOSON, FERMION]


def kron_vector(C):
    """|C> as a d^2 vector: coefficient of |i>|j> at index i*d + j."""
    d = C.shape[0]
    v = np.zeros(d * d, dtype=complex)
    for i in range(d):
        for j in range(d):
            v[i * d + j] = C[i, j]
    return v


def random_matrix(rng, d):
    return rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))


class TestEmbed:
    def test_single_mode_boson(self):
        N = embed_bilinear(TwoQuditState([[1]], BOSON), 2).N
        np.testing.assert_array_equal(N, [[0, 0.5], [0.5, 0]])

    def test_single_mode_fermion(self):
        N = embed_bilinear(TwoQuditState([[1]], FERMION), 2).N
        np.testing.assert_array_equal(N, [[0, 0.5], [-0.5, 0]])

    def test_padding(self):
        N = embed_bilinear(TwoQuditState(np.eye(2) * S2), 5).N
        np.testing.assert_array_equal(N, N.T)
        assert not N[4].any() and not N[:, 4].any()

    def test_too_few_modes(self):
        with pytest.raises(ValueError):
            embed_bilinear(TwoQuditState(np.eye(2)), 3)

    def test_form_rejects_wrong_symmetry(self):
        with pytest.raises(ValueError, match="antisymmetric"):
            BilinearForm(np.ones((2, 2)), FERMION)


class TestTransform:
    def test_identity(self, rng):
        f = embed_bilinear(random_state(2, rng), 4)
        np.testing.assert_array_equal(transform_bilinear(f, np.eye(4)).N, f.N)

    @pytest.mark.parametrize("stats", STATS)
    def test_symmetry_preserved(self, rng, stats):
        for _ in range(100):
            n = int(rng.integers(2, 8))
            X = random_matrix(rng, n)
            N = X + stats.sign * X.T
            M = transform_bilinear(BilinearForm(N, stats), random_unitary(n, rng)).N
            assert np.max(np.abs(M - stats.sign * M.T)) <= 1e-12 * max(1, np.max(np.abs(M)))

    @pytest.mark.parametrize("stats", STATS)
    def test_separable(self, rng, stats):
        for _ in range(20):
            d = int(rng.integers(1, 4))
            extra = int(rng.integers(0, 3))
            U1, U2 = random_unitary(d, rng), random_unitary(d, rng)
            U3 = random_unitary(extra, rng) if extra else np.zeros((0, 0))
            s = random_state(d, rng, stats)
            lhs = transform_bilinear(embed_bilinear(s, 2 * d + extra), block_diag_unitary(U1, U2, U3)).N
            rhs = embed_bilinear(TwoQuditState(U1.matrix.T @ s.C @ U2.matrix, stats), 2 * d + extra).N
            np.testing.assert_allclose(lhs, rhs, atol=1e-12)

    @pytest.mark.parametrize("stats", STATS)
    def test_swap(self, rng, stats):
        for d in (1, 2, 3):
            s = random_state(d, rng, stats)
            lhs = transform_bilinear(embed_bilinear(s, 2 * d), swap_unitary(2 * d, d)).N
            rhs = embed_bilinear(TwoQuditState(stats.sign * s.C.T, stats), 2 * d).N
            np.testing.assert_allclose(lhs, rhs, atol=1e-12)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            transform_bilinear(embed_bilinear(TwoQuditState([[1]]), 2), np.eye(3))


class TestMatrixStateRelations:
    def test_apply_identity(self, rng):
        s = random_state(3, rng)
        np.testing.assert_array_equal(apply_local(np.eye(3), np.eye(3), s).C, s.C)

    def test_flip_first_index(self):
        out = apply_local([[0, 1], [1, 0]], np.eye(2), bell_state(2, 0, 0))
        np.testing.assert_allclose(out.C, S2 * np.array([[0, 1], [1, 0]]), atol=1e-15)

    @pytest.mark.parametrize("d", [2, 3, 4])
    def test_local_action_matches_kron(self, rng, d):
        for _ in range(100):
            A, B, C = random_matrix(rng, d), random_matrix(rng, d), random_matrix(rng, d)
            lhs = kron_vector(apply_local(A, B, TwoQuditState(C)).C)
            np.testing.assert_allclose(lhs, np.kron(A, B) @ kron_vector(C), atol=1e-11)

    @pytest.mark.parametrize("d", [2, 3, 4])
    def test_inner_product_matches_vectors(self, rng, d):
        for _ in range(100):
            X, Y = random_matrix(rng, d), random_matrix(rng, d)
            ip = inner_product(TwoQuditState(X), TwoQuditState(Y))
            assert abs(ip - np.vdot(kron_vector(X), kron_vector(Y))) < 1e-11

    def test_inner_product_basics(self, rng):
        s = random_state(3, rng)
        assert abs(inner_product(s, s) - 1) < 1e-14
        e11, e22 = np.diag([1, 0]), np.diag([0, 1])
        assert inner_product(TwoQuditState(e11), TwoQuditState(e22)) == 0
        with pytest.raises(ValueError):
            inner_product(TwoQuditState(e11), TwoQuditState(np.eye(3)))

    @pytest.mark.parametrize("d", [2, 3, 4])
    def test_reductions_match_partial_trace(self, rng, d):
        for _ in range(100):
            s = random_state(d, rng)
            T = np.outer(kron_vector(s.C), kron_vector(s.C).conj()).reshape(d, d, d, d)
            rho1 = np.einsum("ijkj->ik", T)
            rho2 = np.einsum("ijil->jl", T)
            np.testing.assert_allclose(reduced_density(s, 1), rho1, atol=1e-12)
            np.testing.assert_allclose(reduced_density(s, 2), rho2, atol=1e-12)

    def test_reductions_of_bell_and_product(self):
        for sub in (1, 2):
            np.testing.assert_allclose(reduced_density(bell_state(2, 0, 0), sub), np.eye(2) / 2, atol=1e-15)
            np.testing.assert_array_equal(reduced_density(TwoQuditState(np.diag([1, 0])), sub), np.diag([1, 0]))
        with pytest.raises(ValueError):
            reduced_density(bell_state(2, 0, 0), 3)

    @given(st.integers(2, 5), st.integers(0, 2**32 - 1))
    def test_reductions_are_states_with_shared_spectrum(self, d, seed):
        s = random_state(d, seed)
        r1, r2 = reduced_density(s, 1), reduced_density(s, 2)
        for r in (r1, r2):
            np.testing.assert_allclose(r, r.conj().T, atol=1e-14)
            assert np.linalg.eigvalsh(r).min() >= -1e-12
            assert abs(np.trace(r) - 1) < 1e-12
        np.testing.assert_allclose(np.linalg.eigvalsh(r1), np.linalg.eigvalsh(r2), atol=1e-10)
        sv = np.linalg.svd(s.C, compute_uv=False)
        np.testing.assert_allclose(np.sort(np.linalg.eigvalsh(r1)), np.sort(sv**2), atol=1e-10)


class TestBellStates:
    def test_phi_plus(self):
        np.testing.assert_allclose(bell_state(2, 0, 0).C, np.eye(2) * S2, atol=1e-15)

    def test_singlet(self):
        np.testing.assert_allclose(bell_state(2, 1, 1).C, S2 * np.array([[0, 1], [-1, 0]]), atol=1e-15)

    @pytest.mark.parametrize("d", [2, 3, 4])
    def test_orthonormal(self, d):
        states = list(bell_basis(d).values())
        G = np.array([[inner_product(x, y) for y in states] for x in states])
        np.testing.assert_allclose(G, np.eye(d * d), atol=1e-14)

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            bell_state(2, 2, 0)

    def test_normalization_check(self):
        with pytest.raises(ValueError, match="not normalized"):
            TwoQuditState(np.sqrt(0.8) * np.diag([1, 0])).check_normalized()
