"""Symplectic core: forms, membership, spectra, decompositions, samplers."""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from cvchan import symplectic as sp


J1 = np.array([[0.0, 1.0], [-1.0, 0.0]])


class TestSymplecticForm:
    def test_single_mode(self):
        assert_allclose(sp.symplectic_form(1), J1)

    def test_two_modes_block_structure(self):
        j2 = sp.symplectic_form(2)
        assert_allclose(j2[:2, :2], J1)
        assert_allclose(j2[2:, 2:], J1)
        assert_allclose(j2[:2, 2:], 0.0)
        assert_allclose(j2 @ j2, -np.eye(4))

    @pytest.mark.parametrize("n", [1, 2, 5])
    def test_antisymmetry_and_orthogonality(self, n):
        j = sp.symplectic_form(n)
        assert_allclose(j.T, -j)
        assert_allclose(j @ j.T, np.eye(2 * n))

    def test_rejects_zero_modes(self):
        with pytest.raises(sp.DimensionError):
            sp.symplectic_form(0)


class TestIsSymplectic:
    def test_identity(self):
        ok, res = sp.is_symplectic(np.eye(6))
        assert ok and res == 0.0

    def test_form_itself_is_symplectic(self):
        # J J J^T = J by direct matrix arithmetic.
        j = sp.symplectic_form(2)
        ok, res = sp.is_symplectic(j)
        assert ok
        assert res <= 1e-15

    def test_scaling_residual(self):
        # (2I) J (2I)^T = 4J, so the residual is ||3J||_max = 3.
        ok, res = sp.is_symplectic(2.0 * np.eye(2))
        assert not ok
        assert res == pytest.approx(3.0, abs=1e-14)

    def test_odd_dimension_rejected(self):
        with pytest.raises(sp.DimensionError):
            sp.is_symplectic(np.eye(3))


class TestSymplecticEigenvalues:
    def test_identity(self):
        assert_allclose(sp.symplectic_eigenvalues(np.eye(8)), np.ones(4))

    def test_single_mode_diag(self):
        # Eigenvalues of J diag(4, 1) are +/- 2i.
        assert_allclose(sp.symplectic_eigenvalues(np.diag([4.0, 1.0])), [2.0])

    def test_paired_diagonal_read_off(self):
        a = np.diag([1.5, 1.5, 3.0, 3.0])
        assert_allclose(sp.symplectic_eigenvalues(a), [1.5, 3.0])

    def test_agrees_with_ja_eigenvalue_oracle(self):
        for seed in range(30):
            n = 1 + seed % 4
            a = sp.random_spd(n, (0.4, 5.0), seed=seed)
            assert_allclose(
                sp.symplectic_eigenvalues(a),
                sp.symplectic_eigenvalues_ja(a),
                atol=1e-9,
            )

    def test_congruence_invariance(self):
        for seed in range(20):
            n = 1 + seed % 3
            a = sp.random_spd(n, (0.5, 4.0), seed=seed)
            s = sp.random_symplectic(n, seed=seed + 100)
            assert_allclose(
                sp.symplectic_eigenvalues(s @ a @ s.T),
                sp.symplectic_eigenvalues(a),
                atol=1e-8,
            )

    def test_rejects_nonsymmetric(self):
        with pytest.raises(sp.NotPositiveDefiniteError):
            sp.symplectic_eigenvalues(np.array([[1.0, 1.0], [0.0, 1.0]]))

    def test_rejects_indefinite_with_diagnostic(self):
        with pytest.raises(sp.NotPositiveDefiniteError, match="-1"):
            sp.symplectic_eigenvalues(np.diag([1.0, -1.0]))


class TestWilliamson:
    def test_paired_diagonal_input(self):
        a = np.diag([1.2, 1.2, 2.5, 2.5])
        dec = sp.williamson(a)
        assert_allclose(dec.spectrum, [1.2, 2.5], atol=1e-12)
        assert_allclose(dec.s @ a @ dec.s.T, dec.diagonal, atol=sp.TOL_DECOMP)

    def test_single_mode_example(self):
        a = np.diag([1.0, 4.0])
        dec = sp.williamson(a)
        assert_allclose(dec.spectrum, [2.0], atol=1e-12)
        assert_allclose(dec.s @ a @ dec.s.T, np.diag([2.0, 2.0]), atol=1e-10)
        assert sp.is_symplectic(dec.s).ok

    def test_random_covariance_postconditions(self):
        a = sp.random_covariance(3, (1.0, 3.0), seed=42)
        dec = sp.williamson(a)
        assert sp.is_symplectic(dec.s).ok
        assert np.max(np.abs(dec.s @ a @ dec.s.T - dec.diagonal)) <= sp.TOL_DECOMP

    def test_degenerate_spectrum(self):
        a = np.diag([3.0, 3.0, 3.0, 3.0])
        dec = sp.williamson(a)
        assert_allclose(dec.spectrum, [3.0, 3.0], atol=1e-12)
        assert sp.is_symplectic(dec.s).ok

    def test_spectrum_matches_independent_path(self):
        # The skew-canonical route must agree with the SVD route.
        for seed in range(25):
            n = 1 + seed % 4
            a = sp.random_spd(n, (0.5, 4.0), seed=seed)
            assert_allclose(
                sp.williamson(a).spectrum,
                sp.symplectic_eigenvalues(a),
                atol=1e-8,
            )

    @pytest.mark.parametrize("case", range(4))
    def test_degenerate_clusters_scrambled(self, case):
        # Repeated symplectic eigenvalues hidden by a random congruence.
        for seed in range(20):
            rng = sp.rng_stream(seed, 999 + case)
            n = int(rng.integers(2, 5))
            if case == 0:
                nu = np.full(n, 2.5)
            elif case == 1:
                nu = np.repeat([1.5, 3.0], [n - n // 2, n // 2])
            elif case == 2:
                nu = np.ones(n)
            else:
                nu = np.full(n, 2.0)
                nu[0] = 2.0 + 1e-13
            s = sp.sample_symplectics(rng, n, 1, (1.0, 4.0))[0]
            si = sp.symplectic_inverse(s)
            a = si @ np.diag(np.repeat(nu, 2)) @ si.T
            dec = sp.williamson(a)
            assert np.max(np.abs(dec.s @ a @ dec.s.T - dec.diagonal)) <= 1e-9
            assert sp.symplectic_residual(dec.s) <= 1e-9


class TestEulerDecomposition:
    def test_orthosymplectic_input_gives_unit_squeezing(self):
        t = sp.unitary_to_orthosymplectic(sp.random_unitary(3, seed=5))
        dec = sp.euler_decompose(t)
        assert_allclose(dec.z, np.ones(3), atol=1e-12)

    def test_single_mode_squeeze(self):
        dec = sp.euler_decompose(np.diag([3.0, 1.0 / 3.0]))
        assert_allclose(dec.z, [3.0], atol=1e-12)
        recomposed = dec.t1 @ dec.z_matrix @ dec.t2
        assert_allclose(recomposed, np.diag([3.0, 1.0 / 3.0]), atol=1e-12)

    def test_random_recomposition(self):
        s = sp.random_symplectic(2, (1.0, 4.0), seed=7)
        dec = sp.euler_decompose(s)
        assert np.max(np.abs(dec.t1 @ dec.z_matrix @ dec.t2 - s)) <= sp.TOL_DECOMP
        for t in (dec.t1, dec.t2):
            assert sp.symplectic_residual(t) <= sp.TOL_SYM
            assert sp.orthogonality_residual(t) <= sp.TOL_SYM
        assert np.all(dec.z >= 1.0 - 1e-12)
        assert np.all(np.diff(dec.z) <= 1e-12)  # descending

    def test_rejects_nonsymplectic(self):
        with pytest.raises(sp.NotSymplecticError):
            sp.euler_decompose(2.0 * np.eye(2))

    @pytest.mark.parametrize("case", range(4))
    def test_repeated_and_unit_squeezings(self, case):
        # Degenerate z clusters, exact and near-unit squeezings.
        for seed in range(20):
            rng = sp.rng_stream(seed, 1001 + case)
            n = int(rng.integers(2, 5))
            if case == 0:
                z = np.full(n, 2.0)
            elif case == 1:
                z = np.ones(n)
            elif case == 2:
                z = np.ones(n)
                z[0] = 3.0
            else:
                z = np.full(n, 1.0 + 1e-14)
                z[-1] = 2.0
            s = sp.symplectic_from_factors(sp._haar_unitary(rng, n), z, sp._haar_unitary(rng, n))
            dec = sp.euler_decompose(s)
            assert np.max(np.abs(dec.t1 @ dec.z_matrix @ dec.t2 - s)) <= 1e-10
            for t in (dec.t1, dec.t2):
                assert max(sp.symplectic_residual(t), sp.orthogonality_residual(t)) <= 1e-10


class TestUnitaryIsomorphism:
    def test_identity_maps_to_identity(self):
        assert_allclose(sp.unitary_to_orthosymplectic(np.eye(3)), np.eye(6))

    def test_phase_i_maps_to_form(self):
        t = sp.unitary_to_orthosymplectic(np.array([[1j]]))
        assert_allclose(t, np.array([[0.0, 1.0], [-1.0, 0.0]]))

    def test_image_is_in_k_n(self):
        t = sp.unitary_to_orthosymplectic(sp.random_unitary(4, seed=3))
        assert sp.symplectic_residual(t) <= sp.TOL_SYM
        assert sp.orthogonality_residual(t) <= sp.TOL_SYM

    def test_homomorphism(self):
        u = sp.random_unitary(3, seed=11)
        v = sp.random_unitary(3, seed=12)
        lhs = sp.unitary_to_orthosymplectic(u @ v)
        rhs = sp.unitary_to_orthosymplectic(u) @ sp.unitary_to_orthosymplectic(v)
        assert np.max(np.abs(lhs - rhs)) <= 1e-12

    def test_round_trip(self):
        for seed in (13, 14, 15):
            u = sp.random_unitary(3, seed=seed)
            back = sp.orthosymplectic_to_unitary(sp.unitary_to_orthosymplectic(u))
            assert np.max(np.abs(back - u)) <= 1e-12

    def test_round_trip_of_phase(self):
        u = np.array([[1j]])
        back = sp.orthosymplectic_to_unitary(sp.unitary_to_orthosymplectic(u))
        assert_allclose(back, u)

    def test_identity_inverse(self):
        assert_allclose(sp.orthosymplectic_to_unitary(np.eye(4)), np.eye(2))

    def test_rejects_non_unitary(self):
        with pytest.raises(sp.NotSymplecticError):
            sp.unitary_to_orthosymplectic(2.0 * np.eye(2, dtype=complex))

    def test_rejects_outside_k_n(self):
        with pytest.raises(sp.NotSymplecticError):
            sp.orthosymplectic_to_unitary(np.diag([2.0, 0.5]))


class TestRandomGenerators:
    def test_random_symplectic_passes_membership(self):
        s = sp.random_symplectic(2, (1.0, 4.0), seed=1)
        ok, res = sp.is_symplectic(s)
        assert ok, res

    def test_unit_squeeze_range_gives_orthogonal(self):
        s = sp.random_symplectic(3, (1.0, 1.0), seed=2)
        assert sp.orthogonality_residual(s) <= sp.TOL_SYM

    def test_determinism(self):
        a = sp.random_symplectic(2, (1.0, 4.0), seed=9)
        b = sp.random_symplectic(2, (1.0, 4.0), seed=9)
        assert np.array_equal(a, b)

    def test_rejects_bad_squeeze_range(self):
        with pytest.raises(ValueError):
            sp.random_symplectic(1, (0.5, 2.0), seed=0)

    def test_random_covariance_pure_has_unit_determinant(self):
        gamma = sp.random_covariance(2, (1.0, 1.0), seed=3)
        assert abs(np.linalg.det(gamma) - 1.0) <= 1e-8

    def test_random_covariance_spectrum_in_range(self):
        gamma = sp.random_covariance(2, (1.0, 3.0), seed=5)
        nu = sp.symplectic_eigenvalues(gamma)
        assert np.all(nu >= 1.0 - 1e-8)
        assert np.all(nu <= 3.0 + 1e-8)

    def test_random_covariance_rejects_unphysical_range(self):
        with pytest.raises(ValueError):
            sp.random_covariance(1, (0.5, 2.0), seed=0)

    def test_random_spd_allows_small_spectra(self):
        a = sp.random_spd(2, (0.2, 0.9), seed=4)
        nu = sp.symplectic_eigenvalues(a)
        assert np.all(nu < 1.0)

    def test_spectrum_invariant_under_recongruence(self):
        gamma = sp.random_covariance(2, (1.0, 3.0), seed=6)
        s = sp.random_symplectic(2, (1.0, 3.0), seed=7)
        assert_allclose(
            sp.symplectic_eigenvalues(s @ gamma @ s.T),
            sp.symplectic_eigenvalues(gamma),
            atol=1e-8,
        )


class TestTruncateRows:
    def test_full_truncation_is_identity_operation(self):
        s = sp.random_symplectic(2, seed=8)
        assert_allclose(sp.truncate_rows(s, 2), s)

    def test_identity_rows(self):
        sk = sp.truncate_rows(np.eye(6), 2)
        assert_allclose(sk, np.eye(6)[:4])
        assert sp.truncation_residual(sk, 3) == 0.0

    def test_random_truncation_residual(self):
        s = sp.random_symplectic(3, seed=3)
        sk = sp.truncate_rows(s, 2)
        assert sp.truncation_residual(sk, 3) <= sp.TOL_SYM

    def test_rejects_out_of_range(self):
        s = sp.random_symplectic(2, seed=1)
        with pytest.raises(sp.DimensionError):
            sp.truncate_rows(s, 3)
        with pytest.raises(sp.DimensionError):
            sp.truncate_rows(s, 0)


class TestSerialization:
    def test_row_major_round_trip(self):
        m = sp.random_symplectic(2, seed=21)
        flat = sp.matrix_to_rowmajor(m)
        assert_allclose(sp.matrix_from_rowmajor(flat, 4, 4), m)

    def test_row_major_order(self):
        flat = sp.matrix_to_rowmajor(np.array([[1.0, 2.0], [3.0, 4.0]]))
        assert flat == [1.0, 2.0, 3.0, 4.0]

    def test_length_mismatch_rejected(self):
        with pytest.raises(sp.DimensionError):
            sp.matrix_from_rowmajor([1.0, 2.0, 3.0], 2, 2)
