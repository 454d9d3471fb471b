"""Tests for shellspec._core.numerics module."""

import numpy as np
import pytest

from shellspec._core.errors import (
    DimensionMismatch,
    NotPositiveDefinite,
    RankDeficient,
    SingularSpectralParameter,
)
from shellspec._core.numerics import (
    affine_dimension,
    complex_gaussian,
    hermitian_resolvent,
    kernel_basis,
    numerical_rank,
    random_hermitian,
    right_inverse_base,
    right_inverse_product_check,
    sample_right_inverse,
    sqrt_inv_pd,
)


class TestResolvent:
    """Test hermitian_resolvent."""

    def test_matches_inverse_off_axis(self, rng):
        """Test (H - z)^{-1} agrees with a dense inverse at complex z."""
        # Arrange
        H = random_hermitian(rng, 5)
        z = 0.3 + 0.7j
        # Act
        G = hermitian_resolvent(H, z)
        # Assert
        assert np.allclose(G, np.linalg.inv(H - z * np.eye(5)))

    def test_eigenvalue_raises(self):
        """Test z on an eigenvalue raises without pseudo."""
        # Arrange
        H = np.diag([0.0, 1.0])
        # Act / Assert
        with pytest.raises(SingularSpectralParameter):
            hermitian_resolvent(H, 0.0)

    def test_pseudo_drops_invisible_eigenspace(self):
        """Test the pseudo-resolvent inverts on the complement of the kernel."""
        # Arrange
        H = np.diag([0.0, 2.0])
        channels = np.array([[0.0], [1.0]])
        # Act
        G = hermitian_resolvent(H, 0.0, pseudo=True, channels=channels)
        # Assert
        assert np.allclose(G, np.diag([0.0, 0.5]))

    def test_pseudo_with_visible_kernel_raises(self):
        """Test a channel overlapping the kernel still raises."""
        # Arrange
        H = np.diag([0.0, 2.0])
        channels = np.array([[1.0], [1.0]])
        # Act / Assert
        with pytest.raises(SingularSpectralParameter):
            hermitian_resolvent(H, 0.0, pseudo=True, channels=channels)

    def test_non_square_raises(self):
        """Test a rectangular matrix is rejected."""
        # Act / Assert
        with pytest.raises(DimensionMismatch):
            hermitian_resolvent(np.zeros((2, 3)), 1j)


class TestRightInverses:
    """Test right inverses and kernels."""

    def test_base_is_right_inverse(self, rng):
        """Test beta B0 = 1 for a random 2 x 4 beta."""
        # Arrange
        beta = complex_gaussian(rng, (2, 4))
        # Act
        B0 = right_inverse_base(beta)
        # Assert
        assert np.allclose(beta @ B0, np.eye(2))

    def test_kernel_is_orthonormal_and_annihilated(self, rng):
        """Test the kernel basis spans ker(beta) orthonormally."""
        # Arrange
        beta = complex_gaussian(rng, (2, 5))
        # Act
        K = kernel_basis(beta)
        # Assert
        assert K.shape == (5, 3)
        assert np.allclose(beta @ K, 0)
        assert np.allclose(K.conj().T @ K, np.eye(3))

    def test_rank_deficient_raises(self):
        """Test a rank-one 2 x 3 beta has no right inverse."""
        # Arrange
        beta = np.array([[1.0, 0.0, 0.0], [2.0, 0.0, 0.0]])
        # Act / Assert
        with pytest.raises(RankDeficient):
            right_inverse_base(beta)

    def test_tall_matrix_raises(self):
        """Test q > r is a dimension error."""
        # Act / Assert
        with pytest.raises(DimensionMismatch):
            right_inverse_base(np.ones((3, 2)))

    def test_samples_are_right_inverses(self, rng):
        """Test every sampled member satisfies beta B = 1."""
        # Arrange
        beta = complex_gaussian(rng, (1, 3))
        # Act
        samples = [sample_right_inverse(beta, rng) for _ in range(5)]
        # Assert
        assert all(np.allclose(beta @ B, 1) for B in samples)

    def test_affine_dimension_of_right_inverses(self, rng):
        """Test the right inverses of a q x r matrix form a q (r - q) dimensional set."""
        # Arrange
        beta = complex_gaussian(rng, (2, 4))
        # Act
        dim = affine_dimension([sample_right_inverse(beta, rng) for _ in range(12)])
        # Assert
        assert dim == 4

    def test_product_check(self, rng):
        """Test products of right inverses invert AB and span the full set."""
        # Arrange
        A = complex_gaussian(rng, (1, 2))
        B = complex_gaussian(rng, (2, 3))
        # Act
        check = right_inverse_product_check(A, B, rng)
        # Assert
        assert check.residual < 1e-10
        assert check.dimension_matches


class TestHelpers:
    """Test rank and square-root helpers."""

    def test_numerical_rank(self):
        """Test the rank ignores singular values below the cutoff."""
        # Arrange
        M = np.diag([1.0, 1e-14, 0.5])
        # Act
        rank = numerical_rank(M)
        # Assert
        assert rank == 2

    def test_sqrt_inv_pd(self):
        """Test I^{-1/2} squares to the inverse."""
        # Arrange
        I = np.array([[2.0, 0.5], [0.5, 1.0]])
        # Act
        R = sqrt_inv_pd(I)
        # Assert
        assert np.allclose(R @ R, np.linalg.inv(I))

    def test_sqrt_inv_pd_rejects_indefinite(self):
        """Test a matrix with a negative eigenvalue is rejected."""
        # Act / Assert
        with pytest.raises(NotPositiveDefinite):
            sqrt_inv_pd(np.diag([1.0, -1.0]))
