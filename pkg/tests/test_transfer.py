"""Tests for shellspec._core.transfer module."""

import numpy as np
import pytest

from shellspec._core.boundary import BoundaryData, compose, shell_data
from shellspec._core.errors import (
    DimensionMismatch,
    SingularShell,
    SingularSpectralParameter,
    SpecInvalid,
    ZeroGamma,
)
from shellspec._core.numerics import complex_gaussian
from shellspec._core.transfer import (
    TransferMatrix,
    dirichlet_vectors,
    fhs_member,
    injectivity_check,
    membership_check,
    min_norm_dirichlet,
    product_over_shells,
    propagate_solution,
    random_member,
    sample_member,
    surjectivity_witness,
    symplectic_residual,
    transfer_space,
)


def _hermitian_line_data(rng, q, r):
    # compressed resolvent of a Hermitian matrix at a real point in a spectral gap
    size = q + r + 2
    H = complex_gaussian(rng, (size, size))
    H = 0.5 * (H + H.conj().T)
    w = np.linalg.eigvalsh(H)
    gap = int(np.argmax(np.diff(w)))
    lam = 0.5 * (w[gap] + w[gap + 1])
    C = complex_gaussian(rng, (size, q + r))
    X = np.linalg.solve(H - lam * np.eye(size), C)
    return BoundaryData.from_matrix(C.conj().T @ X, q, complex(lam))


class TestTransferSpace:
    """Test the parametrized transfer set."""

    def test_base_member_satisfies_relations(self, rng):
        """Test the zero-coefficient member lies in the set."""
        # Arrange
        ts = transfer_space(_hermitian_line_data(rng, 1, 3))
        # Act
        residuals = membership_check(sample_member(ts), ts.R)
        # Assert
        assert residuals.is_member()

    def test_random_members_satisfy_relations(self, rng):
        """Test random members stay in the set."""
        # Arrange
        ts = transfer_space(_hermitian_line_data(rng, 2, 3))
        # Act
        worst = max(membership_check(random_member(ts, rng), ts.R).worst for _ in range(5))
        # Assert
        assert worst < 1e-9

    def test_freedom_is_r_minus_q(self, rng):
        """Test the kernel basis has r - q columns."""
        # Act
        ts = transfer_space(_hermitian_line_data(rng, 1, 4))
        # Assert
        assert ts.freedom == 3

    def test_q_above_r_rejected(self, rng):
        """Test a space needs q <= r."""
        # Arrange
        R = _hermitian_line_data(rng, 3, 1)
        # Act / Assert
        with pytest.raises(DimensionMismatch):
            transfer_space(R)

    def test_members_are_injective(self, rng):
        """Test sampled members have trivial kernel."""
        # Arrange
        ts = transfer_space(_hermitian_line_data(rng, 1, 2))
        # Act
        smallest = injectivity_check(ts, samples=6, seed=3)
        # Assert
        assert smallest > 1e-10

    def test_dirichlet_vectors_start_with_right_inverse(self, rng):
        """Test the top block of T (1; 0) is a right inverse of beta."""
        # Arrange
        ts = transfer_space(_hermitian_line_data(rng, 1, 3))
        # Act
        vectors = dirichlet_vectors(ts, rng, 4)
        # Assert
        assert all(np.allclose(ts.R.beta @ u[: ts.r], np.eye(1)) for u in vectors)


class TestSymplectic:
    """Test the symplectic relation between members."""

    def test_hermitian_data_at_real_lambda(self, rng):
        """Test T1^* J T2 = J for two members of Hermitian data."""
        # Arrange
        ts = transfer_space(_hermitian_line_data(rng, 1, 3))
        T1, T2 = random_member(ts, rng), random_member(ts, rng)
        # Act
        residual = symplectic_residual(T1, T2)
        # Assert
        assert residual < 1e-8

    def test_shape_mismatch(self, rng):
        """Test members of different sizes cannot be paired."""
        # Arrange
        T1 = TransferMatrix(T=np.eye(4), q=2, r=2)
        T2 = TransferMatrix(T=np.eye(2), q=1, r=1)
        # Act / Assert
        with pytest.raises(DimensionMismatch):
            symplectic_residual(T1, T2)


class TestProducts:
    """Test shell products, solutions and the surjectivity witness."""

    def test_base_and_fhs_products_agree_on_chain(self, free_chain):
        """Test both canonical choices give the same product on the free chain."""
        # Arrange
        so, cd = free_chain
        lam = 0.37
        # Act
        base = product_over_shells(so, cd, lam, 5, "base")
        fhs = product_over_shells(so, cd, lam, 5, "fhs")
        # Assert
        assert np.allclose(base.T, fhs.T)

    def test_fhs_needs_identity_forward_channel(self, random_shells):
        """Test the block-Jacobi choice is refused without Phi = 1."""
        # Arrange
        so, cd = random_shells
        # Act / Assert
        with pytest.raises(SpecInvalid):
            product_over_shells(so, cd, 0.3, so.depth, "fhs")

    def test_invalid_choice(self, free_chain):
        """Test an unknown choice name is rejected."""
        # Arrange
        so, cd = free_chain
        # Act / Assert
        with pytest.raises(ValueError):
            product_over_shells(so, cd, 0.3, 2, "nope")

    def test_propagated_solution_solves_equation(self, free_chain):
        """Test the rebuilt Psi solves the eigenvalue equation on every shell."""
        # Arrange
        so, cd = free_chain
        # Act
        trace = propagate_solution(so, cd, 0.41 + 0.2j, None, [1.0], [0.0], 6)
        # Assert
        assert trace.worst_residual < 1e-9

    def test_propagation_on_shell_eigenvalue_raises(self, free_chain):
        """Test a real z on an eigenvalue of V_n raises the spectral error, not LinAlgError."""
        # Arrange
        so, cd = free_chain
        # Act / Assert
        with pytest.raises(SingularSpectralParameter) as info:
            propagate_solution(so, cd, 0.0, None, [1.0], [0.0], 3)
        assert isinstance(info.value, SingularShell)

    def test_min_norm_dirichlet_norm(self, free_chain):
        """Test the returned vector has the returned squared norm."""
        # Arrange
        so, cd = free_chain
        R = compose(shell_data(so, cd, 0, 0.3), shell_data(so, cd, 1, 0.3))
        # Act
        u, norm = min_norm_dirichlet(R)
        # Assert
        assert np.isclose(np.linalg.norm(u) ** 2, norm)

    def test_min_norm_dirichlet_zero_gamma(self):
        """Test vanishing gamma raises ZeroGamma."""
        # Arrange
        R = BoundaryData(
            alpha=np.ones((1, 1)), beta=np.zeros((1, 1)), gamma=np.zeros((1, 1)), delta=np.ones((1, 1))
        )
        # Act / Assert
        with pytest.raises(ZeroGamma):
            min_norm_dirichlet(R)

    def test_surjectivity_witness_reproduces_vector(self, rng):
        """Test the witness product gives back the Dirichlet vector of Q composed with R."""
        # Arrange
        Q = _hermitian_line_data(rng, 1, 2)
        R = BoundaryData.from_matrix(_hermitian_line_data(rng, 2, 3).matrix(), 2, Q.z)
        QR = compose(Q, R)
        B_hat = transfer_space(QR).B0
        # Act
        B_Q, T_R, u = surjectivity_witness(Q, R, B_hat)
        # Assert
        assert np.allclose(Q.beta @ B_Q, np.eye(1))
        assert np.allclose(u[: R.r], B_hat)
        assert np.allclose(u[R.r :], QR.delta @ B_hat)
