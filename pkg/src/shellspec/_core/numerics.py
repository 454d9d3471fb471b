#!/usr/bin/env python3
# Timestamp: 2026-10-19
"""Dense-matrix primitives shared by every other module.

Rank and invertibility are decided by thresholds from a
:class:`~shellspec._core.config.TolerancePolicy`; nothing here keeps state.
"""

import logging
from dataclasses import dataclass as _dataclass
from typing import Optional as _Optional

import numpy as np
import scipy.linalg as _la

from .config import Config, TolerancePolicy
from .errors import (
    DimensionMismatch,
    NotPositiveDefinite,
    RankDeficient,
    SingularSpectralParameter,
)

__all__ = [
    "TolerancePolicy",
    "hermitian_resolvent",
    "right_inverse_base",
    "kernel_basis",
    "sqrt_inv_pd",
    "numerical_rank",
    "sample_right_inverse",
    "affine_dimension",
    "ProductCheck",
    "right_inverse_product_check",
    "complex_gaussian",
    "random_hermitian",
    "im_part",
]

logger = logging.getLogger(__name__)

# Channel overlap with a dropped eigenspace counted as zero.
ORTHOGONALITY_TOL = 1e-8


def _policy(tol: _Optional[TolerancePolicy]) -> TolerancePolicy:
    return tol if tol is not None else Config.get_tolerance()


def _as_matrix(M) -> np.ndarray:
    return np.atleast_2d(np.asarray(M, dtype=complex))


def im_part(M: np.ndarray) -> np.ndarray:
    """Hermitian imaginary part (M - M*)/(2i)."""
    M = np.asarray(M)
    return (M - M.conj().T) / 2j


def numerical_rank(M, tol: _Optional[TolerancePolicy] = None) -> int:
    """Count singular values above rank_rel_tol times the largest."""
    M = _as_matrix(M)
    if M.size == 0:
        return 0
    s = _la.svd(M, compute_uv=False)
    if s[0] == 0:
        return 0
    return int(np.sum(s > _policy(tol).rank_rel_tol * s[0]))


def hermitian_resolvent(
    H,
    z: complex,
    tol: _Optional[TolerancePolicy] = None,
    pseudo: bool = False,
    channels: _Optional[np.ndarray] = None,
    rhs: _Optional[np.ndarray] = None,
) -> np.ndarray:
    """Return (H - z)^{-1}, or (H - z)^{-1} rhs, for Hermitian H.

    Args:
        H: Hermitian square matrix
        z: Spectral parameter
        tol: Tolerance policy (default: Config.get_tolerance())
        pseudo: Drop eigenspaces within the exclusion radius of z and
            invert on the complement instead of raising
        channels: Columns that must be orthogonal to any dropped eigenspace
        rhs: Right-hand side; solve against it instead of the identity

    Raises:
        SingularSpectralParameter: z is within the exclusion radius of an
            eigenvalue and either pseudo is False or a channel column
            overlaps the dropped eigenspace.
    """
    H = _as_matrix(H)
    size = H.shape[0]
    if H.shape != (size, size):
        raise DimensionMismatch(f"Resolvent needs a square matrix, got {H.shape}")
    if size == 0:
        return np.zeros((0, 0), dtype=complex)

    policy = _policy(tol)
    z = complex(z)
    identity = np.eye(size, dtype=complex)
    target = identity if rhs is None else _as_matrix(rhs)

    # Frobenius bounds the spectral norm, so no eigenvalue can be near z here.
    if abs(z.imag) > policy.eig_exclusion_tol * (1.0 + np.linalg.norm(H)):
        return _la.solve(H - z * identity, target)

    w, U = _la.eigh(H)
    radius = policy.eig_exclusion_tol * (1.0 + float(np.max(np.abs(w))))
    near = np.abs(w - z) <= radius
    if not near.any():
        return (U / (w - z)) @ (U.conj().T @ target)

    if not pseudo:
        raise SingularSpectralParameter(
            f"z={z} is within {radius:.3g} of eigenvalue(s) {w[near].tolist()}"
        )
    if channels is not None:
        channels = _as_matrix(channels)
        overlap = np.linalg.norm(U[:, near].conj().T @ channels)
        if overlap > ORTHOGONALITY_TOL * max(1.0, np.linalg.norm(channels)):
            raise SingularSpectralParameter(
                f"Channels overlap the kernel of H - z at z={z} (overlap {overlap:.3g})"
            )
    logger.debug(f"Pseudo-resolvent at z={z}: dropped {int(near.sum())} eigenvalue(s)")
    keep = ~near
    Uk = U[:, keep]
    return (Uk / (w[keep] - z)) @ (Uk.conj().T @ target)


def right_inverse_base(beta, tol: _Optional[TolerancePolicy] = None) -> np.ndarray:
    """Minimum-norm right inverse beta*(beta beta*)^{-1} of a q x r matrix."""
    beta = _as_matrix(beta)
    q, r = beta.shape
    if q > r:
        raise DimensionMismatch(f"Right inverse needs q <= r, got {q} x {r}")
    if q == 0:
        return np.zeros((r, 0), dtype=complex)
    U, s, Vh = _la.svd(beta, full_matrices=False)
    if s[0] == 0 or np.sum(s > _policy(tol).rank_rel_tol * s[0]) < q:
        raise RankDeficient(f"beta ({q} x {r}) has numerical rank below {q}")
    return Vh.conj().T @ (U.conj().T / s[:, None])


def kernel_basis(beta, tol: _Optional[TolerancePolicy] = None) -> np.ndarray:
    """Orthonormal basis of ker(beta) as an r x (r - q) matrix."""
    beta = _as_matrix(beta)
    q, r = beta.shape
    if q > r:
        raise DimensionMismatch(f"Kernel basis needs q <= r, got {q} x {r}")
    if q == 0:
        return np.eye(r, dtype=complex)
    U, s, Vh = _la.svd(beta, full_matrices=True)
    if s[0] == 0 or np.sum(s > _policy(tol).rank_rel_tol * s[0]) < q:
        raise RankDeficient(f"beta ({q} x {r}) has numerical rank below {q}")
    return Vh[q:].conj().T


def sqrt_inv_pd(I) -> np.ndarray:
    """Return I^{-1/2} for Hermitian positive definite I."""
    I = _as_matrix(I)
    w, V = _la.eigh(I)
    if w.size and w.min() <= 0:
        raise NotPositiveDefinite(f"Smallest eigenvalue {w.min():.3g} is not positive")
    R = (V * w ** -0.5) @ V.conj().T
    return 0.5 * (R + R.conj().T)


def complex_gaussian(rng: np.random.Generator, shape, scale: float = 1.0) -> np.ndarray:
    """Circular complex Gaussian entries with E|x|^2 = scale^2."""
    return scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


def random_hermitian(rng: np.random.Generator, size: int, scale: float = 1.0) -> np.ndarray:
    X = complex_gaussian(rng, (size, size), scale)
    return 0.5 * (X + X.conj().T)


def sample_right_inverse(
    A,
    rng: np.random.Generator,
    scale: float = 1.0,
    tol: _Optional[TolerancePolicy] = None,
) -> np.ndarray:
    """Random member of B0 + K C, the affine set of right inverses of A."""
    A = _as_matrix(A)
    B0 = right_inverse_base(A, tol)
    K = kernel_basis(A, tol)
    C = complex_gaussian(rng, (K.shape[1], A.shape[0]), scale)
    return B0 + K @ C


def affine_dimension(samples, rel_tol: float = 1e-9) -> int:
    """Complex dimension of the affine hull of equally shaped matrices."""
    samples = [np.asarray(s, dtype=complex) for s in samples]
    if len(samples) < 2:
        return 0
    diffs = np.array([(s - samples[0]).ravel() for s in samples[1:]])
    sv = _la.svd(diffs, compute_uv=False)
    if sv.size == 0 or sv[0] == 0:
        return 0
    return int(np.sum(sv > rel_tol * sv[0]))


@_dataclass(frozen=True)
class ProductCheck:
    residual: float
    dimension: int
    expected: int

    @property
    def dimension_matches(self) -> bool:
        return self.dimension == self.expected


def right_inverse_product_check(
    A,
    B,
    rng: np.random.Generator,
    samples: int = 0,
    tol: _Optional[TolerancePolicy] = None,
) -> ProductCheck:
    """Products of right inverses of B and A against the right inverses of AB.

    For l x m A and m x n B (l <= m <= n, both full rank) every product
    B^ A^ is a right inverse of AB, and the products sweep out an affine
    set of the full dimension l (n - l).

    Args:
        A: l x m full-rank matrix
        B: m x n full-rank matrix
        rng: Random generator for the kernel coefficients
        samples: Number of sampled products (default: 2 l (n - l) + 2)
        tol: Tolerance policy (default: Config.get_tolerance())
    """
    A, B = _as_matrix(A), _as_matrix(B)
    l, m = A.shape
    if B.shape[0] != m:
        raise DimensionMismatch(f"Cannot multiply {A.shape} by {B.shape}")
    n = B.shape[1]
    expected = l * (n - l)
    count = samples or 2 * expected + 2
    AB = A @ B
    eye = np.eye(l)
    worst = 0.0
    products = []
    for _ in range(count):
        P = sample_right_inverse(B, rng, tol=tol) @ sample_right_inverse(A, rng, tol=tol)
        worst = max(worst, float(np.linalg.norm(AB @ P - eye)))
        products.append(P)
    return ProductCheck(residual=worst, dimension=affine_dimension(products), expected=expected)


# EOF
