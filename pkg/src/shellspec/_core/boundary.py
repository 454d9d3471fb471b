#!/usr/bin/env python3
# Timestamp: 2026-10-19
"""Boundary resolvent data and the composition that merges adjacent blocks.

For shells m..n the data R^z_{m,n} is the 2x2 block compression

    [Upsilon_m ; Phi_n]^* (H_{m,n} - z)^{-1} [Upsilon_m ; Phi_n]

with the backward channel embedded at the top shell and the forward
channel at the bottom shell. Composing the data of 0..m with that of
m+1..n gives the data of 0..n without touching the full matrix.
"""

import logging
from dataclasses import dataclass as _dataclass
from dataclasses import field as _field
from typing import List, Optional, Tuple

import numpy as np
import scipy.linalg as _la

from .config import Config, SweepPolicy, TolerancePolicy
from .errors import (
    DimensionMismatch,
    NotInvertible,
    NotSuitable,
    ParameterMismatch,
    ShellSpecError,
    SingularSpectralParameter,
    SweepFailed,
)
from .graph import ChannelData, ShellOperator
from .numerics import _policy, complex_gaussian, hermitian_resolvent, im_part, random_hermitian

__all__ = [
    "BoundaryData",
    "SuitabilityReport",
    "SweepDiagnostics",
    "boundary_data_direct",
    "shell_data",
    "ShellSpectra",
    "shell_spectra",
    "is_suitable",
    "compose",
    "compose_by_block_inverse",
    "sweep",
    "perturbed_blocks",
    "random_upper_data",
]

logger = logging.getLogger(__name__)


@_dataclass(frozen=True, eq=False)
class BoundaryData:
    """Blocks alpha (q x q), beta (q x r), gamma (r x q), delta (r x r) at z."""

    alpha: np.ndarray
    beta: np.ndarray
    gamma: np.ndarray
    delta: np.ndarray
    z: Optional[complex] = None

    def __post_init__(self):
        q, r = self.alpha.shape[0], self.delta.shape[0]
        shapes = {
            "alpha": (self.alpha.shape, (q, q)),
            "beta": (self.beta.shape, (q, r)),
            "gamma": (self.gamma.shape, (r, q)),
            "delta": (self.delta.shape, (r, r)),
        }
        for name, (got, want) in shapes.items():
            if got != want:
                raise DimensionMismatch(f"{name} must be {want}, got {got}")

    @property
    def q(self) -> int:
        return self.alpha.shape[0]

    @property
    def r(self) -> int:
        return self.delta.shape[0]

    @classmethod
    def from_matrix(cls, M: np.ndarray, q: int, z: Optional[complex] = None) -> "BoundaryData":
        M = np.asarray(M, dtype=complex)
        return cls(alpha=M[:q, :q], beta=M[:q, q:], gamma=M[q:, :q], delta=M[q:, q:], z=z)

    def matrix(self) -> np.ndarray:
        return np.block([[self.alpha, self.beta], [self.gamma, self.delta]])

    def conjugate(self) -> "BoundaryData":
        """Data at conj(z): adjoint blocks with beta and gamma swapped."""
        return BoundaryData(
            alpha=self.alpha.conj().T,
            beta=self.gamma.conj().T,
            gamma=self.beta.conj().T,
            delta=self.delta.conj().T,
            z=None if self.z is None else complex(self.z).conjugate(),
        )

    def in_upper_cone(self, slack: float = 1e-10) -> bool:
        """Im alpha > 0, Im delta > 0 and Im of the whole block >= -slack."""
        if self.q and np.linalg.eigvalsh(im_part(self.alpha)).min() <= 0:
            return False
        if self.r and np.linalg.eigvalsh(im_part(self.delta)).min() <= 0:
            return False
        return bool(np.linalg.eigvalsh(im_part(self.matrix())).min() >= -slack)

    def to_dict(self) -> dict:
        def _c(M):
            return [[[float(x.real), float(x.imag)] for x in row] for row in M]

        return {
            "q": self.q,
            "r": self.r,
            "z": None if self.z is None else [self.z.real, self.z.imag],
            "alpha": _c(self.alpha),
            "beta": _c(self.beta),
            "gamma": _c(self.gamma),
            "delta": _c(self.delta),
        }


@_dataclass(frozen=True)
class SuitabilityReport:
    suitable: bool
    cond: float


@_dataclass
class SweepDiagnostics:
    """What happened during a forward sweep."""

    z: complex
    depth: int
    fallbacks: List[int] = _field(default_factory=list)
    worst_cond: float = 1.0
    steps: int = 0

    def to_dict(self) -> dict:
        return {
            "z": [self.z.real, self.z.imag],
            "depth": self.depth,
            "fallbacks": self.fallbacks,
            "worst_cond": self.worst_cond,
            "steps": self.steps,
        }


def _cond(M: np.ndarray) -> float:
    if M.size == 0:
        return 1.0
    s = np.linalg.svd(M, compute_uv=False)
    if s[-1] == 0:
        return float("inf")
    return float(s[0] / s[-1])


def boundary_data_direct(
    so: ShellOperator,
    cd: ChannelData,
    m: int,
    n: int,
    z: complex,
    tol: Optional[TolerancePolicy] = None,
    pseudo: bool = False,
) -> BoundaryData:
    """R^z_{m,n} from a linear solve with the partial operator H_{m,n}."""
    H = so.block(m, n)
    C = np.hstack([cd.top(so, m, n), cd.bottom(so, m, n)])
    X = hermitian_resolvent(H, z, tol, pseudo=pseudo, channels=C, rhs=C)
    return BoundaryData.from_matrix(C.conj().T @ X, cd.upsilon[m].shape[1], complex(z))


def shell_data(
    so: ShellOperator,
    cd: ChannelData,
    n: int,
    z: complex,
    tol: Optional[TolerancePolicy] = None,
    pseudo: bool = False,
) -> BoundaryData:
    """R^z_n, the data of the single shell n."""
    return boundary_data_direct(so, cd, n, n, z, tol, pseudo)


@_dataclass(frozen=True, eq=False)
class ShellSpectra:
    """Eigendecomposition of every V_n, with the channels in its eigenbasis.

    Built once per operator and shared by every z of a grid, so a sweep
    only pays for an eigh when z sits within the exclusion radius of a
    shell eigenvalue.
    """

    eigenvalues: List[np.ndarray]
    channels: List[np.ndarray]
    widths: List[int]
    norms: List[float]

    @property
    def depth(self) -> int:
        return len(self.eigenvalues) - 1

    def data(
        self, n: int, z: complex, tol: Optional[TolerancePolicy] = None
    ) -> Optional[BoundaryData]:
        """R^z_n from the cached spectrum, or None when z is near an eigenvalue of V_n."""
        w = self.eigenvalues[n]
        z = complex(z)
        radius = _policy(tol).eig_exclusion_tol * (1.0 + self.norms[n])
        if w.size and np.min(np.abs(w - z)) <= radius:
            return None
        A = self.channels[n]
        return BoundaryData.from_matrix((A.conj().T / (w - z)) @ A, self.widths[n], z)


def shell_spectra(so: ShellOperator, cd: ChannelData) -> ShellSpectra:
    """Diagonalize every shell potential once."""
    eigenvalues, channels, widths, norms = [], [], [], []
    for k in range(min(so.depth, cd.depth) + 1):
        w, U = _la.eigh(so.potentials[k])
        eigenvalues.append(w)
        channels.append(U.conj().T @ np.hstack([cd.upsilon[k], cd.phi[k]]))
        widths.append(cd.upsilon[k].shape[1])
        norms.append(float(np.max(np.abs(w))) if w.size else 0.0)
    return ShellSpectra(eigenvalues=eigenvalues, channels=channels, widths=widths, norms=norms)


def _check_pair(Q: BoundaryData, R: BoundaryData) -> None:
    if Q.r != R.q:
        raise DimensionMismatch(f"Cannot compose: Q.r={Q.r} but R.q={R.q}")
    if Q.z is not None and R.z is not None:
        if abs(Q.z - R.z) > 1e-14 * (1 + abs(Q.z)):
            raise ParameterMismatch(f"Boundary data computed at z={Q.z} and z={R.z}")


def is_suitable(
    Q: BoundaryData, R: BoundaryData, tol: Optional[TolerancePolicy] = None
) -> SuitabilityReport:
    """Invertibility of 1 - R.alpha Q.delta by condition number."""
    _check_pair(Q, R)
    cond = _cond(np.eye(Q.r) - R.alpha @ Q.delta)
    return SuitabilityReport(suitable=cond <= _policy(tol).suitability_cond_max, cond=cond)


def compose(
    Q: BoundaryData,
    R: BoundaryData,
    tol: Optional[TolerancePolicy] = None,
    report: Optional[SuitabilityReport] = None,
) -> BoundaryData:
    """Merge Q (shells l..m) with R (shells m+1..n) into the data of l..n.

    Args:
        Q: Data of the upper block
        R: Data of the lower block
        tol: Tolerance policy (default: Config.get_tolerance())
        report: Suitability of (Q, R) when the caller already has it
    """
    if report is None:
        report = is_suitable(Q, R, tol)
    else:
        _check_pair(Q, R)
    if not report.suitable:
        raise NotSuitable(f"1 - alpha~ delta has condition number {report.cond:.3g}", report.cond)
    eye = np.eye(Q.r)
    left = np.linalg.solve(eye - R.alpha @ Q.delta, np.hstack([R.alpha @ Q.gamma, R.beta]))
    right = np.linalg.solve(eye - Q.delta @ R.alpha, np.hstack([Q.delta @ R.beta, Q.gamma]))
    alpha = Q.alpha + Q.beta @ left[:, : Q.q]
    beta = Q.beta @ left[:, Q.q :]
    delta = R.delta + R.gamma @ right[:, : R.r]
    gamma = R.gamma @ right[:, R.r :]
    z = Q.z if Q.z is not None else R.z
    return BoundaryData(alpha=alpha, beta=beta, gamma=gamma, delta=delta, z=z)


def compose_by_block_inverse(
    G1_inv: np.ndarray,
    G2_inv: np.ndarray,
    ups: np.ndarray,
    phi: np.ndarray,
    ups_next: np.ndarray,
    phi_next: np.ndarray,
) -> BoundaryData:
    """Composition evaluated as one big block inverse.

    Couples G1_inv and G2_inv through the off-diagonal blocks
    -phi ups_next^* and -ups_next phi^*, inverts, and compresses with the
    outer channels ups (top) and phi_next (bottom).
    """
    n1 = G1_inv.shape[0]
    M = np.block(
        [
            [G1_inv, -phi @ ups_next.conj().T],
            [-ups_next @ phi.conj().T, G2_inv],
        ]
    )
    C = np.zeros((M.shape[0], ups.shape[1] + phi_next.shape[1]), dtype=complex)
    C[:n1, : ups.shape[1]] = ups
    C[n1:, ups.shape[1] :] = phi_next
    X = _la.solve(M, C)
    return BoundaryData.from_matrix(C.conj().T @ X, ups.shape[1])


def sweep(
    so: ShellOperator,
    cd: ChannelData,
    z: complex,
    n: int,
    policy: Optional[SweepPolicy] = None,
    spectra: Optional[ShellSpectra] = None,
) -> Tuple[BoundaryData, SweepDiagnostics]:
    """R^z_{0,n} by left-folding shell data R_0, R_1, ..., R_n.

    A step that is unsuitable, or a shell that is singular at z, is
    replaced by the direct data of the merged block 0..k and recorded.
    Pass ``spectra`` from :func:`shell_spectra` when sweeping many z.

    Raises:
        SweepFailed: the direct fallback failed as well.
    """
    policy = policy or Config.get_sweep_policy()
    tol = policy.tolerance
    z = complex(z)
    if spectra is None:
        spectra = shell_spectra(so, cd)
    diagnostics = SweepDiagnostics(z=z, depth=n)
    acc: Optional[BoundaryData] = None
    for k in range(n + 1):
        try:
            step = spectra.data(k, z, tol) if k <= spectra.depth else None
            if step is None:
                step = shell_data(so, cd, k, z, tol, pseudo=policy.pseudo)
            if acc is None:
                acc = step
            else:
                report = is_suitable(acc, step, tol)
                diagnostics.worst_cond = max(diagnostics.worst_cond, report.cond)
                acc = compose(acc, step, tol, report=report)
            diagnostics.steps += 1
        except (NotSuitable, SingularSpectralParameter, np.linalg.LinAlgError) as e:
            diagnostics.fallbacks.append(k)
            logger.info(f"Sweep at z={z}: falling back to direct data for shells 0..{k} ({e})")
            try:
                acc = boundary_data_direct(so, cd, 0, k, z, tol, pseudo=policy.pseudo)
            except (ShellSpecError, np.linalg.LinAlgError) as e2:
                raise SweepFailed(f"Direct fallback for shells 0..{k} at z={z} failed: {e2}") from e2
    return acc, diagnostics


def perturbed_blocks(
    R: BoundaryData, A, tol: Optional[TolerancePolicy] = None
) -> Tuple[np.ndarray, np.ndarray]:
    """Blocks (alpha^{z,A}, gamma^{z,A}) after coupling A at the forward channel."""
    A = np.atleast_2d(np.asarray(A, dtype=complex))
    if A.shape != (R.r, R.r):
        raise DimensionMismatch(f"A must be {R.r} x {R.r}, got {A.shape}")
    M = np.eye(R.r) - R.delta @ A
    cond = _cond(M)
    if cond > _policy(tol).suitability_cond_max:
        raise NotInvertible(f"1 - delta A has condition number {cond:.3g}")
    gamma_A = _la.solve(M, R.gamma) if R.r else R.gamma
    alpha_A = R.alpha + R.beta @ A @ gamma_A
    return alpha_A, gamma_A


def random_upper_data(
    rng: np.random.Generator, q: int, r: int, size: Optional[int] = None
) -> BoundaryData:
    """Random member of the cone M(q, r, +), not tied to any z.

    Built as the channel compression of a random Hermitian resolvent.
    """
    size = size or q + r + 2
    H = random_hermitian(rng, size)
    z = complex(rng.uniform(-2, 2), rng.uniform(0.1, 2))
    C = complex_gaussian(rng, (size, q + r))
    X = _la.solve(H - z * np.eye(size), C)
    return BoundaryData.from_matrix(C.conj().T @ X, q)


# EOF
