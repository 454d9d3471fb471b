#!/usr/bin/env python3
# Timestamp: 2026-10-19
"""Affine transfer-matrix spaces generated by boundary data.

For data R with blocks (alpha, beta, gamma, delta) the space holds every

    T = [[B, -b], [delta B, gamma - delta b]]

with beta B = 1 and beta b = alpha. Right inverses are written B0 + K C
where B0 is the minimum-norm one and K spans ker(beta).
"""

import logging
from dataclasses import dataclass as _dataclass
from dataclasses import field as _field
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
import scipy.linalg as _la

from .boundary import BoundaryData, shell_data
from .config import TolerancePolicy
from .errors import (
    DimensionMismatch,
    SingularShell,
    SingularSpectralParameter,
    SpecInvalid,
    ZeroGamma,
)
from .graph import ChannelData, ShellOperator
from .numerics import complex_gaussian, hermitian_resolvent, kernel_basis, right_inverse_base

__all__ = [
    "TransferSpace",
    "TransferMatrix",
    "MembershipResiduals",
    "SolutionTrace",
    "transfer_space",
    "sample_member",
    "bold_member",
    "random_member",
    "fhs_member",
    "membership_check",
    "symplectic_form",
    "symplectic_residual",
    "min_norm_dirichlet",
    "dirichlet_vectors",
    "neumann_vectors",
    "product_over_shells",
    "propagate_solution",
    "injectivity_check",
    "surjectivity_witness",
]

logger = logging.getLogger(__name__)


@_dataclass(frozen=True, eq=False)
class TransferSpace:
    """Parametrization of the transfer set of R."""

    R: BoundaryData
    B0: np.ndarray
    b0: np.ndarray
    K: np.ndarray

    @property
    def q(self) -> int:
        return self.R.q

    @property
    def r(self) -> int:
        return self.R.r

    @property
    def freedom(self) -> int:
        """Columns of K, i.e. r - q."""
        return self.K.shape[1]


@_dataclass(frozen=True, eq=False)
class TransferMatrix:
    T: np.ndarray
    q: int
    r: int

    def __post_init__(self):
        if self.T.shape != (2 * self.r, 2 * self.q):
            raise DimensionMismatch(
                f"Transfer matrix must be {2 * self.r} x {2 * self.q}, got {self.T.shape}"
            )

    def blocks(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """(B, b, X, Y) with T = [[B, -b], [X, Y]]."""
        q, r = self.q, self.r
        return self.T[:r, :q], -self.T[:r, q:], self.T[r:, :q], self.T[r:, q:]

    def __matmul__(self, other: "TransferMatrix") -> "TransferMatrix":
        if other.r != self.q:
            raise DimensionMismatch(f"Cannot chain: inner sizes {other.r} and {self.q}")
        return TransferMatrix(T=self.T @ other.T, q=other.q, r=self.r)


@_dataclass(frozen=True)
class MembershipResiduals:
    right_inverse: float
    solution: float
    lower_left: float
    lower_right: float

    @property
    def worst(self) -> float:
        return max(self.right_inverse, self.solution, self.lower_left, self.lower_right)

    def is_member(self, tol: float = 1e-9) -> bool:
        return self.worst <= tol


def transfer_space(R: BoundaryData, tol: Optional[TolerancePolicy] = None) -> TransferSpace:
    """Base right inverse, base solution b0 = B0 alpha and kernel basis of beta.

    Raises:
        RankDeficient: beta lacks full row rank at this parameter.
    """
    if R.q > R.r:
        raise DimensionMismatch(f"Transfer space needs q <= r, got q={R.q}, r={R.r}")
    B0 = right_inverse_base(R.beta, tol)
    K = kernel_basis(R.beta, tol)
    return TransferSpace(R=R, B0=B0, b0=B0 @ R.alpha, K=K)


def _assemble(R: BoundaryData, B: np.ndarray, b: np.ndarray) -> TransferMatrix:
    T = np.block([[B, -b], [R.delta @ B, R.gamma - R.delta @ b]])
    return TransferMatrix(T=T, q=R.q, r=R.r)


def _coefficients(ts: TransferSpace, C) -> np.ndarray:
    if C is None:
        return np.zeros((ts.freedom, ts.q), dtype=complex)
    C = np.asarray(C, dtype=complex).reshape(ts.freedom, ts.q)
    return C


def sample_member(ts: TransferSpace, C1=None, C2=None) -> TransferMatrix:
    """Member with B = B0 + K C1 and b = b0 + K C2 (zero coefficients by default)."""
    B = ts.B0 + ts.K @ _coefficients(ts, C1)
    b = ts.b0 + ts.K @ _coefficients(ts, C2)
    return _assemble(ts.R, B, b)


def bold_member(ts: TransferSpace, C1=None) -> TransferMatrix:
    """Member of the subset with b = B alpha."""
    B = ts.B0 + ts.K @ _coefficients(ts, C1)
    return _assemble(ts.R, B, B @ ts.R.alpha)


def random_member(
    ts: TransferSpace, rng: np.random.Generator, scale: float = 1.0, bold: bool = False
) -> TransferMatrix:
    C1 = complex_gaussian(rng, (ts.freedom, ts.q), scale)
    if bold:
        return bold_member(ts, C1)
    return sample_member(ts, C1, complex_gaussian(rng, (ts.freedom, ts.q), scale))


def fhs_member(so: ShellOperator, cd: ChannelData, n: int, z: complex) -> TransferMatrix:
    """The block-Jacobi style choice [[(V - z) L, -U], [L, 0]], L = U (U*U)^{-1}.

    Here U is Upsilon_n. Needs the forward channel Phi_n to be the identity.
    """
    phi = cd.phi[n]
    if phi.shape[0] != phi.shape[1] or not np.allclose(phi, np.eye(phi.shape[0])):
        raise SpecInvalid(f"Phi_{n} is not the identity; this choice is unavailable")
    ups = cd.upsilon[n]
    lam = ups @ np.linalg.inv(ups.conj().T @ ups)
    V = so.potentials[n] - complex(z) * np.eye(so.sizes[n])
    s, q = ups.shape
    T = np.block([[V @ lam, -ups], [lam, np.zeros((s, q), dtype=complex)]])
    return TransferMatrix(T=T, q=q, r=s)


def membership_check(T: TransferMatrix, R: BoundaryData) -> MembershipResiduals:
    """Residuals of the four defining relations of the transfer set of R."""
    if (T.q, T.r) != (R.q, R.r):
        raise DimensionMismatch(f"Matrix is for (q, r)=({T.q}, {T.r}), data for ({R.q}, {R.r})")
    B, b, X, Y = T.blocks()
    return MembershipResiduals(
        right_inverse=float(np.linalg.norm(R.beta @ B - np.eye(R.q))),
        solution=float(np.linalg.norm(R.beta @ b - R.alpha)),
        lower_left=float(np.linalg.norm(X - R.delta @ B)),
        lower_right=float(np.linalg.norm(Y - (R.gamma - R.delta @ b))),
    )


def symplectic_form(m: int) -> np.ndarray:
    """J_m = [[0, -1], [1, 0]] in 2m x 2m blocks."""
    eye = np.eye(m)
    zero = np.zeros((m, m))
    return np.block([[zero, -eye], [eye, zero]]).astype(complex)


def symplectic_residual(T1: TransferMatrix, T2: TransferMatrix, real: bool = False) -> float:
    """||T1^* J_r T2 - J_q||; with real=True the transpose replaces the adjoint."""
    if T1.T.shape != T2.T.shape:
        raise DimensionMismatch(f"Shapes differ: {T1.T.shape} and {T2.T.shape}")
    left = T1.T.T if real else T1.T.conj().T
    return float(np.linalg.norm(left @ symplectic_form(T1.r) @ T2.T - symplectic_form(T1.q)))


def min_norm_dirichlet(R0n: BoundaryData) -> Tuple[np.ndarray, float]:
    """Shortest Dirichlet vector (B; delta B) subject to beta B = 1.

    Real-parameter root data only (q = 1, beta = gamma^*). Returns the
    vector and its squared norm 1 / gamma^*(1 + delta^2)^{-1} gamma.
    """
    if R0n.q != 1:
        raise DimensionMismatch(f"Root data needs q = 1, got {R0n.q}")
    gamma = R0n.gamma
    if R0n.r == 0 or np.linalg.norm(gamma) == 0:
        raise ZeroGamma("gamma vanishes, no Dirichlet vector exists")
    M = np.eye(R0n.r) + R0n.delta @ R0n.delta
    w = _la.solve(M, gamma)
    weight = float((gamma.conj().T @ w).real.item())
    if weight <= 1e-300:
        raise ZeroGamma(f"gamma^*(1 + delta^2)^{{-1}} gamma = {weight:.3g}")
    B = w / weight
    return np.vstack([B, R0n.delta @ B]), 1.0 / weight


def dirichlet_vectors(ts: TransferSpace, rng: np.random.Generator, count: int) -> List[np.ndarray]:
    """Samples of T (1; 0) over random members."""
    head = np.vstack([np.eye(ts.q), np.zeros((ts.q, ts.q))])
    return [random_member(ts, rng).T @ head for _ in range(count)]


def neumann_vectors(ts: TransferSpace, rng: np.random.Generator, count: int) -> List[np.ndarray]:
    """Samples of T (0; 1) over random members."""
    head = np.vstack([np.zeros((ts.q, ts.q)), np.eye(ts.q)])
    return [random_member(ts, rng).T @ head for _ in range(count)]


def _shell_space(so, cd, n, z, tol, pseudo) -> TransferSpace:
    try:
        return transfer_space(shell_data(so, cd, n, z, tol, pseudo=pseudo), tol)
    except SingularSpectralParameter as e:
        raise SingularShell(f"Shell {n} is singular at z={z}: {e}") from e


def product_over_shells(
    so: ShellOperator,
    cd: ChannelData,
    z: complex,
    depth: int,
    choice: str = "base",
    tol: Optional[TolerancePolicy] = None,
) -> TransferMatrix:
    """T_depth ... T_1 T_0 with one canonical member per shell.

    choice is "base" (zero coefficients) or "fhs" (needs Phi_n = 1).
    """
    if choice not in ("base", "fhs"):
        raise ValueError(f"Invalid choice: {choice}. Use 'base' or 'fhs'")
    product: Optional[TransferMatrix] = None
    for n in range(depth + 1):
        if choice == "fhs":
            step = fhs_member(so, cd, n, z)
        else:
            step = sample_member(_shell_space(so, cd, n, z, tol, False))
        product = step if product is None else step @ product
    return product


@_dataclass
class SolutionTrace:
    """Channel traces and reconstructed shells of a formal solution."""

    z: complex
    u: List[np.ndarray] = _field(default_factory=list)  # u_0 .. u_{N+1}
    v: List[np.ndarray] = _field(default_factory=list)  # v_{-1} .. v_N
    psi: List[np.ndarray] = _field(default_factory=list)  # Psi_0 .. Psi_N
    equation_residuals: List[float] = _field(default_factory=list)
    trace_residuals: List[float] = _field(default_factory=list)

    @property
    def worst_residual(self) -> float:
        return max(self.equation_residuals + self.trace_residuals + [0.0])


def propagate_solution(
    so: ShellOperator,
    cd: ChannelData,
    z: complex,
    choices: Optional[Sequence[Tuple[np.ndarray, np.ndarray]]],
    u,
    v,
    depth: int,
    tol: Optional[TolerancePolicy] = None,
) -> SolutionTrace:
    """Iterate (u_{n+1}; v_n) = T_n (u_n; v_{n-1}) and rebuild Psi_n.

    Psi_n = (V_n - z)^{-1}(Upsilon_n v_{n-1} + Phi_n u_{n+1}). The result
    solves (H Psi)_n = z Psi_n for n >= 1 and (H Psi)_0 = z Psi_0 + Upsilon_0 v;
    both the equation and the channel traces are checked per shell.

    Raises:
        SingularShell: V_n - z is singular at some shell.
    """
    z = complex(z)
    q0 = cd.upsilon[0].shape[1]
    trace = SolutionTrace(z=z)
    trace.u.append(np.asarray(u, dtype=complex).reshape(q0, 1))
    trace.v.append(np.asarray(v, dtype=complex).reshape(q0, 1))
    for n in range(depth + 1):
        ts = _shell_space(so, cd, n, z, tol, False)
        C1, C2 = choices[n] if choices is not None else (None, None)
        T = sample_member(ts, C1, C2)
        nxt = T.T @ np.vstack([trace.u[n], trace.v[n]])
        trace.u.append(nxt[: ts.r])
        trace.v.append(nxt[ts.r :])

    for n in range(depth + 1):
        rhs = cd.upsilon[n] @ trace.v[n] + cd.phi[n] @ trace.u[n + 1]
        try:
            trace.psi.append(hermitian_resolvent(so.potentials[n], z, tol, rhs=rhs))
        except SingularSpectralParameter as e:
            raise SingularShell(f"V_{n} - z is singular at z={z}: {e}") from e

    for n in range(depth + 1):
        psi = trace.psi[n]
        res = (so.potentials[n] - z * np.eye(so.sizes[n])) @ psi
        res = res + (so.connections[n - 1] @ trace.psi[n - 1] if n else -cd.upsilon[0] @ trace.v[0])
        if n < depth:
            res = res + so.connections[n].conj().T @ trace.psi[n + 1]
        else:
            res = res - cd.phi[n] @ trace.u[n + 1]
        scale = max(1.0, float(np.linalg.norm(psi)))
        trace.equation_residuals.append(float(np.linalg.norm(res)) / scale)
        trace_err = max(
            float(np.linalg.norm(cd.upsilon[n].conj().T @ psi - trace.u[n])),
            float(np.linalg.norm(cd.phi[n].conj().T @ psi - trace.v[n + 1])),
        )
        trace.trace_residuals.append(trace_err / scale)
    return trace


def injectivity_check(
    ts: TransferSpace,
    samples: Union[int, Sequence[TransferMatrix]] = 8,
    seed: int = 0,
) -> float:
    """Smallest singular value over sampled (or given) members."""
    if isinstance(samples, int):
        rng = np.random.default_rng(seed)
        samples = [random_member(ts, rng) for _ in range(samples)]
    return float(min(_la.svd(T.T, compute_uv=False).min() for T in samples))


def surjectivity_witness(
    Q: BoundaryData,
    R: BoundaryData,
    B_hat: np.ndarray,
    tol: Optional[TolerancePolicy] = None,
) -> Tuple[np.ndarray, TransferMatrix, np.ndarray]:
    """Realize a Dirichlet vector of Q composed with R as a product.

    Given B_hat with beta_hat B_hat = 1 for the composed data, returns
    (B_Q, T_R, u) where B_Q is a right inverse of Q.beta, T_R a member of
    the b = B alpha subset for R, and u = T_R (B_Q; Q.delta B_Q).
    """
    B_hat = np.asarray(B_hat, dtype=complex).reshape(R.r, Q.q)
    target = R.beta @ B_hat
    x = _la.solve(np.eye(Q.r) - R.alpha @ Q.delta, target)
    w = x - R.alpha @ (Q.delta @ x)
    ts = transfer_space(R, tol)
    if ts.freedom:
        C = ts.K.conj().T @ (B_hat - ts.B0 @ w) @ np.linalg.pinv(w)
    else:
        C = None
    T_R = bold_member(ts, C)
    u = T_R.T @ np.vstack([x, Q.delta @ x])
    return x, T_R, u


# EOF
