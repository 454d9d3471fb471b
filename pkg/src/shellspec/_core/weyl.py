#!/usr/bin/env python3
# Timestamp: 2026-10-19
"""Weyl discs of the root channel and the limit-point diagnostic."""

import logging
from dataclasses import dataclass as _dataclass
from dataclasses import field as _field
from typing import List, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg as _la

from .boundary import BoundaryData, boundary_data_direct, perturbed_blocks, shell_spectra, sweep
from .config import SweepPolicy
from .errors import DimensionMismatch, NotInvertible
from .graph import ChannelData, ShellOperator
from .numerics import complex_gaussian, hermitian_resolvent, im_part, random_hermitian, sqrt_inv_pd
from .pool import run_ordered

__all__ = [
    "WeylDisc",
    "WeylRow",
    "WeylTable",
    "weyl_disc",
    "sample_disc",
    "fill_ratio",
    "resolvent_truth",
    "min_solution_norm",
    "limit_point_diagnostic",
]

logger = logging.getLogger(__name__)


@_dataclass(frozen=True)
class WeylDisc:
    center: complex
    radius: float
    n: Optional[int] = None
    z: Optional[complex] = None

    def contains(self, w: complex, slack: float = 1e-8) -> bool:
        return abs(complex(w) - self.center) <= self.radius + slack

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "z": None if self.z is None else [self.z.real, self.z.imag],
            "center": [self.center.real, self.center.imag],
            "radius": self.radius,
        }


def _require_root(R: BoundaryData) -> None:
    if R.q != 1:
        raise DimensionMismatch(f"Weyl discs need a single root channel, got q={R.q}")


def weyl_disc(R0n: BoundaryData, n: Optional[int] = None) -> WeylDisc:
    """Center alpha + (i/2) beta I^{-1} gamma and radius (1/2)|beta I^{-1/2}| |I^{-1/2} gamma|.

    I is Im(delta). With no forward channel (r = 0) the disc is the
    single point alpha.

    Raises:
        NotPositiveDefinite: Im(delta) is not positive definite.
    """
    _require_root(R0n)
    alpha = complex(R0n.alpha[0, 0])
    if R0n.r == 0:
        return WeylDisc(center=alpha, radius=0.0, n=n, z=R0n.z)
    root = sqrt_inv_pd(im_part(R0n.delta))
    left = R0n.beta @ root
    right = root @ R0n.gamma
    center = alpha + 0.5j * complex((left @ right).item())
    radius = 0.5 * float(np.linalg.norm(left) * np.linalg.norm(right))
    return WeylDisc(center=center, radius=radius, n=n, z=R0n.z)


def sample_disc(
    R0n: BoundaryData, count: int = 200, seed: int = 0, hermitian_only: bool = False
) -> List[complex]:
    """Points alpha^{z,A} for random A with Im A >= 0.

    Half the draws use Hermitian A, the rest A = H + iP with P >= 0,
    unless hermitian_only is set. Scales are log-uniform so both the
    interior and the rim get covered.
    """
    _require_root(R0n)
    rng = np.random.default_rng(seed)
    points = []
    for k in range(count):
        scale = float(np.exp(rng.uniform(-3.0, 3.0)))
        A = random_hermitian(rng, R0n.r, scale) if R0n.r else np.zeros((0, 0))
        if not hermitian_only and k % 2 and R0n.r:
            G = complex_gaussian(rng, (R0n.r, R0n.r), scale)
            A = A + 1j * (G @ G.conj().T)
        try:
            alpha_A, _ = perturbed_blocks(R0n, A)
        except NotInvertible:
            continue
        points.append(complex(alpha_A[0, 0]))
    return points


def fill_ratio(disc: WeylDisc, points: Sequence[complex]) -> float:
    """Farthest sample from the center as a fraction of the radius."""
    if not points or disc.radius == 0:
        return 0.0
    return max(abs(complex(w) - disc.center) for w in points) / disc.radius


def resolvent_truth(so: ShellOperator, cd: ChannelData, n: int, z: complex) -> complex:
    """<Upsilon_0, (H_{0,n} - z)^{-1} Upsilon_0>."""
    H = so.block(0, n)
    top = cd.top(so, 0, n)
    x = hermitian_resolvent(H, z, rhs=top)
    return complex((top.conj().T @ x).item())


def min_solution_norm(
    so: ShellOperator, cd: ChannelData, n: int, z: complex
) -> Tuple[np.ndarray, float]:
    """Shortest truncated solution psi on shells 0..n with Upsilon_0^* psi_0 = 1.

    psi = (H_{0,n} - z)^{-1} Phi_n B with B = I^{-1} beta^* / (beta I^{-1} beta^*),
    where I = sign(Im z) Im(delta). Returns psi and its squared norm.
    """
    z = complex(z)
    if z.imag == 0:
        raise ValueError(f"Minimal solutions need Im z != 0, got z={z}")
    R = boundary_data_direct(so, cd, 0, n, z)
    _require_root(R)
    if R.r == 0:
        raise DimensionMismatch(f"Shell {n} has no forward channel")
    I = np.sign(z.imag) * im_part(R.delta)
    w = _la.solve(I, R.beta.conj().T, assume_a="her")
    B = w / complex((R.beta @ w).item())
    psi = hermitian_resolvent(so.block(0, n), z, rhs=cd.bottom(so, 0, n) @ B)
    return psi, float(np.linalg.norm(psi) ** 2)


@_dataclass(frozen=True)
class WeylRow:
    n: int
    center: complex
    radius: float
    truth: complex

    @property
    def distance(self) -> float:
        return abs(self.center - self.truth)


@_dataclass
class WeylTable:
    z: complex
    rows: List[WeylRow] = _field(default_factory=list)

    def radii_nonincreasing(self, slack: float = 1e-12) -> bool:
        return all(b.radius <= a.radius + slack for a, b in zip(self.rows, self.rows[1:]))

    def to_dict(self) -> dict:
        return {
            "z": [self.z.real, self.z.imag],
            "rows": [
                {
                    "n": r.n,
                    "center": [r.center.real, r.center.imag],
                    "radius": r.radius,
                    "truth": [r.truth.real, r.truth.imag],
                    "distance": r.distance,
                }
                for r in self.rows
            ],
        }


def limit_point_diagnostic(
    so: ShellOperator,
    cd: ChannelData,
    z: complex,
    depths: Sequence[int],
    policy: Optional[SweepPolicy] = None,
    workers: Optional[int] = None,
) -> WeylTable:
    """Disc centers and radii at each depth against the deepest root resolvent."""
    z = complex(z)
    if z.imag <= 0:
        raise ValueError(f"Weyl discs need Im z > 0, got z={z}")
    depths = sorted(set(int(n) for n in depths))
    truth = resolvent_truth(so, cd, depths[-1], z)
    spectra = shell_spectra(so, cd)

    def _disc(n: int) -> WeylDisc:
        R, _ = sweep(so, cd, z, n, policy, spectra)
        return weyl_disc(R, n)

    discs = run_ordered(_disc, depths, workers)
    table = WeylTable(z=z)
    for disc in discs:
        table.rows.append(WeylRow(n=disc.n, center=disc.center, radius=disc.radius, truth=truth))
    if not table.radii_nonincreasing():
        logger.warning(f"Weyl radii at z={z} are not non-increasing in depth")
    return table


# EOF
