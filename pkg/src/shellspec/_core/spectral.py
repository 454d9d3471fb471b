#!/usr/bin/env python3
# Timestamp: 2026-10-19
"""Spectral averaging: the averaged Stieltjes transform and a.c. density.

Averaging the truncated spectral measure over Cauchy-distributed
couplings at the forward channel of shell n gives a measure whose
absolutely continuous density at real lambda is

    (1/pi) gamma^*(1 + delta^2)^{-1} gamma

for the root data R_{0,n}. Equivalently Im S(lambda + i0)/pi, or
1/(pi |u|^2) for the shortest Dirichlet vector u. Point masses come from
eigenvectors of H_{0,n} that the forward channel cannot see.
"""

import logging
from dataclasses import dataclass as _dataclass
from dataclasses import field as _field
from typing import List, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg as _la
from scipy.integrate import trapezoid as _trapezoid

from .boundary import BoundaryData, ShellSpectra, _cond, shell_spectra, sweep
from .config import Config, SweepPolicy
from .errors import DimensionMismatch, NotInvertible, ShellSpecError, ZeroGamma
from .graph import ChannelData, ShellOperator
from .models import conjugated_product
from .pool import run_ordered
from .transfer import min_norm_dirichlet, product_over_shells
from .weyl import resolvent_truth

__all__ = [
    "DensityEstimate",
    "EntropyResult",
    "LpResult",
    "PanelRow",
    "averaged_stieltjes",
    "ac_density",
    "density_curve",
    "point_mass_detect",
    "mass_total",
    "entropy_criterion",
    "lp_diagnostic",
    "stieltjes_panel",
    "FLAGS",
    "CLIP_FLOOR",
]

logger = logging.getLogger(__name__)

FLAGS = ("ok", "perturbed", "singular")
CLIP_FLOOR = 1e-300
MASS_TOL = 1e-10
ORTHOGONAL_TOL = 1e-9


def _require_root(R: BoundaryData) -> None:
    if R.q != 1:
        raise DimensionMismatch(f"Root data must have q = 1, got q={R.q}")


def averaged_stieltjes(R0n: BoundaryData) -> complex:
    """alpha + i beta (1 - i delta)^{-1} gamma, a Herglotz function of z.

    Raises:
        NotInvertible: 1 - i delta is numerically singular.
    """
    _require_root(R0n)
    alpha = complex(R0n.alpha[0, 0])
    if R0n.r == 0:
        return alpha
    M = np.eye(R0n.r) - 1j * R0n.delta
    cond = _cond(M)
    if cond > Config.get_tolerance().suitability_cond_max:
        raise NotInvertible(f"1 - i delta has condition number {cond:.3g}")
    return alpha + 1j * complex((R0n.beta @ _la.solve(M, R0n.gamma)).item())


def ac_density(R0lambda: BoundaryData) -> float:
    """(1/pi) gamma^*(1 + delta^2)^{-1} gamma at real lambda."""
    _require_root(R0lambda)
    if R0lambda.r == 0:
        return 0.0
    gamma = R0lambda.gamma
    if not np.any(gamma):
        return 0.0
    M = np.eye(R0lambda.r) + R0lambda.delta @ R0lambda.delta
    value = (gamma.conj().T @ _la.solve(M, gamma)).real.item()
    return float(value) / np.pi


@_dataclass
class DensityEstimate:
    """Density, shortest Dirichlet norms and averaged Stieltjes values on a grid."""

    grid: List[float]
    depth: int
    density: List[float] = _field(default_factory=list)
    min_norm: List[float] = _field(default_factory=list)
    stieltjes: List[complex] = _field(default_factory=list)
    flags: List[str] = _field(default_factory=list)
    point_masses: List[Tuple[float, float]] = _field(default_factory=list)

    @property
    def ok(self) -> np.ndarray:
        return np.array([f == "ok" for f in self.flags], dtype=bool)

    def to_dict(self) -> dict:
        return {
            "depth": self.depth,
            "grid": list(self.grid),
            "density": list(self.density),
            "min_norm": list(self.min_norm),
            "stieltjes": [[s.real, s.imag] for s in self.stieltjes],
            "flags": list(self.flags),
            "point_masses": [[lam, m] for lam, m in self.point_masses],
        }


def _evaluate(so, cd, lam, depth, policy, spectra=None) -> Tuple[float, float, complex]:
    R, _ = sweep(so, cd, lam, depth, policy, spectra)
    density = ac_density(R)
    try:
        _, norm = min_norm_dirichlet(R)
    except ZeroGamma:
        norm = float("inf")
    return density, norm, averaged_stieltjes(R)


def _grid_point(so, cd, lam, depth, policy: SweepPolicy, spectra: Optional[ShellSpectra] = None):
    errors = (ShellSpecError, np.linalg.LinAlgError)
    try:
        return _evaluate(so, cd, lam, depth, policy, spectra) + ("ok",)
    except errors as e:
        if not policy.perturb:
            logger.info(f"lambda={lam} is singular: {e}")
            return float("nan"), float("nan"), complex("nan"), "singular"
        first = e
    shift = policy.perturb_scale * (1.0 + abs(lam))
    for moved in (lam + shift, lam - shift):
        try:
            values = _evaluate(so, cd, moved, depth, policy, spectra)
        except errors:
            continue
        logger.info(f"lambda={lam} perturbed to {moved!r} ({first})")
        return values + ("perturbed",)
    logger.info(f"lambda={lam} is singular even after perturbation: {first}")
    return float("nan"), float("nan"), complex("nan"), "singular"


def density_curve(
    so: ShellOperator,
    cd: ChannelData,
    grid: Sequence[float],
    depth: int,
    policy: Optional[SweepPolicy] = None,
    workers: Optional[int] = None,
    masses: bool = True,
) -> DensityEstimate:
    """Evaluate the averaged density at every grid point (in parallel).

    A point whose sweep fails is retried at lambda +/- perturb_scale*(1+|lambda|)
    and flagged "perturbed"; if that fails too it is flagged "singular"
    with NaN values. Failures never abort the curve.
    """
    policy = policy or Config.get_sweep_policy()
    grid = [float(lam) for lam in grid]
    spectra = shell_spectra(so, cd)

    def _point(lam: float):
        return _grid_point(so, cd, lam, depth, policy, spectra)

    estimate = DensityEstimate(grid=grid, depth=depth)
    for density, norm, stieltjes, flag in run_ordered(_point, grid, workers):
        estimate.density.append(density)
        estimate.min_norm.append(norm)
        estimate.stieltjes.append(stieltjes)
        estimate.flags.append(flag)
    if masses:
        estimate.point_masses = point_mass_detect(so, cd, depth)
    return estimate


def _invisible_basis(Uc: np.ndarray, channels: np.ndarray) -> np.ndarray:
    # orthonormal basis of the part of span(Uc) orthogonal to the channels
    if channels.shape[1] == 0:
        return Uc
    _, s, Vh = _la.svd(channels.conj().T @ Uc)
    rank = int(np.sum(s > ORTHOGONAL_TOL))
    return Uc @ Vh[rank:].conj().T


def point_mass_detect(
    so: ShellOperator, cd: ChannelData, depth: int, tol: float = MASS_TOL
) -> List[Tuple[float, float]]:
    """Eigenvalues of H_{0,depth} carrying root weight invisible to Phi_depth.

    Eigenvalues within 1e-9 (1 + |H|) are clustered; the mass is the squared
    norm of the root channel projected onto the invisible eigenvectors.
    """
    H = so.block(0, depth)
    w, U = _la.eigh(H)
    cluster_tol = 1e-9 * (1.0 + np.linalg.norm(H, 2))
    root = cd.top(so, 0, depth)
    forward = cd.bottom(so, 0, depth)
    found = []
    start = 0
    while start < w.size:
        stop = start + 1
        while stop < w.size and w[stop] - w[stop - 1] <= cluster_tol:
            stop += 1
        basis = _invisible_basis(U[:, start:stop], forward)
        if basis.shape[1]:
            mass = float(np.linalg.norm(basis.conj().T @ root) ** 2)
            if mass > tol:
                found.append((float(np.mean(w[start:stop])), mass))
        start = stop
    return found


def mass_total(estimate: DensityEstimate) -> float:
    """Trapezoid integral of the density over ok points plus all point masses."""
    ok = estimate.ok
    grid = np.asarray(estimate.grid)[ok]
    density = np.asarray(estimate.density)[ok]
    integral = float(_trapezoid(density, grid)) if grid.size > 1 else 0.0
    return integral + sum(m for _, m in estimate.point_masses)


@_dataclass(frozen=True)
class EntropyResult:
    value: float
    clipped: int

    def to_dict(self) -> dict:
        return {"value": self.value, "clipped": self.clipped}


def entropy_criterion(grid, density, weight=None) -> EntropyResult:
    """(1/w(K)) * integral over K of -log(density / w) w dlambda (trapezoid).

    Non-positive density samples are clipped at CLIP_FLOOR and counted.
    """
    grid = np.asarray(grid, dtype=float)
    density = np.asarray(density, dtype=float)
    weight = np.ones_like(grid) if weight is None else np.asarray(weight, dtype=float)
    if not (grid.shape == density.shape == weight.shape):
        raise DimensionMismatch(
            f"grid, density and weight lengths differ: {grid.size}, {density.size}, {weight.size}"
        )
    if np.any(weight <= 0):
        raise ValueError("Weight must be strictly positive on K")
    clipped = int(np.sum(~(density > CLIP_FLOOR)))
    if clipped:
        logger.warning(f"Clipped {clipped} density sample(s) at {CLIP_FLOOR}")
    safe = np.where(density > CLIP_FLOOR, density, CLIP_FLOOR)
    value = _trapezoid(-np.log(safe / weight) * weight, grid) / _trapezoid(weight, grid)
    return EntropyResult(value=float(value), clipped=clipped)


@_dataclass
class LpResult:
    value: float
    p: float
    depth: int
    choice: str
    flags: List[str] = _field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "p": self.p,
            "depth": self.depth,
            "choice": self.choice,
            "flags": list(self.flags),
        }


def lp_diagnostic(
    so: ShellOperator,
    cd: ChannelData,
    grid: Sequence[float],
    depth: int,
    p: float,
    choice: str = "base",
    model=None,
) -> LpResult:
    """Trapezoid integral over the grid of |T_{0,depth}(lambda)|^{2p}.

    choice is "base" (zero-coefficient members), "fhs" (block-Jacobi
    style, needs Phi = 1) or "conjugated" (the free-part eigenbasis of a
    built-in model; pass its ModelSpec as model).
    """
    if not p > 1:
        raise ValueError(f"p must be > 1, got {p}")
    if choice not in ("base", "fhs", "conjugated"):
        raise ValueError(f"Invalid choice: {choice}. Use 'base', 'fhs' or 'conjugated'")
    if choice == "conjugated" and model is None:
        raise ValueError("choice='conjugated' needs the model spec")

    grid = np.asarray(grid, dtype=float)
    values = np.full(grid.shape, np.nan)
    flags = []
    for i, lam in enumerate(grid):
        try:
            if choice == "conjugated":
                T = conjugated_product(model, lam, depth)
            else:
                T = product_over_shells(so, cd, lam, depth, choice).T
            values[i] = np.linalg.norm(T, 2) ** (2 * p)
            flags.append("ok")
        except ShellSpecError as e:
            logger.info(f"lambda={lam}: no transfer product ({e})")
            flags.append("singular")
    ok = np.isfinite(values)
    value = float(_trapezoid(values[ok], grid[ok])) if ok.sum() > 1 else float("nan")
    return LpResult(value=value, p=p, depth=depth, choice=choice, flags=flags)


@_dataclass(frozen=True)
class PanelRow:
    z: complex
    n: int
    value: complex
    truth: complex

    @property
    def error(self) -> float:
        return abs(self.value - self.truth)


def stieltjes_panel(
    so: ShellOperator,
    cd: ChannelData,
    zs: Sequence[complex],
    depths: Sequence[int],
    policy: Optional[SweepPolicy] = None,
) -> List[PanelRow]:
    """Averaged Stieltjes values at off-axis z against the deepest root resolvent."""
    depths = sorted(set(int(n) for n in depths))
    spectra = shell_spectra(so, cd)
    rows = []
    for z in zs:
        z = complex(z)
        if z.imag <= 0:
            raise ValueError(f"Panel points need Im z > 0, got z={z}")
        truth = resolvent_truth(so, cd, depths[-1], z)
        for n in depths:
            R, _ = sweep(so, cd, z, n, policy, spectra)
            rows.append(PanelRow(z=z, n=n, value=averaged_stieltjes(R), truth=truth))
    return rows


# EOF
