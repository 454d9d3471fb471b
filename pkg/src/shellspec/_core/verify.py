#!/usr/bin/env python3
# Timestamp: 2026-10-19
"""Property suites: reduced, seeded versions of every module's invariants.

Suites are "algebra" (composition, transfer spaces, right inverses),
"weyl", "spectral" and "models". Each property reports a residual and
the threshold it must stay under.

Examples:
    >>> result = run_suites("algebra", seed=0)
    >>> print(f"{result.passed}/{result.total} passed")
    >>> result.save("verify.json")
"""

import json
import logging
import time
from dataclasses import dataclass as _dataclass
from pathlib import Path
from typing import Callable, Iterator, List, Optional, Tuple, Union

import numpy as np
import scipy.linalg as _la

from .boundary import (
    BoundaryData,
    boundary_data_direct,
    compose,
    compose_by_block_inverse,
    random_upper_data,
    shell_data,
    shell_spectra,
    sweep,
)
from .errors import ShellSpecError
from .graph import (
    ChannelData,
    ShellOperator,
    ShellPartition,
    WeightedGraph,
    bfs_partition,
    channel_decomposition,
    extract_shell_operator,
    random_graph,
)
from .models import (
    ModelSpec,
    build_model,
    conjugated_step,
    fourth_moment_run,
    mean_field_unitary,
    summability_proxy,
    tree_reduction_check,
)
from .numerics import (
    complex_gaussian,
    random_hermitian,
    right_inverse_product_check,
    sample_right_inverse,
)
from .spectral import (
    averaged_stieltjes,
    density_curve,
    entropy_criterion,
    mass_total,
    point_mass_detect,
    stieltjes_panel,
)
from .transfer import (
    membership_check,
    random_member,
    surjectivity_witness,
    symplectic_residual,
    transfer_space,
)
from .weyl import (
    fill_ratio,
    limit_point_diagnostic,
    min_solution_norm,
    sample_disc,
    weyl_disc,
)

__all__ = [
    "PropertyEntry",
    "SuiteResult",
    "SUITES",
    "FAULTS",
    "run_suites",
    "free_jacobi_density",
    "free_jacobi_m",
]

logger = logging.getLogger(__name__)

SUITES = ("algebra", "weyl", "spectral", "models")

ComposeFn = Callable[[BoundaryData, BoundaryData], BoundaryData]


@_dataclass
class PropertyEntry:
    """A single property check result."""

    name: str
    suite: str
    passed: bool
    residual: float
    threshold: float
    detail: str = ""

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "suite": self.suite,
            "passed": self.passed,
            "residual": self.residual,
            "threshold": self.threshold,
            "detail": self.detail,
        }


@_dataclass
class SuiteResult:
    """Results from one verification run."""

    entries: List[PropertyEntry]
    total: int
    passed: int
    failed: int
    elapsed_ms: float
    fault: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def __len__(self) -> int:
        return self.total

    def __iter__(self) -> Iterator[PropertyEntry]:
        return iter(self.entries)

    def to_dict(self) -> dict:
        return {
            "summary": {
                "total": self.total,
                "passed": self.passed,
                "failed": self.failed,
                "fault": self.fault,
                "elapsed_ms": round(self.elapsed_ms, 2),
            },
            "entries": [e.to_dict() for e in self.entries],
        }

    def save(self, path: Union[str, Path], format: str = "json") -> str:
        path = Path(path)
        if format == "json":
            content = json.dumps(self.to_dict(), indent=2)
        elif format == "text":
            content = self._format_text()
        else:
            raise ValueError(f"Unsupported format: {format}")
        path.write_text(content, encoding="utf-8")
        return str(path)

    def _format_text(self) -> str:
        lines = []
        lines.append("Property Check Results")
        lines.append("=" * 50)
        lines.append(f"Total:   {self.total}")
        lines.append(f"Passed:  {self.passed}")
        lines.append(f"Failed:  {self.failed}")
        if self.fault:
            lines.append(f"Fault:   {self.fault} (injected)")
        lines.append(f"Time:    {self.elapsed_ms:.1f}ms")
        lines.append("")

        for suite in SUITES:
            entries = [e for e in self.entries if e.suite == suite]
            if not entries:
                continue
            lines.append(f"{suite}:")
            for e in entries:
                mark = "PASS" if e.passed else "FAIL"
                lines.append(f"  [{mark}] {e.name}: {e.residual:.3g} (threshold {e.threshold:.3g})")
                if e.detail and not e.passed:
                    lines.append(f"    ! {e.detail}")
            lines.append("")

        return "\n".join(lines)


# ---------------------------------------------------------------------------
# Oracles and fixtures
# ---------------------------------------------------------------------------


def free_jacobi_m(z: complex) -> complex:
    """Root of m^2 + z m + 1 = 0 with Im m > 0 (Im z > 0)."""
    z = complex(z)
    root = np.sqrt(z * z - 4 + 0j)
    m = (-z + root) / 2
    return m if m.imag > 0 else (-z - root) / 2


def free_jacobi_density(lam, depth: int) -> np.ndarray:
    """Averaged density of the free chain on shells 0..depth.

    sin^2 k / (pi (sin^2((depth+2)k) + sin^2((depth+1)k))) at lam = -2 cos k,
    inside the band only.
    """
    k = np.arccos(-np.asarray(lam, dtype=float) / 2)
    num = np.sin(k) ** 2
    den = np.sin((depth + 2) * k) ** 2 + np.sin((depth + 1) * k) ** 2
    return num / (np.pi * den)


def _rel(A: np.ndarray, B: np.ndarray) -> float:
    return float(np.linalg.norm(A - B) / max(np.linalg.norm(B), 1e-300))


def _random_shells(rng: np.random.Generator, size: int) -> Tuple[ShellOperator, ChannelData]:
    g = random_graph(rng, size)
    so = extract_shell_operator(g, bfs_partition(g, int(rng.integers(size))))
    return so, channel_decomposition(so)


def _random_z(rng: np.random.Generator) -> complex:
    sign = 1 if rng.random() < 0.5 else -1
    return complex(rng.uniform(-2, 2), sign * rng.uniform(0.1, 2))


def _fold(so, cd, z, n, compose_fn: ComposeFn) -> BoundaryData:
    acc = shell_data(so, cd, 0, z)
    for k in range(1, n + 1):
        acc = compose_fn(acc, shell_data(so, cd, k, z))
    return acc


def _line_data(rng: np.random.Generator, q: int, r: int, symmetric: bool = False) -> BoundaryData:
    # Hermitian data at a real lambda in the widest spectral gap, or
    # complex-symmetric data of a real operator at complex z
    size = q + r + 2
    if symmetric:
        H = rng.standard_normal((size, size))
        H = 0.5 * (H + H.T)
        C = rng.standard_normal((size, q + r))
        z = complex(rng.uniform(-1, 1), rng.uniform(0.2, 1))
    else:
        H = random_hermitian(rng, size)
        C = complex_gaussian(rng, (size, q + r))
        w = _la.eigvalsh(H)
        gap = int(np.argmax(np.diff(w)))
        z = complex(0.5 * (w[gap] + w[gap + 1]))
    X = _la.solve(H - z * np.eye(size), C)
    return BoundaryData.from_matrix(C.conj().T @ X, q, z)


ANTITREE_EDGES = ((0, 1), (0, 2), (1, 3), (2, 3))
ANTITREE_SHELLS = ((0,), (1, 2), (3,))
MIDDLE_ROOTED_SHELLS = ((1, 2), (0, 3))


def _antitree_graph() -> WeightedGraph:
    M = np.zeros((4, 4))
    for x, y in ANTITREE_EDGES:
        M[x, y] = M[y, x] = -1.0
    return WeightedGraph.from_matrix(M)


def _antitree(shells=ANTITREE_SHELLS):
    # shells 1, 2, 1: the antisymmetric vector on the middle pair is an
    # eigenvector at 0 invisible to the forward channel of shell 1
    so = extract_shell_operator(_antitree_graph(), ShellPartition.from_lists(shells))
    return so, channel_decomposition(so)


def _compact_mass(vertex: int) -> float:
    """Weight at a vertex of the eigenvectors at 0 that vanish on vertices 0 and 3."""
    w, U = _la.eigh(_antitree_graph().matrix())
    zero = U[:, np.abs(w) <= 1e-9]
    _, s, Vh = _la.svd(zero[[0, 3]])
    rank = int(np.sum(s > 1e-9))
    compact = zero @ Vh[rank:].conj().T
    return float(np.linalg.norm(compact[vertex]) ** 2)


def _mass_at_zero(masses) -> float:
    return sum(m for lam, m in masses if abs(lam) <= 1e-9)


def _stair(depth: int, c0: float = 0.0, cap: int = 3, seed: int = 0) -> ModelSpec:
    potential = {"dist": "gauss_herm", "c0": c0, "exponent": 1.0} if c0 else {"dist": "none"}
    return ModelSpec(
        kind="stair",
        depth=depth,
        widths={"rule": "min_linear", "cap": cap},
        potential=potential,
        seed=seed,
    )


def _chain(depth: int) -> ModelSpec:
    return ModelSpec(kind="stair", depth=depth)


# ---------------------------------------------------------------------------
# Properties
# ---------------------------------------------------------------------------

_PROPERTIES: List[Tuple[str, str, float, Callable]] = []


def _property(suite: str, name: str, threshold: float):
    def register(fn):
        _PROPERTIES.append((suite, name, threshold, fn))
        return fn

    return register


@_property("algebra", "composition_identity", 1e-8)
def _composition_identity(rng, compose_fn):
    worst = 0.0
    graphs = 4
    for _ in range(graphs):
        so, cd = _random_shells(rng, int(rng.integers(8, 17)))
        for _ in range(3):
            z = _random_z(rng)
            for n in range(so.depth + 1):
                folded = _fold(so, cd, z, n, compose_fn)
                direct = boundary_data_direct(so, cd, 0, n, z)
                worst = max(worst, _rel(folded.matrix(), direct.matrix()))
    return worst, f"{graphs} graphs, 3 z each, every depth"


@_property("algebra", "associativity", 1e-9)
def _associativity(rng, compose_fn):
    worst = 0.0
    for _ in range(20):
        q, r, s, t = (int(x) for x in rng.integers(1, 4, size=4))
        Q, R, S = random_upper_data(rng, q, r), random_upper_data(rng, r, s), random_upper_data(rng, s, t)
        left = compose_fn(compose_fn(Q, R), S)
        right = compose_fn(Q, compose_fn(R, S))
        worst = max(worst, _rel(left.matrix(), right.matrix()))
    return worst, "20 random triples from the upper cone"


@_property("algebra", "cone_closure", 0)
def _cone_closure(rng, compose_fn):
    outside = 0
    for _ in range(20):
        q, r, s = (int(x) for x in rng.integers(1, 4, size=3))
        if not compose_fn(random_upper_data(rng, q, r), random_upper_data(rng, r, s)).in_upper_cone():
            outside += 1
    return outside, "compositions outside the upper cone (of 20)"


@_property("algebra", "conjugate_symmetry", 1e-12)
def _conjugate_symmetry(rng, compose_fn):
    worst = 0.0
    for _ in range(3):
        so, cd = _random_shells(rng, int(rng.integers(6, 13)))
        z = _random_z(rng)
        for n in range(so.depth + 1):
            R = boundary_data_direct(so, cd, 0, n, z)
            R_bar = boundary_data_direct(so, cd, 0, n, z.conjugate())
            worst = max(worst, _rel(R_bar.matrix(), R.conjugate().matrix()))
    return worst, "data at conj(z) against adjoint blocks"


@_property("algebra", "block_inverse_oracle", 1e-9)
def _block_inverse_oracle(rng, compose_fn):
    worst = 0.0
    for _ in range(6):
        so, cd = _random_shells(rng, int(rng.integers(8, 17)))
        if so.depth < 1:
            continue
        z = _random_z(rng)
        m = int(rng.integers(so.depth))
        n = int(rng.integers(m + 1, so.depth + 1))
        eye1 = np.eye(sum(so.sizes[: m + 1]))
        eye2 = np.eye(sum(so.sizes[m + 1 : n + 1]))
        oracle = compose_by_block_inverse(
            so.block(0, m) - z * eye1,
            so.block(m + 1, n) - z * eye2,
            cd.top(so, 0, m),
            cd.bottom(so, 0, m),
            cd.top(so, m + 1, n),
            cd.bottom(so, m + 1, n),
        )
        composed = compose_fn(boundary_data_direct(so, cd, 0, m, z), boundary_data_direct(so, cd, m + 1, n, z))
        worst = max(worst, _rel(composed.matrix(), oracle.matrix()))
    return worst, "one big block inverse against the composition"


@_property("algebra", "product_containment", 1e-9)
def _product_containment(rng, compose_fn):
    so, cd = build_model(_stair(5, c0=0.5, seed=int(rng.integers(1000))))
    worst = 0.0
    for _ in range(4):
        z = complex(rng.uniform(-1, 1), rng.uniform(0.1, 1))
        m = int(rng.integers(so.depth))
        n = int(rng.integers(m + 1, so.depth + 1))
        Q = boundary_data_direct(so, cd, 0, m, z)
        R = boundary_data_direct(so, cd, m + 1, n, z)
        composed = compose_fn(Q, R)
        ts_q, ts_r = transfer_space(Q), transfer_space(R)
        for _ in range(5):
            T = random_member(ts_r, rng) @ random_member(ts_q, rng)
            worst = max(worst, membership_check(T, composed).worst)
    return worst, "products of members against the composed data"


@_property("algebra", "symplectic", 1e-10)
def _symplectic(rng, compose_fn):
    worst = 0.0
    for symmetric in (False, True):
        for _ in range(10):
            q = int(rng.integers(1, 3))
            ts = transfer_space(_line_data(rng, q, int(rng.integers(q, 4)), symmetric))
            members = [random_member(ts, rng) for _ in range(5)]
            for T1 in members:
                for T2 in members:
                    worst = max(worst, symplectic_residual(T1, T2, real=symmetric))
    return worst, "member pairs at real lambda, and transposed at complex z for real operators"


@_property("algebra", "right_inverse_products", 1e-10)
def _right_inverse_products(rng, compose_fn):
    worst = 0.0
    mismatched = []
    for n in range(1, 5):
        for m in range(1, n + 1):
            for l in range(1, m + 1):
                for _ in range(2):
                    A = complex_gaussian(rng, (l, m))
                    B = complex_gaussian(rng, (m, n))
                    check = right_inverse_product_check(A, B, rng)
                    worst = max(worst, check.residual)
                    if not check.dimension_matches:
                        mismatched.append((l, m, n))
    if mismatched:
        return float("inf"), f"affine dimension mismatch at {mismatched[:5]}"
    return worst, "all l <= m <= n <= 4, dimensions match"


@_property("algebra", "dirichlet_surjectivity", 1e-8)
def _dirichlet_surjectivity(rng, compose_fn):
    worst = 0.0
    for _ in range(10):
        q = int(rng.integers(1, 3))
        r = int(rng.integers(q, 4))
        Q, R = random_upper_data(rng, 1, q), random_upper_data(rng, q, r)
        composed = compose_fn(Q, R)
        B_hat = sample_right_inverse(composed.beta, rng)
        x, _, u = surjectivity_witness(Q, R, B_hat)
        target = np.vstack([B_hat, composed.delta @ B_hat])
        worst = max(worst, float(np.linalg.norm(u - target)), float(np.linalg.norm(Q.beta @ x - 1)))
    return worst, "composed Dirichlet vectors realized as products"


@_property("weyl", "nesting", 0)
def _nesting(rng, compose_fn):
    bad = []
    for spec in (_chain(12), _stair(8, c0=0.5, seed=int(rng.integers(1000)))):
        so, cd = build_model(spec)
        for z in (1j, 0.5 + 0.3j):
            table = limit_point_diagnostic(so, cd, z, range(spec.depth + 1))
            if not table.radii_nonincreasing(1e-12):
                bad.append((spec.kind, z))
    return len(bad), f"radius increases at {bad}" if bad else "radii non-increasing"


@_property("weyl", "containment", 0)
def _containment(rng, compose_fn):
    spec = ModelSpec(
        kind="stair",
        depth=3,
        widths={"rule": "constant", "s": 2},
        a=(0.0, 0.5),
        potential={"dist": "gauss_herm", "c0": 0.5},
        seed=int(rng.integers(1000)),
    )
    so, cd = build_model(spec)
    R, _ = sweep(so, cd, 0.3 + 0.5j, spec.depth)
    disc = weyl_disc(R, spec.depth)
    points = sample_disc(R, count=200, seed=int(rng.integers(1000)))
    outside = sum(not disc.contains(w) for w in points)
    return outside, f"{len(points)} samples, fill ratio {fill_ratio(disc, points):.3f}"


@_property("weyl", "radius_duality", 1e-8)
def _radius_duality(rng, compose_fn):
    worst = 0.0
    so, cd = build_model(_stair(4, c0=0.5, seed=int(rng.integers(1000))))
    for _ in range(3):
        z = complex(rng.uniform(-1, 1), rng.uniform(0.2, 1))
        for n in range(1, so.depth + 1):
            disc = weyl_disc(boundary_data_direct(so, cd, 0, n, z))
            _, upper = min_solution_norm(so, cd, n, z)
            _, lower = min_solution_norm(so, cd, n, z.conjugate())
            expected = 1.0 / (4 * z.imag**2 * disc.radius**2)
            worst = max(worst, abs(upper * lower - expected) / expected)
    return worst, "minimal solution norms at z and conj(z) against the radius"


@_property("weyl", "single_site", 1e-12)
def _single_site(rng, compose_fn):
    so, cd = build_model(_chain(0))
    disc = weyl_disc(shell_data(so, cd, 0, 1j))
    return max(abs(disc.center - 0.5j), abs(disc.radius - 0.5)), "center i/2, radius 1/2"


@_property("weyl", "free_chain_limit", 1e-3)
def _free_chain_limit(rng, compose_fn):
    so, cd = build_model(_chain(60))
    R, _ = sweep(so, cd, 1j, so.depth)
    return abs(weyl_disc(R).center - free_jacobi_m(1j)), "center at z = i against m(i)"


@_property("spectral", "triple_equality", 1e-8)
def _triple_equality(rng, compose_fn):
    specs = [
        _chain(20),
        _stair(8, c0=0.4, seed=int(rng.integers(1000))),
        ModelSpec(
            kind="strip",
            depth=6,
            cross_section=((0.3, 0.2), (0.2, -0.3)),
            potential={"dist": "gauss_herm", "c0": 0.3},
            seed=int(rng.integers(1000)),
        ),
    ]
    grid = np.linspace(-1.43, 1.41, 40)
    worst = 0.0
    count = 0
    for spec in specs:
        so, cd = build_model(spec)
        est = density_curve(so, cd, grid, spec.depth, masses=False)
        for d, norm, s, flag in zip(est.density, est.min_norm, est.stieltjes, est.flags):
            if flag != "ok":
                continue
            count += 1
            worst = max(worst, abs(d - s.imag / np.pi), abs(d * np.pi * norm - 1))
    return worst, f"{count} ok grid points over {len(specs)} models"


@_property("spectral", "mass_bound", 0)
def _mass_bound(rng, compose_fn):
    totals = []
    for spec, grid in ((_chain(40), np.linspace(-2.1, 2.1, 401)), (_chain(0), np.linspace(-40, 40, 2001))):
        so, cd = build_model(spec)
        totals.append(mass_total(density_curve(so, cd, grid, spec.depth)))
    excess = max(max(0.9 - t, t - 1.02, 0.0) for t in totals)
    return excess, "totals " + ", ".join(f"{t:.4f}" for t in totals) + " in [0.9, 1.02]"


@_property("spectral", "point_masses", 1e-10)
def _point_masses(rng, compose_fn):
    rooted = point_mass_detect(*_antitree(), 1)
    middle = _antitree(MIDDLE_ROOTED_SHELLS)
    shallow = point_mass_detect(*middle, 0)
    deep = point_mass_detect(*middle, 1)
    worst = abs(_mass_at_zero(rooted) - _compact_mass(0))
    worst = max(worst, abs(_mass_at_zero(shallow) - _compact_mass(1)))
    for lam0, mass in shallow:
        later = sum(m for lam, m in deep if abs(lam - lam0) <= 1e-9)
        worst = max(worst, mass - later)
    if _mass_at_zero(shallow) <= 0:
        return float("inf"), "middle-rooted antitree shows no mass at 0"
    stair_so, stair_cd = build_model(_stair(6))
    found = point_mass_detect(stair_so, stair_cd, 6)
    if found:
        return float("inf"), f"stair reports masses {found}"
    return worst, "antitree masses at 0 against the eigenvector oracle; none on the stair"


@_property("spectral", "herglotz", 1e-12)
def _herglotz(rng, compose_fn):
    worst = 0.0
    for _ in range(4):
        so, cd = _random_shells(rng, int(rng.integers(6, 13)))
        z = complex(rng.uniform(-2, 2), rng.uniform(0.05, 2))
        spectra = shell_spectra(so, cd)
        for n in range(so.depth + 1):
            R, _ = sweep(so, cd, z, n, spectra=spectra)
            worst = max(worst, -averaged_stieltjes(R).imag)
    return worst, "negative imaginary part of the averaged Stieltjes transform"


@_property("spectral", "stieltjes_panel", 0)
def _stieltjes_panel(rng, compose_fn):
    so, cd = build_model(_chain(40))
    rows = stieltjes_panel(so, cd, [1j, 0.5 + 0.5j], [5, 10, 20, 40])
    rises = 0
    for a, b in zip(rows, rows[1:]):
        if a.z == b.z and b.error > a.error + 1e-12:
            rises += 1
    return rises, "error against the deepest resolvent never increases"


@_property("spectral", "entropy_oracle", 1e-6)
def _entropy_oracle(rng, compose_fn):
    grid = np.linspace(-1, 1, 2001)
    density = np.sqrt(4 - grid**2) / (2 * np.pi)
    expected = np.log(2 * np.pi) - (3 * np.log(3) - 2) / 2
    return abs(entropy_criterion(grid, density).value - expected), "semicircle on [-1, 1]"


@_property("models", "isometry", 1e-12)
def _isometry(rng, compose_fn):
    means = list(rng.uniform(-0.5, 0.5, size=3))
    lam = float(rng.uniform(-0.5, 0.5))
    worst = 0.0
    for s_prev, s_cur in ((1, 1), (1, 2), (2, 2), (2, 3)):
        R, _ = conjugated_step(means, lam, s_prev, s_cur)
        u = complex_gaussian(rng, (2 * s_prev,))
        worst = max(worst, abs(np.linalg.norm(R @ u) - np.linalg.norm(u)))
    return worst, "free conjugated step preserves norms"


@_property("models", "tree_unitarity", 1e-12)
def _tree_unitarity(rng, compose_fn):
    worst = 0.0
    for n in range(9):
        U = mean_field_unitary(n)
        worst = max(worst, float(np.linalg.norm(U.conj().T @ U - np.eye(2**n))))
    return worst, "U_n for n <= 8"


@_property("models", "tree_reduction", 1e-10)
def _tree_reduction(rng, compose_fn):
    return tree_reduction_check(6), "interior conjugation at depth 6"


@_property("models", "tree_density", 1e-8)
def _tree_density(rng, compose_fn):
    grid = np.linspace(-2.47, 2.53, 9)
    tree = ModelSpec(kind="tree", depth=5)
    stair = ModelSpec(kind="stair", depth=5, widths={"rule": "doubling"}, hopping=float(np.sqrt(2)))
    curves = []
    for spec in (tree, stair):
        so, cd = build_model(spec)
        curves.append(density_curve(so, cd, grid, spec.depth, masses=False))
    ok = curves[0].ok & curves[1].ok
    diff = np.abs(np.asarray(curves[0].density) - np.asarray(curves[1].density))[ok]
    return float(diff.max()) if diff.size else float("inf"), f"{int(ok.sum())} points"


@_property("models", "free_chain_density", 1e-8)
def _free_chain_density(rng, compose_fn):
    depth = 12
    grid = np.linspace(-1.77, 1.83, 25)
    so, cd = build_model(_chain(depth))
    est = density_curve(so, cd, grid, depth, masses=False)
    ok = est.ok
    diff = np.abs(np.asarray(est.density) - free_jacobi_density(grid, depth))[ok]
    return float(diff.max()) if diff.size else float("inf"), "closed form inside the band"


@_property("models", "step_bound", 0)
def _step_bound(rng, compose_fn):
    spec = _stair(30, c0=0.3, seed=int(rng.integers(1000)))
    result = fourth_moment_run(spec, [-0.5, 0.4], [10, 20, 30], trials=16)
    excess = result.fourth_moment - (result.bound_product + 2 * result.stderr)
    return float(max(excess.max(), 0.0)), "E|u_n|^4 under the product bound within 2 SE"


@_property("models", "step_ratio", 0)
def _step_ratio(rng, compose_fn):
    spec = _stair(30, c0=0.3, seed=int(rng.integers(1000)))
    result = fourth_moment_run(spec, [-0.5, 0.4], [30], trials=16)
    return result.step_excess(), "E|u_n|^4 / E|u_{n-1}|^4 under b_n within 2 SE"


@_property("models", "zero_potential", 1e-12)
def _zero_potential(rng, compose_fn):
    result = fourth_moment_run(_stair(20), [-0.3, 0.6], [5, 20], trials=16)
    return float(np.abs(result.fourth_moment - 1).max()), "free iteration keeps |u|^4 = 1"


@_property("models", "summability", 1.25)
def _summability(rng, compose_fn):
    seed = int(rng.integers(1000))
    short = summability_proxy(_stair(50, c0=0.3, seed=seed))
    long = summability_proxy(_stair(100, c0=0.3, seed=seed))
    return long.total / short.total, f"totals {short.total:.4f} -> {long.total:.4f} on doubling depth"


# ---------------------------------------------------------------------------
# Faults and runner
# ---------------------------------------------------------------------------


def _sign_flipped_compose(Q: BoundaryData, R: BoundaryData) -> BoundaryData:
    # correction term of alpha with the wrong sign
    C = compose(Q, R)
    return BoundaryData(alpha=2 * Q.alpha - C.alpha, beta=C.beta, gamma=C.gamma, delta=C.delta, z=C.z)


FAULTS = {"sign": _sign_flipped_compose}


def run_suites(suite: str = "all", seed: int = 0, fault: Optional[str] = None) -> SuiteResult:
    """Run the named property suite (or all of them).

    Args:
        suite: "all", "algebra", "weyl", "spectral" or "models"
        seed: Master seed; each property draws from its own child stream
        fault: Inject a known defect into the composition under test ("sign")

    Returns:
        SuiteResult with one entry per property
    """
    if suite != "all" and suite not in SUITES:
        raise ValueError(f"Invalid suite: {suite}. Use 'all' or one of {', '.join(SUITES)}")
    if fault is not None and fault not in FAULTS:
        raise ValueError(f"Invalid fault: {fault}. Use one of {', '.join(FAULTS)}")
    compose_fn = FAULTS[fault] if fault else compose

    t0 = time.time()
    entries = []
    for index, (name_suite, name, threshold, fn) in enumerate(_PROPERTIES):
        if suite != "all" and name_suite != suite:
            continue
        rng = np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(index,)))
        try:
            residual, detail = fn(rng, compose_fn)
            residual = float(residual)
            passed = bool(residual <= threshold)
        except (ShellSpecError, np.linalg.LinAlgError, ValueError) as e:
            residual, detail, passed = float("inf"), f"{type(e).__name__}: {e}", False
        logger.info(f"{name_suite}/{name}: residual {residual:.3g} ({'pass' if passed else 'FAIL'})")
        entries.append(PropertyEntry(name, name_suite, passed, residual, threshold, detail))

    passed = sum(e.passed for e in entries)
    return SuiteResult(
        entries=entries,
        total=len(entries),
        passed=passed,
        failed=len(entries) - passed,
        elapsed_ms=(time.time() - t0) * 1000,
        fault=fault,
    )


# EOF
