#!/usr/bin/env python3
# Timestamp: 2026-10-19
"""Built-in random models: coupled wires (stair), binary tree and strip.

Every model is a free nearest-neighbour part plus an independent random
shell potential V_n = c_n X_n with c_n = c0 * max(n, 1)^(-p) and X_n a
Hermitian random matrix normalized to E|X_n|_F^2 = 1.

Inside the common band, the free transfer step of the stair is an
isometry after conjugating with Q_n = [[e^{iK_n}, e^{-iK_n}], [1, 1]],
A_n - lambda = 2 cos K_n. The Monte Carlo harness iterates
u_n = (R_n + V_n) u_{n-1} in that frame and tracks E|u_n|^4 against the
product of per-step bound factors.
"""

import json as _json
import logging
from dataclasses import dataclass as _dataclass
from dataclasses import field as _field
from pathlib import Path as _Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import scipy.linalg as _la

from .config import Config
from .errors import OutsideBand, SpecInvalid
from .graph import (
    ChannelData,
    ShellOperator,
    WeightedGraph,
    bfs_partition,
    channel_decomposition,
    extract_shell_operator,
    group_shells,
    identity_channels,
)
from .numerics import random_hermitian
from .pool import run_ordered

__all__ = [
    "ModelSpec",
    "McResult",
    "SummabilityReport",
    "KINDS",
    "build_model",
    "shell_noise",
    "band_interval",
    "bands",
    "mean_field_unitary",
    "tree_reduction_check",
    "conjugation_frame",
    "conjugated_step",
    "conjugated_product",
    "fourth_moment_run",
    "summability_proxy",
]

logger = logging.getLogger(__name__)

KINDS = ("stair", "tree", "strip", "custom")
WIDTH_RULES = ("constant", "min_linear", "doubling", "list")
DISTRIBUTIONS = {
    "gauss_herm": "gauss_herm",
    "gaussian-hermitian": "gauss_herm",
    "diag_iid": "diag_iid",
    "diagonal-iid": "diag_iid",
    "none": "none",
}
BAND_MARGIN = 0.05
MIN_TRIALS = 16


# ---------------------------------------------------------------------------
# Specs
# ---------------------------------------------------------------------------


@_dataclass(frozen=True, eq=False)
class ModelSpec:
    """Parameters of a built-in model.

    widths: {"rule": "constant", "s": 2} | {"rule": "min_linear", "cap": 8}
        | {"rule": "doubling"} | {"rule": "list", "values": [...]}
    potential: {"dist": "gauss_herm" | "diag_iid" | "none", "c0": 0.3, "exponent": 1.0}
    """

    kind: str
    depth: int
    widths: Dict = _field(default_factory=lambda: {"rule": "constant", "s": 1})
    a: Tuple[float, ...] = (0.0,)
    potential: Dict = _field(default_factory=lambda: {"dist": "none"})
    seed: int = 0
    hopping: float = 1.0
    cross_section: Optional[Tuple[Tuple[complex, ...], ...]] = None
    graph: Optional[Dict] = None
    root: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise SpecInvalid(f"Invalid kind: {self.kind}. Use one of {', '.join(KINDS)}")
        if self.depth < 0:
            raise SpecInvalid(f"depth must be >= 0, got {self.depth}")
        if not self.hopping > 0:
            raise SpecInvalid(f"hopping must be positive, got {self.hopping}")
        dist = self.potential.get("dist", "none")
        if dist not in DISTRIBUTIONS:
            raise SpecInvalid(f"Invalid potential distribution: {dist}")
        if DISTRIBUTIONS[dist] != "none":
            if float(self.potential.get("c0", 0.0)) < 0:
                raise SpecInvalid("potential c0 must be >= 0")
            if float(self.potential.get("exponent", 1.0)) <= 0.5:
                logger.warning(
                    f"Decay exponent {self.potential.get('exponent', 1.0)} <= 1/2: "
                    "the squared couplings are not summable"
                )
        if self.kind == "custom" and self.graph is None:
            raise SpecInvalid("Custom models need a graph")
        if self.kind == "stair":
            widths = self.widths_list()
            if any(b < a for a, b in zip(widths, widths[1:])):
                raise SpecInvalid(f"Stair widths must be non-decreasing, got {widths}")
            means = self.means(max(widths))
            if max(means) - min(means) >= 4 * self.hopping:
                raise SpecInvalid(
                    f"Wire means spread {max(means) - min(means):.3g} leaves no common band"
                )

    @property
    def dist(self) -> str:
        return DISTRIBUTIONS[self.potential.get("dist", "none")]

    def decay(self, n: int) -> float:
        """c_n = c0 * max(n, 1)^(-p)."""
        if self.dist == "none":
            return 0.0
        c0 = float(self.potential.get("c0", 0.0))
        p = float(self.potential.get("exponent", 1.0))
        return c0 * max(n, 1) ** (-p)

    def width(self, n: int) -> int:
        rule = self.widths.get("rule", "constant")
        if self.kind == "tree":
            return 2**n
        if self.kind == "strip":
            return len(self.section())
        if rule == "constant":
            return int(self.widths.get("s", 1))
        if rule == "min_linear":
            return min(n + 1, int(self.widths.get("cap", 8)))
        if rule == "doubling":
            return 2**n
        if rule == "list":
            values = list(self.widths.get("values", []))
            if not values:
                raise SpecInvalid("Width rule 'list' needs values")
            return int(values[min(n, len(values) - 1)])
        raise SpecInvalid(f"Invalid width rule: {rule}. Use one of {', '.join(WIDTH_RULES)}")

    def widths_list(self) -> List[int]:
        """s_0..s_{N+1}; the last one sizes the trailing connection."""
        widths = [self.width(n) for n in range(self.depth + 2)]
        if min(widths) < 1:
            raise SpecInvalid(f"Widths must be positive, got {widths}")
        return widths

    def means(self, count: int) -> List[float]:
        a = [float(x) for x in self.a] or [0.0]
        if len(a) == 1:
            return a * count
        if len(a) < count:
            raise SpecInvalid(f"Need {count} wire means, got {len(a)}")
        return a[:count]

    def section(self) -> np.ndarray:
        """Cross-section matrix A of a strip (default diag(a))."""
        if self.cross_section is not None:
            A = np.asarray(self.cross_section, dtype=complex)
            if A.ndim != 2 or A.shape[0] != A.shape[1]:
                raise SpecInvalid(f"cross_section must be square, got {A.shape}")
            if np.linalg.norm(A - A.conj().T) > 1e-12 * (1 + np.linalg.norm(A)):
                raise SpecInvalid("cross_section must be Hermitian")
            return A
        return np.diag(np.asarray(self.a, dtype=float)).astype(complex)

    def to_dict(self) -> dict:
        data = {
            "kind": self.kind,
            "depth": self.depth,
            "widths": dict(self.widths),
            "a": list(self.a),
            "potential": dict(self.potential),
            "seed": self.seed,
            "hopping": self.hopping,
        }
        if self.cross_section is not None:
            data["cross_section"] = [
                [[complex(x).real, complex(x).imag] for x in row] for row in self.cross_section
            ]
        if self.graph is not None:
            data["graph"] = self.graph
            data["root"] = self.root
        return data

    @classmethod
    def from_dict(cls, data: dict) -> "ModelSpec":
        try:
            section = data.get("cross_section")
            if section is not None:
                section = tuple(
                    tuple(complex(*x) if isinstance(x, (list, tuple)) else complex(x) for x in row)
                    for row in section
                )
            return cls(
                kind=str(data["kind"]),
                depth=int(data["depth"]),
                widths=dict(data.get("widths", {"rule": "constant", "s": 1})),
                a=tuple(float(x) for x in data.get("a", [0.0])),
                potential=dict(data.get("potential", {"dist": "none"})),
                seed=int(data.get("seed", 0)),
                hopping=float(data.get("hopping", 1.0)),
                cross_section=section,
                graph=data.get("graph"),
                root=int(data.get("root", 0)),
            )
        except (KeyError, TypeError, ValueError) as e:
            if isinstance(e, SpecInvalid):
                raise
            raise SpecInvalid(f"Malformed model spec: {e}") from None

    @classmethod
    def load(cls, path: Union[str, _Path]) -> "ModelSpec":
        try:
            data = _json.loads(_Path(path).read_text())
        except _json.JSONDecodeError as e:
            raise SpecInvalid(f"Invalid JSON in {path}: {e}") from None
        return cls.from_dict(data)


# ---------------------------------------------------------------------------
# Assembly
# ---------------------------------------------------------------------------


def _draw(rng: np.random.Generator, dist: str, size: int) -> np.ndarray:
    if dist == "gauss_herm":
        return random_hermitian(rng, size, np.sqrt(2.0) / size)
    if dist == "diag_iid":
        return np.diag(rng.standard_normal(size) / np.sqrt(size)).astype(complex)
    return np.zeros((size, size), dtype=complex)


def shell_noise(
    spec: ModelSpec, rng: np.random.Generator, sizes: Optional[Sequence[int]] = None
) -> List[np.ndarray]:
    """Random parts c_n X_n for n = 0..depth, drawn in shell order."""
    sizes = list(sizes) if sizes is not None else spec.widths_list()[: spec.depth + 1]
    return [spec.decay(n) * _draw(rng, spec.dist, s) for n, s in enumerate(sizes)]


def _stair_connection(rows: int, cols: int, hopping: float) -> np.ndarray:
    W = np.zeros((rows, cols), dtype=complex)
    W[:cols, :cols] = -hopping * np.eye(cols)
    return W


def _tree_connection(n: int, hopping: float) -> np.ndarray:
    # parent j of shell n feeds children 2j and 2j+1 of shell n+1
    W = np.zeros((2 ** (n + 1), 2**n), dtype=complex)
    for j in range(2**n):
        W[2 * j, j] = W[2 * j + 1, j] = -hopping
    return W


def _free_blocks(spec: ModelSpec) -> Tuple[List[np.ndarray], List[np.ndarray]]:
    widths = spec.widths_list()
    h = spec.hopping
    if spec.kind == "stair":
        means = spec.means(max(widths))
        potentials = [np.diag(means[:s]).astype(complex) for s in widths[:-1]]
        connections = [_stair_connection(widths[n + 1], widths[n], h) for n in range(spec.depth + 1)]
    elif spec.kind == "tree":
        potentials = [np.zeros((2**n, 2**n), dtype=complex) for n in range(spec.depth + 1)]
        connections = [_tree_connection(n, h) for n in range(spec.depth + 1)]
    else:
        A = spec.section()
        s = A.shape[0]
        potentials = [A.copy() for _ in range(spec.depth + 1)]
        connections = [-h * np.eye(s, dtype=complex) for _ in range(spec.depth + 1)]
    return potentials, connections


def _custom_model(spec: ModelSpec, rng) -> Tuple[ShellOperator, ChannelData]:
    graph = spec.graph
    g = WeightedGraph.load(graph) if isinstance(graph, str) else WeightedGraph.from_dict(graph)
    so = extract_shell_operator(g, bfs_partition(g, spec.root))
    cd = channel_decomposition(so)
    ranks = cd.ranks[1:-1] if so.tail.shape[0] == 0 else cd.ranks[1:]
    if any(b < a for a, b in zip(ranks, ranks[1:])):
        so, grouping = group_shells(so)
        logger.info(f"Custom graph regrouped into {len(grouping)} blocks")
    if spec.dist != "none":
        noise = shell_noise(spec, rng, so.sizes)
        so = ShellOperator(
            potentials=tuple(V + X for V, X in zip(so.potentials, noise)),
            connections=so.connections,
        )
    so = so.truncate(min(spec.depth, so.depth))
    return so, channel_decomposition(so)


def build_model(spec: ModelSpec) -> Tuple[ShellOperator, ChannelData]:
    """Shell operator and channels of the model, potential drawn from spec.seed.

    Built-in kinds carry the real next connection W_{N+1} and use the
    channels Phi_n = 1, Upsilon_{n+1} = -W_{n+1}; the root is the first
    vertex of shell 0.
    """
    rng = np.random.default_rng(spec.seed)
    if spec.kind == "custom":
        return _custom_model(spec, rng)
    potentials, connections = _free_blocks(spec)
    noise = shell_noise(spec, rng)
    so = ShellOperator(
        potentials=tuple(V + X for V, X in zip(potentials, noise)),
        connections=tuple(connections),
    )
    return so, identity_channels(so)


def bands(spec: ModelSpec) -> List[Tuple[float, float]]:
    """Spectral bands of the free part (one per wire or cross-section eigenvalue)."""
    h = spec.hopping
    if spec.kind == "tree":
        edge = 2 * np.sqrt(2.0) * h
        return [(-edge, edge)]
    if spec.kind == "strip":
        means = _la.eigvalsh(spec.section())
    elif spec.kind == "stair":
        means = spec.means(max(spec.widths_list()))
    else:
        raise SpecInvalid("Custom graphs have no built-in band structure")
    return [(float(a - 2 * h), float(a + 2 * h)) for a in means]


def band_interval(spec: ModelSpec) -> Tuple[float, float]:
    """Intersection of the open bands: (-2h + max a, 2h + min a)."""
    found = bands(spec)
    return max(lo for lo, _ in found), min(hi for _, hi in found)


# ---------------------------------------------------------------------------
# Tree reduction
# ---------------------------------------------------------------------------


def mean_field_unitary(n: int) -> np.ndarray:
    """U_n with columns chi_n then zeta_k placed in each length-2^k block, k = n..1."""
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    size = 2**n

    def chi(k: int) -> np.ndarray:
        return np.full(2**k, 2 ** (-k / 2))

    columns = [chi(n)]
    for k in range(n, 0, -1):
        zeta = np.concatenate([chi(k - 1), -chi(k - 1)]) / np.sqrt(2.0)
        for block in range(2 ** (n - k)):
            col = np.zeros(size)
            col[block * 2**k : (block + 1) * 2**k] = zeta
            columns.append(col)
    return np.column_stack(columns).astype(complex)


def tree_reduction_check(depth: int) -> float:
    """|U^* Delta_tree U - sqrt(2) Delta_stair| over shells 0..depth.

    U = diag(U_0..U_depth) and the stair has widths 2^n with zero means.
    The identity is exact on every shell of the truncation.
    """
    tree, _ = build_model(ModelSpec(kind="tree", depth=depth))
    stair, _ = build_model(
        ModelSpec(kind="stair", depth=depth, widths={"rule": "doubling"}, hopping=np.sqrt(2.0))
    )
    U = _la.block_diag(*[mean_field_unitary(n) for n in range(depth + 1)])
    lhs = U.conj().T @ tree.full_matrix() @ U
    return float(np.linalg.norm(lhs - stair.full_matrix()))


# ---------------------------------------------------------------------------
# Conjugated transfer recursion
# ---------------------------------------------------------------------------


def _q_matrix(K: np.ndarray) -> np.ndarray:
    E = np.diag(np.exp(1j * K))
    eye = np.eye(K.size)
    return np.block([[E, E.conj()], [eye, eye]])


def _phases(means: Sequence[float], lam: float, margin: float) -> np.ndarray:
    x = (np.asarray(means, dtype=float) - lam) / 2.0
    worst = 2.0 - 2.0 * float(np.max(np.abs(x)))
    if worst < margin:
        raise OutsideBand(f"lambda={lam} is {worst:.3g} from a band edge (need {margin})")
    return np.arccos(x)


def conjugated_step(
    a: Sequence[float],
    lam: float,
    s_prev: int,
    s_cur: int,
    V: Optional[np.ndarray] = None,
    margin: float = BAND_MARGIN,
) -> Tuple[np.ndarray, np.ndarray]:
    """(R, Vc) with Q_cur^{-1} T Q_prev = R + Vc for one stair step.

    R = diag(e^{iK} Y, e^{-iK} Y), Y = [1; 0] is an isometry; Vc is the
    potential V_n carried into the same frame.

    Raises:
        OutsideBand: some |a_j - lambda| is within margin of 2.
    """
    if s_cur < s_prev:
        raise SpecInvalid(f"Widths must be non-decreasing, got {s_prev} -> {s_cur}")
    K_cur = _phases(a[:s_cur], lam, margin)
    K_prev = _phases(a[:s_prev], lam, margin)
    Y = np.zeros((s_cur, s_prev), dtype=complex)
    Y[:s_prev, :s_prev] = np.eye(s_prev)
    E = np.exp(1j * K_cur)[:, None]
    R = _la.block_diag(E * Y, E.conj() * Y)
    if V is None or not np.any(V):
        return R, np.zeros_like(R)
    middle = np.zeros((2 * s_cur, 2 * s_prev), dtype=complex)
    middle[:s_cur, :s_prev] = np.asarray(V, dtype=complex) @ Y
    Vc = _la.solve(_q_matrix(K_cur), middle @ _q_matrix(K_prev))
    return R, Vc


@_dataclass(frozen=True)
class _Frame:
    """Stair frame a model is iterated in: lambda and potentials scaled by 1/h."""

    means: List[float]
    widths: List[int]
    scale: float
    unitaries: Optional[List[np.ndarray]] = None

    def potential(self, n: int, V: np.ndarray) -> np.ndarray:
        if self.unitaries is not None:
            U = self.unitaries[n]
            V = U.conj().T @ V @ U
        return V / self.scale


def conjugation_frame(spec: ModelSpec) -> _Frame:
    """Map a built-in model onto an equivalent stair with unit hopping."""
    widths = spec.widths_list()[: spec.depth + 1]
    if spec.kind == "stair":
        means = [a / spec.hopping for a in spec.means(max(widths))]
        return _Frame(means=means, widths=widths, scale=spec.hopping)
    if spec.kind == "tree":
        scale = np.sqrt(2.0) * spec.hopping
        unitaries = [mean_field_unitary(n) for n in range(spec.depth + 1)]
        return _Frame(means=[0.0] * widths[-1], widths=widths, scale=scale, unitaries=unitaries)
    if spec.kind == "strip":
        w, U = _la.eigh(spec.section())
        unitaries = [U] * (spec.depth + 1)
        means = [float(a) / spec.hopping for a in w]
        return _Frame(means=means, widths=widths, scale=spec.hopping, unitaries=unitaries)
    raise SpecInvalid("Custom graphs have no conjugated frame")


def _steps(frame: _Frame, lam: float, noise: Sequence[np.ndarray]):
    # one (R_n, V_n) pair per shell for which a potential is given
    lam_eff = lam / frame.scale
    s_prev = 1
    for n, (s, V) in enumerate(zip(frame.widths, noise)):
        yield conjugated_step(frame.means, lam_eff, s_prev, s, frame.potential(n, V))
        s_prev = s


def conjugated_product(spec: ModelSpec, lam: float, depth: Optional[int] = None) -> np.ndarray:
    """Q_N^{-1} T_{0,N} Q_{-1} for the spec's own potential draw."""
    depth = spec.depth if depth is None else depth
    frame = conjugation_frame(spec)
    noise = shell_noise(spec, np.random.default_rng(spec.seed))
    product = np.eye(2, dtype=complex)
    for n, (R, Vc) in enumerate(_steps(frame, lam, noise)):
        if n > depth:
            break
        product = (R + Vc) @ product
    return product


# ---------------------------------------------------------------------------
# Monte Carlo
# ---------------------------------------------------------------------------


@_dataclass
class McResult:
    """Fourth-moment estimates E|u_n(lambda)|^4 with jackknife errors."""

    grid: List[float]
    depths: List[int]
    trials: int
    fourth_moment: np.ndarray  # (len(grid), len(depths))
    stderr: np.ndarray
    bound_product: np.ndarray
    step_factor: np.ndarray  # (len(grid), max depth + 1)
    # E|u_n|^4 / E|u_{n-1}|^4 for n = 0..max depth, with |u_{-1}| the start norm
    step_ratio: Optional[np.ndarray] = None
    step_ratio_stderr: Optional[np.ndarray] = None

    def rows(self):
        for i, lam in enumerate(self.grid):
            for j, n in enumerate(self.depths):
                yield lam, n, self.fourth_moment[i, j], self.stderr[i, j], self.bound_product[i, j]

    def within_bound(self, sigmas: float = 2.0) -> bool:
        return bool(np.all(self.fourth_moment <= self.bound_product + sigmas * self.stderr))

    def step_excess(self, sigmas: float = 2.0) -> float:
        """Largest amount by which a one-step ratio exceeds b_n plus sigmas standard errors."""
        if self.step_ratio is None:
            raise ValueError("No per-step ratios recorded")
        ceiling = self.step_factor + sigmas * self.step_ratio_stderr
        return float(max(np.max(self.step_ratio - ceiling), 0.0))

    def steps_within_factor(self, sigmas: float = 2.0) -> bool:
        return self.step_excess(sigmas) == 0.0

    def to_dict(self) -> dict:
        return {
            "grid": list(self.grid),
            "depths": list(self.depths),
            "trials": self.trials,
            "fourth_moment": self.fourth_moment.tolist(),
            "stderr": self.stderr.tolist(),
            "bound_product": self.bound_product.tolist(),
        }


def _jackknife(samples: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    # samples: (trials, ...) -> mean and jackknife standard error of the mean
    n = samples.shape[0]
    total = samples.sum(axis=0)
    leave_one_out = (total[None] - samples) / (n - 1)
    mean = total / n
    spread = ((leave_one_out - leave_one_out.mean(axis=0)) ** 2).sum(axis=0)
    return mean, np.sqrt((n - 1) / n * spread)


def _jackknife_ratio(num: np.ndarray, den: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    # ratio of trial means, with the jackknife error of the ratio estimator
    n = num.shape[0]
    top, bottom = num.sum(axis=0), den.sum(axis=0)
    leave_one_out = (top[None] - num) / (bottom[None] - den)
    spread = ((leave_one_out - leave_one_out.mean(axis=0)) ** 2).sum(axis=0)
    return top / bottom, np.sqrt((n - 1) / n * spread)


def _trial(spec: ModelSpec, frame: _Frame, grid, last: int, start, trial: int):
    rng = np.random.default_rng(np.random.SeedSequence(entropy=spec.seed, spawn_key=(trial,)))
    noise = shell_noise(spec, rng)
    path = np.zeros((len(grid), last + 1))  # |u_n|^4 at every n
    moments = np.zeros((len(grid), last + 1, 3))  # |V|^2, |V|^3, |V|^4
    for i, lam in enumerate(grid):
        u = start.copy()
        for n, (R, Vc) in enumerate(_steps(frame, lam, noise)):
            if n > last:
                break
            u = (R + Vc) @ u
            norm = np.linalg.norm(Vc, 2)
            moments[i, n] = norm**2, norm**3, norm**4
            path[i, n] = np.linalg.norm(u) ** 4
    return path, moments, noise[: last + 1]


def _mean_term(frame: _Frame, lam: float, mean_noise: Sequence[np.ndarray]) -> np.ndarray:
    return np.array([np.linalg.norm(Vc, 2) for _, Vc in _steps(frame, lam, mean_noise)])


def fourth_moment_run(
    spec: ModelSpec,
    grid: Sequence[float],
    depths: Sequence[int],
    trials: int,
    start=(1.0, 0.0),
    workers: Optional[int] = None,
) -> McResult:
    """Estimate E|u_n|^4 along u_n = (R_n + V_n) u_{n-1} from the start vector.

    Each trial draws its potential from SeedSequence(spec.seed, spawn_key=(trial,))
    and the reduction runs in trial order, so results do not depend on
    the worker count. The step factor is
    b_n = 1 + E(6|V|^2 + |V|^4 + 4|V|^3) + 4|E V| in the conjugated frame, and
    the product bound is |u_0|^4 times the running product of b_n.

    Raises:
        OutsideBand: a grid point is outside the common band by the margin.
    """
    if trials < MIN_TRIALS:
        raise ValueError(f"Need at least {MIN_TRIALS} trials, got {trials}")
    depths = sorted(set(int(n) for n in depths))
    if not depths or depths[0] < 0 or depths[-1] > spec.depth:
        raise ValueError(f"Depths must lie in 0..{spec.depth}, got {depths}")
    grid = [float(lam) for lam in grid]
    start = np.asarray(start, dtype=complex).ravel()
    if start.shape != (2,) or not np.linalg.norm(start) > 0:
        raise ValueError(f"Start vector must be a nonzero pair, got {start}")
    frame = conjugation_frame(spec)
    for lam in grid:
        _phases(frame.means[: max(frame.widths)], lam / frame.scale, BAND_MARGIN)

    def _run(t: int):
        return _trial(spec, frame, grid, depths[-1], start, t)

    def _progress(batch) -> None:
        logger.debug(f"Monte Carlo {batch.progress:.0f}% ({batch.completed}/{len(batch.items)})")

    results = run_ordered(_run, range(trials), workers or Config.get_threads(), _progress)
    paths = np.stack([r[0] for r in results])
    moments = np.stack([r[1] for r in results])
    mean_noise = [np.mean([r[2][n] for r in results], axis=0) for n in range(depths[-1] + 1)]

    estimate, stderr = _jackknife(paths[..., depths])
    origin = np.full(paths.shape[:2] + (1,), np.linalg.norm(start) ** 4)
    ratio, ratio_stderr = _jackknife_ratio(paths, np.concatenate([origin, paths[..., :-1]], axis=-1))
    mean_moments = moments.mean(axis=0)
    step = np.empty((len(grid), depths[-1] + 1))
    for i, lam in enumerate(grid):
        drift = _mean_term(frame, lam, mean_noise)
        step[i] = (
            1.0
            + 6 * mean_moments[i, :, 0]
            + 4 * mean_moments[i, :, 1]
            + mean_moments[i, :, 2]
            + 4 * drift
        )
    cumulative = np.cumprod(step, axis=1)
    bound = np.linalg.norm(start) ** 4 * cumulative[:, depths]
    logger.info(f"Monte Carlo: {trials} trials, {len(grid)} points, depth {depths[-1]}")
    return McResult(
        grid=grid,
        depths=depths,
        trials=trials,
        fourth_moment=estimate,
        stderr=stderr,
        bound_product=bound,
        step_factor=step,
        step_ratio=ratio,
        step_ratio_stderr=ratio_stderr,
    )


@_dataclass
class SummabilityReport:
    """Partial sums of |E V_n| + E|V_n|^2 + E|V_n|^4 over the truncation."""

    terms: List[float]
    trials: int

    @property
    def total(self) -> float:
        return float(np.sum(self.terms))

    def to_dict(self) -> dict:
        return {"total": self.total, "terms": list(self.terms), "trials": self.trials}


def summability_proxy(spec: ModelSpec, trials: int = 32) -> SummabilityReport:
    """Sample estimate of sum_n (|E V_n| + E|V_n|^2 + E|V_n|^4), spectral norms."""
    if spec.kind == "custom":
        raise SpecInvalid("Summability needs a built-in model")
    draws = [
        shell_noise(
            spec, np.random.default_rng(np.random.SeedSequence(entropy=spec.seed, spawn_key=(t,)))
        )
        for t in range(trials)
    ]
    terms = []
    for n in range(spec.depth + 1):
        shell = np.stack([d[n] for d in draws])
        norms = np.array([np.linalg.norm(V, 2) for V in shell])
        mean_norm = np.linalg.norm(shell.mean(axis=0), 2)
        terms.append(float(mean_norm + np.mean(norms**2) + np.mean(norms**4)))
    return SummabilityReport(terms=terms, trials=trials)


# EOF
