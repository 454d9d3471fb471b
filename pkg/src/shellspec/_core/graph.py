#!/usr/bin/env python3
# Timestamp: 2026-10-19
"""Graphs, quasi-spherical partitions, shell operators and channels.

A truncation to shells 0..N keeps one trailing connection W_{N+1}. For a
finite graph that is the empty 0 x s_N matrix, so the forward channel of
the last shell has no columns and r_{N+1} = 0; generated models carry the
real next connection instead.
"""

import json as _json
import logging
from dataclasses import dataclass as _dataclass
from dataclasses import field as _field
from pathlib import Path as _Path
from typing import List, Optional, Sequence, Tuple, Union

import networkx as nx
import numpy as np
import scipy.linalg as _la

from .config import TolerancePolicy
from .errors import (
    DimensionMismatch,
    Disconnected,
    GroupingFailed,
    PartitionInvalid,
    SpecInvalid,
    ZeroConnection,
)
from .numerics import _policy, numerical_rank

__all__ = [
    "WeightedGraph",
    "ShellPartition",
    "ShellOperator",
    "ChannelData",
    "A2Report",
    "random_graph",
    "bfs_partition",
    "validate_partition",
    "extract_shell_operator",
    "assemble_matrix",
    "group_shells",
    "channel_decomposition",
    "identity_channels",
    "check_A2",
]

logger = logging.getLogger(__name__)

HERMITIAN_TOL = 1e-12


# ---------------------------------------------------------------------------
# Graphs
# ---------------------------------------------------------------------------


@_dataclass(frozen=True)
class WeightedGraph:
    """Hermitian operator on a finite vertex set.

    Each entry (x, y, w) with x != y stands for <x|H|y> = w and implies
    <y|H|x> = conj(w); list every edge once. Diagonal entries are real.
    """

    vertex_count: int
    entries: Tuple[Tuple[int, int, complex], ...] = ()

    def __post_init__(self):
        if self.vertex_count < 1:
            raise SpecInvalid(f"Graph needs at least one vertex, got {self.vertex_count}")
        for x, y, w in self.entries:
            if not (0 <= x < self.vertex_count and 0 <= y < self.vertex_count):
                raise SpecInvalid(f"Entry ({x}, {y}) outside 0..{self.vertex_count - 1}")
            if x == y and abs(complex(w).imag) > HERMITIAN_TOL:
                raise SpecInvalid(f"Diagonal entry at {x} must be real, got {w}")

    def matrix(self) -> np.ndarray:
        M = np.zeros((self.vertex_count, self.vertex_count), dtype=complex)
        for x, y, w in self.entries:
            w = complex(w)
            if x == y:
                M[x, x] += w.real
            else:
                M[x, y] += w
                M[y, x] += w.conjugate()
        return M

    def to_networkx(self) -> nx.Graph:
        G = nx.Graph()
        G.add_nodes_from(range(self.vertex_count))
        G.add_edges_from((x, y) for x, y, w in self.entries if x != y and w != 0)
        return G

    def is_connected(self) -> bool:
        return nx.is_connected(self.to_networkx())

    @classmethod
    def from_matrix(cls, M) -> "WeightedGraph":
        M = np.asarray(M, dtype=complex)
        if M.shape[0] != M.shape[1]:
            raise DimensionMismatch(f"Adjacency matrix must be square, got {M.shape}")
        if np.linalg.norm(M - M.conj().T) > HERMITIAN_TOL * (1 + np.linalg.norm(M)):
            raise SpecInvalid("Adjacency matrix is not Hermitian")
        entries = []
        for x in range(M.shape[0]):
            if M[x, x] != 0:
                entries.append((x, x, complex(M[x, x].real)))
            for y in range(x + 1, M.shape[0]):
                if M[x, y] != 0:
                    entries.append((x, y, complex(M[x, y])))
        return cls(vertex_count=M.shape[0], entries=tuple(entries))

    @classmethod
    def from_dict(cls, data: dict) -> "WeightedGraph":
        """Build from {"vertices": N, "edges": [[x, y, re, im]], "diagonal": [[x, v]]}."""
        try:
            n = int(data["vertices"])
            entries = []
            for edge in data.get("edges", []):
                x, y, re = int(edge[0]), int(edge[1]), float(edge[2])
                im = float(edge[3]) if len(edge) > 3 else 0.0
                entries.append((x, y, complex(re, im)))
            for x, v in data.get("diagonal", []):
                entries.append((int(x), int(x), complex(float(v))))
        except (KeyError, TypeError, IndexError, ValueError) as e:
            raise SpecInvalid(f"Malformed graph description: {e}") from None
        return cls(vertex_count=n, entries=tuple(entries))

    @classmethod
    def load(cls, path: Union[str, _Path]) -> "WeightedGraph":
        try:
            data = _json.loads(_Path(path).read_text())
        except _json.JSONDecodeError as e:
            raise SpecInvalid(f"Invalid JSON in {path}: {e}") from None
        return cls.from_dict(data)


@_dataclass(frozen=True)
class ShellPartition:
    """Ordered shells S_0..S_N; vertex order inside a shell is fixed."""

    shells: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        seen = set()
        for shell in self.shells:
            if not shell:
                raise PartitionInvalid("Empty shell in partition")
            for v in shell:
                if v in seen:
                    raise PartitionInvalid(f"Vertex {v} appears in two shells")
                seen.add(v)

    @property
    def sizes(self) -> List[int]:
        return [len(s) for s in self.shells]

    @property
    def depth(self) -> int:
        return len(self.shells) - 1

    def shell_of(self) -> dict:
        return {v: n for n, shell in enumerate(self.shells) for v in shell}

    def order(self) -> List[int]:
        return [v for shell in self.shells for v in shell]

    def to_dict(self) -> dict:
        return {"shells": [list(s) for s in self.shells], "sizes": self.sizes}

    @classmethod
    def from_lists(cls, shells: Sequence[Sequence[int]]) -> "ShellPartition":
        return cls(shells=tuple(tuple(int(v) for v in s) for s in shells))


def random_graph(rng: np.random.Generator, size: int, edge_prob: float = 0.2) -> WeightedGraph:
    """Random connected Hermitian graph: a random spanning tree plus G(n, p) edges.

    Edge weights are complex Gaussian, diagonal entries real Gaussian.
    """
    G = nx.gnp_random_graph(size, edge_prob, seed=int(rng.integers(2**31)))
    for v in range(1, size):
        G.add_edge(v, int(rng.integers(v)))
    entries = [(x, y, complex(rng.normal(), rng.normal())) for x, y in sorted(G.edges())]
    entries += [(x, x, complex(rng.normal())) for x in range(size)]
    return WeightedGraph(vertex_count=size, entries=tuple(entries))


def bfs_partition(g: WeightedGraph, root: int) -> ShellPartition:
    """Distance spheres around root, ascending vertex id inside each."""
    if not 0 <= root < g.vertex_count:
        raise SpecInvalid(f"Root {root} outside 0..{g.vertex_count - 1}")
    distances = nx.single_source_shortest_path_length(g.to_networkx(), root)
    if len(distances) < g.vertex_count:
        missing = sorted(set(range(g.vertex_count)) - set(distances))
        raise Disconnected(f"{len(missing)} vertex(es) unreachable from {root}: {missing[:10]}")
    shells: List[List[int]] = [[] for _ in range(max(distances.values()) + 1)]
    for v, d in distances.items():
        shells[d].append(v)
    return ShellPartition.from_lists([sorted(s) for s in shells])


def validate_partition(g: WeightedGraph, p: ShellPartition) -> List[Tuple[int, int]]:
    """Edges joining shells two or more apart (empty for a valid partition)."""
    where = p.shell_of()
    if len(where) != g.vertex_count or set(where) != set(range(g.vertex_count)):
        raise PartitionInvalid("Partition does not cover the graph's vertices")
    violations = []
    for x, y, w in g.entries:
        if x != y and w != 0 and abs(where[x] - where[y]) >= 2:
            violations.append((min(x, y), max(x, y)))
    return sorted(set(violations))


# ---------------------------------------------------------------------------
# Shell operators
# ---------------------------------------------------------------------------


@_dataclass(frozen=True, eq=False)
class ShellOperator:
    """Finite truncation: potentials V_0..V_N and connections W_1..W_{N+1}."""

    potentials: Tuple[np.ndarray, ...]
    connections: Tuple[np.ndarray, ...]

    def __post_init__(self):
        if len(self.connections) != len(self.potentials):
            raise DimensionMismatch(
                f"Need one connection per shell (W_1..W_{{N+1}}), got "
                f"{len(self.connections)} for {len(self.potentials)} shells"
            )
        for n, V in enumerate(self.potentials):
            if V.ndim != 2 or V.shape[0] != V.shape[1] or V.shape[0] == 0:
                raise DimensionMismatch(f"V_{n} must be square and non-empty, got {V.shape}")
            if np.linalg.norm(V - V.conj().T) > HERMITIAN_TOL * (1 + np.linalg.norm(V)):
                raise SpecInvalid(f"V_{n} is not Hermitian")
        for n, W in enumerate(self.connections):
            cols = self.potentials[n].shape[0]
            rows = self.potentials[n + 1].shape[0] if n + 1 < len(self.potentials) else W.shape[0]
            if W.shape != (rows, cols):
                raise DimensionMismatch(f"W_{n + 1} must be {rows} x {cols}, got {W.shape}")

    @classmethod
    def from_blocks(cls, potentials, connections, tail=None) -> "ShellOperator":
        """Build from V_0..V_N and W_1..W_N; tail is W_{N+1} (default empty)."""
        potentials = tuple(np.atleast_2d(np.asarray(V, dtype=complex)) for V in potentials)
        connections = [np.atleast_2d(np.asarray(W, dtype=complex)) for W in connections]
        if tail is None:
            tail = np.zeros((0, potentials[-1].shape[0]), dtype=complex)
        connections.append(np.asarray(tail, dtype=complex).reshape(-1, potentials[-1].shape[0]))
        return cls(potentials=potentials, connections=tuple(connections))

    @property
    def depth(self) -> int:
        return len(self.potentials) - 1

    @property
    def sizes(self) -> List[int]:
        return [V.shape[0] for V in self.potentials]

    @property
    def tail(self) -> np.ndarray:
        return self.connections[-1]

    def offsets(self, m: int, n: int) -> List[int]:
        """Start index of each shell m..n+1 inside H_{m,n}."""
        return list(np.concatenate([[0], np.cumsum(self.sizes[m : n + 1])]).astype(int))

    def block(self, m: int, n: int) -> np.ndarray:
        """The partial operator H_{m,n} on shells m..n."""
        if not 0 <= m <= n <= self.depth:
            raise DimensionMismatch(f"Need 0 <= m <= n <= {self.depth}, got m={m}, n={n}")
        off = self.offsets(m, n)
        H = np.zeros((off[-1], off[-1]), dtype=complex)
        for k in range(m, n + 1):
            i = k - m
            H[off[i] : off[i + 1], off[i] : off[i + 1]] = self.potentials[k]
            if k < n:
                W = self.connections[k]
                H[off[i + 1] : off[i + 2], off[i] : off[i + 1]] = W
                H[off[i] : off[i + 1], off[i + 1] : off[i + 2]] = W.conj().T
        return H

    def full_matrix(self) -> np.ndarray:
        return self.block(0, self.depth)

    def truncate(self, depth: int) -> "ShellOperator":
        if not 0 <= depth <= self.depth:
            raise DimensionMismatch(f"Cannot truncate depth {self.depth} to {depth}")
        return ShellOperator(
            potentials=self.potentials[: depth + 1],
            connections=self.connections[: depth + 1],
        )


def extract_shell_operator(g: WeightedGraph, p: ShellPartition) -> ShellOperator:
    """Within-shell blocks V_n and between-shell blocks W_{n+1}."""
    violations = validate_partition(g, p)
    if violations:
        raise PartitionInvalid(f"Edges skip shells: {violations[:10]}")
    M = g.matrix()
    shells = [list(s) for s in p.shells]
    potentials = [M[np.ix_(s, s)] for s in shells]
    connections = [M[np.ix_(shells[n + 1], shells[n])] for n in range(len(shells) - 1)]
    return ShellOperator.from_blocks(potentials, connections)


def assemble_matrix(so: ShellOperator, p: ShellPartition) -> np.ndarray:
    """Full Hermitian matrix in the graph's own vertex numbering."""
    if p.sizes != so.sizes:
        raise DimensionMismatch(f"Partition sizes {p.sizes} differ from operator {so.sizes}")
    order = p.order()
    H = so.full_matrix()
    M = np.zeros_like(H)
    M[np.ix_(order, order)] = H
    return M


# ---------------------------------------------------------------------------
# Channels
# ---------------------------------------------------------------------------


@_dataclass(frozen=True, eq=False)
class ChannelData:
    """Factor pairs with W_n = -Upsilon_n Phi_{n-1}^* and ranks r_0..r_{N+1}."""

    upsilon: Tuple[np.ndarray, ...]
    phi: Tuple[np.ndarray, ...]
    ranks: Tuple[int, ...]

    @property
    def depth(self) -> int:
        return len(self.upsilon) - 1

    @property
    def root(self) -> np.ndarray:
        return self.upsilon[0]

    def reconstruction_residual(self, so: ShellOperator) -> float:
        """Largest relative error of W_n + Upsilon_n Phi_{n-1}^* over n."""
        worst = 0.0
        for n in range(1, self.depth + 1):
            W = so.connections[n - 1]
            err = np.linalg.norm(W + self.upsilon[n] @ self.phi[n - 1].conj().T)
            worst = max(worst, err / max(np.linalg.norm(W), 1e-300))
        return worst

    def top(self, so: ShellOperator, m: int, n: int) -> np.ndarray:
        """Upsilon_m embedded in the coordinates of H_{m,n}."""
        off = so.offsets(m, n)
        E = np.zeros((off[-1], self.upsilon[m].shape[1]), dtype=complex)
        E[: off[1]] = self.upsilon[m]
        return E

    def bottom(self, so: ShellOperator, m: int, n: int) -> np.ndarray:
        """Phi_n embedded in the coordinates of H_{m,n}."""
        off = so.offsets(m, n)
        E = np.zeros((off[-1], self.phi[n].shape[1]), dtype=complex)
        E[off[-2] :] = self.phi[n]
        return E

    def truncate(self, depth: int) -> "ChannelData":
        return ChannelData(
            upsilon=self.upsilon[: depth + 1],
            phi=self.phi[: depth + 1],
            ranks=self.ranks[: depth + 2],
        )

    def to_dict(self) -> dict:
        return {"ranks": list(self.ranks), "depth": self.depth}


def _root(so: ShellOperator, root_vector) -> np.ndarray:
    s0 = so.sizes[0]
    if root_vector is None:
        v = np.zeros(s0, dtype=complex)
        v[0] = 1.0
    else:
        v = np.asarray(root_vector, dtype=complex).ravel()
        if v.shape != (s0,):
            raise DimensionMismatch(f"Root vector needs {s0} entries, got {v.shape[0]}")
    norm = np.linalg.norm(v)
    if norm == 0:
        raise SpecInvalid("Root vector must be nonzero")
    return (v / norm).reshape(s0, 1)


def _fix_phases(U: np.ndarray, V: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    # largest entry of each column of V made real positive; U follows
    idx = np.argmax(np.abs(V), axis=0)
    cols = np.arange(V.shape[1])
    phase = V[idx, cols] / np.abs(V[idx, cols])
    return U / phase, V / phase


def _svd_factors(W: np.ndarray, tol: TolerancePolicy):
    U, s, Vh = _la.svd(W, full_matrices=False)
    if s.size == 0 or s[0] == 0:
        return None
    rank = int(np.sum(s > tol.rank_rel_tol * s[0]))
    U, V = _fix_phases(U[:, :rank], Vh[:rank].conj().T)
    return U, s[:rank], V


def channel_decomposition(
    so: ShellOperator,
    root_vector=None,
    tol: Optional[TolerancePolicy] = None,
    weight_on: str = "upsilon",
) -> ChannelData:
    """Compact SVD split W_n = -Upsilon_n Phi_{n-1}^*.

    weight_on="upsilon" gives Upsilon = -U D, Phi = V; "phi" gives
    Upsilon = -U, Phi = V D. Column phases are fixed so the split is
    deterministic.
    """
    if weight_on not in ("upsilon", "phi"):
        raise ValueError(f"Invalid weight_on: {weight_on}. Use 'upsilon' or 'phi'")
    policy = _policy(tol)
    upsilon = [_root(so, root_vector)]
    phi = []
    ranks = [1]
    for n in range(1, so.depth + 2):
        W = so.connections[n - 1]
        if W.shape[0] == 0:
            # trailing connection of a finite graph
            phi.append(np.zeros((so.sizes[n - 1], 0), dtype=complex))
            ranks.append(0)
            continue
        factors = _svd_factors(W, policy)
        if factors is None:
            raise ZeroConnection(f"W_{n} vanishes: shells {n - 1} and {n} are not connected")
        U, D, V = factors
        if weight_on == "upsilon":
            ups, ph = -U * D, V
        else:
            ups, ph = -U, V * D
        if n <= so.depth:
            upsilon.append(ups)
        phi.append(ph)
        ranks.append(D.size)
    return ChannelData(upsilon=tuple(upsilon), phi=tuple(phi), ranks=tuple(ranks))


def identity_channels(so: ShellOperator, root_vector=None) -> ChannelData:
    """Channels Phi_n = 1, Upsilon_{n+1} = -W_{n+1} for full-column-rank W."""
    upsilon = [_root(so, root_vector)]
    phi = []
    ranks = [1]
    for n in range(1, so.depth + 2):
        W = so.connections[n - 1]
        s_prev = so.sizes[n - 1]
        if W.shape[0] == 0:
            phi.append(np.zeros((s_prev, 0), dtype=complex))
            ranks.append(0)
            continue
        if numerical_rank(W) < s_prev:
            raise ZeroConnection(f"W_{n} lacks full column rank {s_prev}")
        if n <= so.depth:
            upsilon.append(-W)
        phi.append(np.eye(s_prev, dtype=complex))
        ranks.append(s_prev)
    return ChannelData(upsilon=tuple(upsilon), phi=tuple(phi), ranks=tuple(ranks))


# ---------------------------------------------------------------------------
# (A2) probes and grouping
# ---------------------------------------------------------------------------


@_dataclass
class A2Report:
    """Rank of beta^lambda at sampled real lambda for one shell."""

    shell: int
    rows: int
    cols: int
    probes: List[Tuple[float, int]] = _field(default_factory=list)

    @property
    def full_rank(self) -> bool:
        need = min(self.rows, self.cols)
        return any(rank >= need for _, rank in self.probes)

    def to_dict(self) -> dict:
        return {
            "shell": self.shell,
            "rows": self.rows,
            "cols": self.cols,
            "probes": [{"lambda": lam, "rank": rank} for lam, rank in self.probes],
            "full_rank": self.full_rank,
        }


def _probe_points(H: np.ndarray, count: int, rng: np.random.Generator) -> List[float]:
    w = _la.eigvalsh(H)
    bound = float(np.max(np.abs(w))) + 1.0
    points: List[float] = []
    while len(points) < count:
        lam = float(rng.uniform(-bound, bound))
        if np.min(np.abs(w - lam)) > 1e-6 * bound:
            points.append(lam)
    return points


def _beta_rank(H, top, bottom, lam, tol) -> int:
    G = _la.solve(H - lam * np.eye(H.shape[0]), bottom)
    return numerical_rank(top.conj().T @ G, tol)


def check_A2(
    so: ShellOperator,
    cd: ChannelData,
    probe_count: int = 3,
    seed: int = 0,
    tol: Optional[TolerancePolicy] = None,
) -> List[A2Report]:
    """Probe rank of beta_n = Upsilon_n^*(V_n - lambda)^{-1} Phi_n per shell.

    One full-rank probe certifies generic full rank. Shells whose forward
    channel is empty (end of a finite graph) are skipped.
    """
    rng = np.random.default_rng(seed)
    reports = []
    for n in range(cd.depth + 1):
        ups, ph = cd.upsilon[n], cd.phi[n]
        if ph.shape[1] == 0:
            continue
        report = A2Report(shell=n, rows=ups.shape[1], cols=ph.shape[1])
        for lam in _probe_points(so.potentials[n], probe_count, rng):
            report.probes.append((lam, _beta_rank(so.potentials[n], ups, ph, lam, tol)))
        reports.append(report)
    return reports


def _block_a2(so, k, j, in_channel, policy, probe_count, rng) -> bool:
    tail = so.connections[j]
    factors = _svd_factors(tail, policy) if tail.shape[0] else None
    if factors is None:
        return True
    H = so.block(k, j)
    off = so.offsets(k, j)
    top = np.zeros((off[-1], in_channel.shape[1]), dtype=complex)
    top[: off[1]] = in_channel
    bottom = np.zeros((off[-1], factors[2].shape[1]), dtype=complex)
    bottom[off[-2] :] = factors[2]
    need = min(top.shape[1], bottom.shape[1])
    return any(
        _beta_rank(H, top, bottom, lam, policy) >= need
        for lam in _probe_points(H, probe_count, rng)
    )


def _merge(so: ShellOperator, grouping: List[List[int]]) -> ShellOperator:
    potentials = [so.block(b[0], b[-1]) for b in grouping]
    connections = []
    for i, b in enumerate(grouping):
        W = so.connections[b[-1]]
        cols = potentials[i].shape[0]
        last = so.sizes[b[-1]]
        rows = potentials[i + 1].shape[0] if i + 1 < len(grouping) else W.shape[0]
        M = np.zeros((rows, cols), dtype=complex)
        M[: W.shape[0], cols - last :] = W
        connections.append(M)
    return ShellOperator(potentials=tuple(potentials), connections=tuple(connections))


def group_shells(
    so: ShellOperator,
    tol: Optional[TolerancePolicy] = None,
    root_vector=None,
    probe_count: int = 3,
    seed: int = 0,
) -> Tuple[ShellOperator, List[List[int]]]:
    """Greedily merge consecutive shells until ranks are non-decreasing.

    A block starting at shell k is extended until the rank of its outgoing
    connection reaches the rank of its incoming one and a sampled (A2)
    probe passes. A block reaching the end of a finite graph is accepted.

    Returns:
        (grouped ShellOperator, list of original shell indices per block)
    """
    policy = _policy(tol)
    rng = np.random.default_rng(seed)
    ranks = [numerical_rank(W, policy) if W.shape[0] else 0 for W in so.connections]
    grouping: List[List[int]] = []
    k = 0
    in_channel = _root(so, root_vector)
    while k <= so.depth:
        r_in = in_channel.shape[1]
        j = k
        while True:
            r_out = ranks[j]
            if j == so.depth and r_out == 0:
                break
            if r_out >= r_in and _block_a2(so, k, j, in_channel, policy, probe_count, rng):
                break
            if j == so.depth:
                raise GroupingFailed(
                    f"Block from shell {k} reaches the truncation with outgoing rank "
                    f"{r_out} < {r_in} or failing (A2)"
                )
            j += 1
        grouping.append(list(range(k, j + 1)))
        if j > k:
            logger.debug(f"Grouped shells {k}..{j} (incoming rank {r_in})")
        if j < so.depth:
            U, D, _ = _svd_factors(so.connections[j], policy)
            in_channel = -U * D
        k = j + 1
    if grouping[-1][-1] != grouping[-1][0] and ranks[-1] == 0:
        logger.warning(
            f"Tail block {grouping[-1][0]}..{grouping[-1][-1]} merged up to the end of the graph"
        )
    return _merge(so, grouping), grouping


# EOF
