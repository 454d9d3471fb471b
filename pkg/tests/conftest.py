"""Shared test fixtures for shellspec tests."""

from __future__ import annotations

import json
import os

import numpy as np
import pytest

from shellspec._core.config import Config
from shellspec._core.graph import (
    ShellPartition,
    WeightedGraph,
    bfs_partition,
    channel_decomposition,
    extract_shell_operator,
    random_graph,
)
from shellspec._core.models import ModelSpec, build_model

SHELLSPEC_ENV = [
    "SHELLSPEC_THREADS",
    "SHELLSPEC_RANK_TOL",
    "SHELLSPEC_COND_MAX",
    "SHELLSPEC_EIG_TOL",
    "SHELLSPEC_LOG_LEVEL",
]

# Antitree with shell sizes 1, 2, 1; re-rooted at the middle pair it has sizes 2, 2
ANTITREE_EDGES = [(0, 1), (0, 2), (1, 3), (2, 3)]
ANTITREE_SHELLS = [[0], [1, 2], [3]]
MIDDLE_ROOTED_SHELLS = [[1, 2], [0, 3]]


@pytest.fixture(autouse=True)
def reset_config():
    """Reset configuration and SHELLSPEC_* variables around each test."""
    saved = {key: os.environ.pop(key, None) for key in SHELLSPEC_ENV}
    Config.reset()
    yield
    Config.reset()
    for key, value in saved.items():
        if value is not None:
            os.environ[key] = value
        else:
            os.environ.pop(key, None)


@pytest.fixture
def rng():
    """Return a seeded generator."""
    return np.random.default_rng(1234)


@pytest.fixture
def random_shells(rng):
    """Return (ShellOperator, ChannelData) of a random connected graph."""
    g = random_graph(rng, 10)
    so = extract_shell_operator(g, bfs_partition(g, 0))
    return so, channel_decomposition(so)


@pytest.fixture
def path_graph():
    """Return the path 0-1-2-3 with unit hopping -1."""
    M = np.zeros((4, 4))
    for x in range(3):
        M[x, x + 1] = M[x + 1, x] = -1.0
    return WeightedGraph.from_matrix(M)


def _antitree_graph():
    M = np.zeros((4, 4))
    for x, y in ANTITREE_EDGES:
        M[x, y] = M[y, x] = -1.0
    return WeightedGraph.from_matrix(M)


@pytest.fixture
def antitree():
    """Return (graph, partition) of the 1, 2, 1 antitree rooted at vertex 0."""
    return _antitree_graph(), ShellPartition.from_lists(ANTITREE_SHELLS)


@pytest.fixture
def middle_rooted_antitree():
    """Return (graph, partition) of the antitree rooted at the middle pair {1, 2}."""
    return _antitree_graph(), ShellPartition.from_lists(MIDDLE_ROOTED_SHELLS)


@pytest.fixture
def antitree_json(tmp_path):
    """Return the path of the antitree graph as a JSON file."""
    path = tmp_path / "antitree.json"
    data = {"vertices": 4, "edges": [[x, y, -1.0] for x, y in ANTITREE_EDGES]}
    path.write_text(json.dumps(data))
    return path


@pytest.fixture
def single_site():
    """Return the free chain truncated to one site."""
    return build_model(ModelSpec(kind="stair", depth=0))


@pytest.fixture
def free_chain():
    """Return the free chain on shells 0..11."""
    return build_model(ModelSpec(kind="stair", depth=11))
