#!/usr/bin/env python3
"""Argument parsing and model loading shared by the CLI commands."""

import json
import re
import sys
from pathlib import Path
from typing import List, Optional

import click
import numpy as np

from .._core.config import Config, SweepPolicy, TolerancePolicy
from .._core.errors import SpecInvalid
from .._core.graph import WeightedGraph
from .._core.models import ModelSpec

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_CONFIG = 2
EXIT_MODEL = 3

_BARE_I = re.compile(r"(^|[+-])j")


def fail(error, code: int) -> None:
    """Print error in red to stderr and exit with code."""
    click.secho(f"Error: {error}", fg="red", err=True)
    sys.exit(code)


def parse_complex(text: str) -> complex:
    """Parse "a+bi" with optional spaces; "i", "-2i" and "1.5" also work."""
    cleaned = text.replace(" ", "").lower().replace("i", "j")
    cleaned = _BARE_I.sub(r"\g<1>1j", cleaned)
    try:
        return complex(cleaned)
    except ValueError:
        raise ValueError(f"Invalid complex number: {text!r}. Use a+bi, e.g. 0.5+1i") from None


def parse_depths(text: Optional[str], depth: int) -> List[int]:
    """Depth list from "a..b", "n1,n2,..." or a single n (default: 0..depth)."""
    if not text:
        return list(range(depth + 1))
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            depths = list(range(int(lo), int(hi) + 1))
        else:
            depths = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise ValueError(f"Invalid depths: {text!r}. Use a..b or n1,n2,...") from None
    if not depths or min(depths) < 0 or max(depths) > depth:
        raise ValueError(f"Depths must lie in 0..{depth}, got {text!r}")
    return depths


def make_grid(lmin: float, lmax: float, points: int) -> np.ndarray:
    if points < 2:
        raise ValueError(f"Invalid grid: points={points}. Use at least 2")
    if not lmin < lmax:
        raise ValueError(f"Invalid grid: lmin={lmin} must be below lmax={lmax}")
    return np.linspace(lmin, lmax, points)


def load_model(
    model: Optional[str],
    graph: Optional[str] = None,
    root: int = 0,
    depth: Optional[int] = None,
    seed: Optional[int] = None,
) -> ModelSpec:
    """ModelSpec from a JSON file, an inline JSON object, or a graph file.

    Raises:
        SpecInvalid: malformed JSON or spec
        OSError: unreadable file
    """
    if (model is None) == (graph is None):
        raise ValueError("Give exactly one of --model or --graph")
    if graph is not None:
        try:
            data = json.loads(Path(graph).read_text())
        except json.JSONDecodeError as e:
            raise SpecInvalid(f"Invalid JSON in {graph}: {e}") from None
        g = WeightedGraph.from_dict(data)
        spec = {"kind": "custom", "depth": g.vertex_count, "graph": data, "root": root}
    elif model.lstrip().startswith("{"):
        try:
            spec = json.loads(model)
        except json.JSONDecodeError as e:
            raise SpecInvalid(f"Invalid inline model JSON: {e}") from None
    else:
        try:
            spec = json.loads(Path(model).read_text())
        except json.JSONDecodeError as e:
            raise SpecInvalid(f"Invalid JSON in {model}: {e}") from None
    if not isinstance(spec, dict):
        raise SpecInvalid("Model spec must be a JSON object")
    if depth is not None:
        spec["depth"] = depth
    if seed is not None:
        spec["seed"] = seed
    return ModelSpec.from_dict(spec)


def tolerance_override(
    rank_tol: Optional[float] = None,
    cond_max: Optional[float] = None,
    eig_tol: Optional[float] = None,
) -> TolerancePolicy:
    """Config's tolerance policy with the given command-line values replacing its own."""
    base = Config.get_tolerance()
    return TolerancePolicy(
        rank_rel_tol=rank_tol if rank_tol is not None else base.rank_rel_tol,
        suitability_cond_max=cond_max if cond_max is not None else base.suitability_cond_max,
        eig_exclusion_tol=eig_tol if eig_tol is not None else base.eig_exclusion_tol,
    )


def sweep_policy(no_perturb: bool = False, pseudo: bool = False) -> SweepPolicy:
    """Sweep policy on Config's tolerance with the command's perturbation flags."""
    return SweepPolicy(tolerance=Config.get_tolerance(), perturb=not no_perturb, pseudo=pseudo)


def policy_options(fn):
    """Attach the perturbation flags to a command."""
    options = [
        click.option("--no-perturb", is_flag=True, help="Flag colliding grid points instead of moving them"),
        click.option("--pseudo", is_flag=True, help="Use the eigen-projected resolvent at real lambda"),
    ]
    for option in reversed(options):
        fn = option(fn)
    return fn


def model_options(fn):
    """Attach --model/--graph/--root/--depth to a command."""
    options = [
        click.option("-m", "--model", default=None, help="Model spec: JSON file or inline JSON object"),
        click.option("-g", "--graph", default=None, help="Graph JSON file (custom model)"),
        click.option("--root", type=int, default=0, help="Root vertex for --graph (default: 0)"),
        click.option("-d", "--depth", type=int, default=None, help="Override the model depth"),
    ]
    for option in reversed(options):
        fn = option(fn)
    return fn


__all__ = [
    "EXIT_OK",
    "EXIT_VERIFY_FAILED",
    "EXIT_CONFIG",
    "EXIT_MODEL",
    "fail",
    "parse_complex",
    "parse_depths",
    "make_grid",
    "load_model",
    "tolerance_override",
    "sweep_policy",
    "policy_options",
    "model_options",
]

# EOF
