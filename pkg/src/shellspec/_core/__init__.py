#!/usr/bin/env python3
"""Internal core modules - public API only."""

from .boundary import BoundaryData, boundary_data_direct, compose, sweep
from .config import Config, SweepPolicy, TolerancePolicy
from .errors import ShellSpecError
from .export import SUPPORTED_FORMATS, save
from .graph import (
    ChannelData,
    ShellOperator,
    WeightedGraph,
    bfs_partition,
    channel_decomposition,
    extract_shell_operator,
    group_shells,
)
from .models import ModelSpec, build_model, fourth_moment_run
from .spectral import DensityEstimate, ac_density, averaged_stieltjes, density_curve
from .transfer import TransferSpace, transfer_space
from .verify import SuiteResult, run_suites
from .weyl import WeylDisc, limit_point_diagnostic, weyl_disc

__all__ = [
    # Graphs and shells
    "WeightedGraph",
    "ShellOperator",
    "ChannelData",
    "bfs_partition",
    "extract_shell_operator",
    "channel_decomposition",
    "group_shells",
    # Boundary data
    "BoundaryData",
    "boundary_data_direct",
    "compose",
    "sweep",
    "TransferSpace",
    "transfer_space",
    # Weyl discs
    "WeylDisc",
    "weyl_disc",
    "limit_point_diagnostic",
    # Spectral averaging
    "DensityEstimate",
    "averaged_stieltjes",
    "ac_density",
    "density_curve",
    # Models
    "ModelSpec",
    "build_model",
    "fourth_moment_run",
    # Verification
    "SuiteResult",
    "run_suites",
    # Configuration
    "Config",
    "TolerancePolicy",
    "SweepPolicy",
    "ShellSpecError",
    # Export
    "save",
    "SUPPORTED_FORMATS",
]

# EOF
