"""
shellspec - spectral theory of Hermitian operators on graphs with shell structure.

Example:
    >>> from shellspec import ModelSpec, build_model, density_curve
    >>> so, cd = build_model(ModelSpec(kind="stair", depth=50))
    >>> estimate = density_curve(so, cd, [-1.0, 0.3, 1.2], depth=50)
    >>> estimate.density
"""

from __future__ import annotations

import importlib.metadata

__version__ = importlib.metadata.version("shellspec")

from ._core import (
    SUPPORTED_FORMATS,
    BoundaryData,
    ChannelData,
    Config,
    DensityEstimate,
    ModelSpec,
    ShellOperator,
    ShellSpecError,
    SuiteResult,
    SweepPolicy,
    TolerancePolicy,
    TransferSpace,
    WeightedGraph,
    WeylDisc,
    ac_density,
    averaged_stieltjes,
    bfs_partition,
    boundary_data_direct,
    build_model,
    channel_decomposition,
    compose,
    density_curve,
    extract_shell_operator,
    fourth_moment_run,
    group_shells,
    limit_point_diagnostic,
    run_suites,
    save,
    sweep,
    transfer_space,
    weyl_disc,
)

__all__ = [
    "__version__",
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
