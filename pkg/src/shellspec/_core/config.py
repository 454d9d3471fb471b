#!/usr/bin/env python3
# Timestamp: 2026-10-19
"""Configuration for shellspec."""

import os as _os
from dataclasses import dataclass as _dataclass
from dataclasses import field as _field
from typing import Optional as _Optional

DEFAULT_RANK_REL_TOL = 1e-12
DEFAULT_SUITABILITY_COND_MAX = 1e12
DEFAULT_EIG_EXCLUSION_TOL = 1e-10
DEFAULT_PERTURB_SCALE = 1e-9
DEFAULT_MAX_THREADS = 8
DEFAULT_LOG_LEVEL = "WARNING"

ENV_VARS = [
    ("SHELLSPEC_THREADS", "Worker cap for grid and trial fan-out"),
    ("SHELLSPEC_RANK_TOL", f"Relative SVD rank cutoff (default: {DEFAULT_RANK_REL_TOL})"),
    (
        "SHELLSPEC_COND_MAX",
        f"Largest condition number accepted for composition (default: {DEFAULT_SUITABILITY_COND_MAX})",
    ),
    (
        "SHELLSPEC_EIG_TOL",
        f"Relative eigenvalue exclusion radius at real z (default: {DEFAULT_EIG_EXCLUSION_TOL})",
    ),
    ("SHELLSPEC_LOG_LEVEL", f"Logging level for the CLI (default: {DEFAULT_LOG_LEVEL})"),
]


def _env_float(name: str, default: float) -> float:
    raw = _os.environ.get(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return float(raw)
    except ValueError:
        raise ValueError(f"{name} must be a number, got {raw!r}") from None


@_dataclass(frozen=True)
class TolerancePolicy:
    """Thresholds standing in for exact rank and invertibility conditions."""

    rank_rel_tol: float = DEFAULT_RANK_REL_TOL
    suitability_cond_max: float = DEFAULT_SUITABILITY_COND_MAX
    eig_exclusion_tol: float = DEFAULT_EIG_EXCLUSION_TOL

    def __post_init__(self):
        for name in ("rank_rel_tol", "suitability_cond_max", "eig_exclusion_tol"):
            value = getattr(self, name)
            if not value > 0:
                raise ValueError(f"{name} must be strictly positive, got {value}")
        if self.rank_rel_tol >= 1:
            raise ValueError(f"rank_rel_tol must be < 1, got {self.rank_rel_tol}")

    @classmethod
    def from_env(cls) -> "TolerancePolicy":
        return cls(
            rank_rel_tol=_env_float("SHELLSPEC_RANK_TOL", DEFAULT_RANK_REL_TOL),
            suitability_cond_max=_env_float(
                "SHELLSPEC_COND_MAX", DEFAULT_SUITABILITY_COND_MAX
            ),
            eig_exclusion_tol=_env_float("SHELLSPEC_EIG_TOL", DEFAULT_EIG_EXCLUSION_TOL),
        )

    def to_dict(self) -> dict:
        return {
            "rank_rel_tol": self.rank_rel_tol,
            "suitability_cond_max": self.suitability_cond_max,
            "eig_exclusion_tol": self.eig_exclusion_tol,
        }


@_dataclass(frozen=True)
class SweepPolicy:
    """How sweeps and grids treat real parameters that hit eigenvalues.

    perturb moves a colliding grid point by perturb_scale*(1+|lambda|);
    pseudo asks for the eigen-projected resolvent instead of failing.
    """

    tolerance: TolerancePolicy = _field(default_factory=TolerancePolicy)
    perturb: bool = True
    pseudo: bool = False
    perturb_scale: float = DEFAULT_PERTURB_SCALE

    def __post_init__(self):
        if not self.perturb_scale > 0:
            raise ValueError(f"perturb_scale must be positive, got {self.perturb_scale}")


class Config:
    """Configuration container."""

    _threads: _Optional[int] = None
    _tolerance: _Optional[TolerancePolicy] = None

    @classmethod
    def get_threads(cls) -> int:
        if cls._threads is not None:
            return cls._threads
        raw = _os.environ.get("SHELLSPEC_THREADS")
        if raw:
            try:
                threads = int(raw)
            except ValueError:
                raise ValueError(
                    f"SHELLSPEC_THREADS must be an integer, got {raw!r}"
                ) from None
            if threads < 1:
                raise ValueError(f"SHELLSPEC_THREADS must be >= 1, got {threads}")
            return threads
        return min(DEFAULT_MAX_THREADS, _os.cpu_count() or 1)

    @classmethod
    def set_threads(cls, threads: int) -> None:
        if threads < 1:
            raise ValueError(f"Invalid thread count: {threads}. Use 1 or more")
        cls._threads = int(threads)

    @classmethod
    def get_tolerance(cls) -> TolerancePolicy:
        if cls._tolerance is None:
            cls._tolerance = TolerancePolicy.from_env()
        return cls._tolerance

    @classmethod
    def set_tolerance(cls, policy: TolerancePolicy) -> None:
        cls._tolerance = policy

    @classmethod
    def get_sweep_policy(cls) -> SweepPolicy:
        return SweepPolicy(tolerance=cls.get_tolerance())

    @classmethod
    def get_log_level(cls) -> str:
        level = _os.environ.get("SHELLSPEC_LOG_LEVEL", DEFAULT_LOG_LEVEL).upper()
        if level not in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"):
            raise ValueError(f"Invalid SHELLSPEC_LOG_LEVEL: {level}")
        return level

    @classmethod
    def reset(cls) -> None:
        cls._threads = None
        cls._tolerance = None


# EOF
