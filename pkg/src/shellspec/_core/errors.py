#!/usr/bin/env python3
# Timestamp: 2026-10-19
"""Exception hierarchy for shellspec.

Numerical failures subclass ``ArithmeticError``; bad inputs subclass
``ValueError``. Both share ``ShellSpecError`` so callers can catch
everything raised by the package in one place.
"""

__all__ = [
    "ShellSpecError",
    "SingularSpectralParameter",
    "RankDeficient",
    "NotPositiveDefinite",
    "NotSuitable",
    "NotInvertible",
    "SweepFailed",
    "ZeroGamma",
    "SingularShell",
    "OutsideBand",
    "Disconnected",
    "PartitionInvalid",
    "GroupingFailed",
    "ZeroConnection",
    "DimensionMismatch",
    "ParameterMismatch",
    "SpecInvalid",
]


class ShellSpecError(Exception):
    """Base class for all shellspec errors."""


# Numerical


class SingularSpectralParameter(ShellSpecError, ArithmeticError):
    """Spectral parameter sits on an eigenvalue the channels can see."""


class RankDeficient(ShellSpecError, ArithmeticError):
    """Matrix lacks the full row rank an operation needs."""


class NotPositiveDefinite(ShellSpecError, ArithmeticError):
    """Hermitian matrix has a non-positive eigenvalue."""


class NotSuitable(ShellSpecError, ArithmeticError):
    """Pair of boundary data cannot be composed."""

    def __init__(self, message: str, cond: float = float("inf")):
        super().__init__(message)
        self.cond = cond


class NotInvertible(ShellSpecError, ArithmeticError):
    """A block that must be inverted is numerically singular."""


class SweepFailed(ShellSpecError, ArithmeticError):
    """Forward sweep and its direct fallback both failed."""


class ZeroGamma(ShellSpecError, ArithmeticError):
    """Root coupling vanishes, no Dirichlet vector exists."""


class SingularShell(SingularSpectralParameter):
    """Shell potential minus z is singular on the channels."""


class OutsideBand(ShellSpecError, ArithmeticError):
    """Energy lies outside the free band with the required margin."""


# Input


class Disconnected(ShellSpecError, ValueError):
    """Graph has vertices unreachable from the root."""


class PartitionInvalid(ShellSpecError, ValueError):
    """Partition is not quasi-spherical or does not cover the graph."""


class GroupingFailed(ShellSpecError, ValueError):
    """No grouping with non-decreasing ranks within the truncation."""


class ZeroConnection(ShellSpecError, ValueError):
    """Connection between consecutive shells vanishes."""


class DimensionMismatch(ShellSpecError, ValueError):
    """Matrix shapes do not chain."""


class ParameterMismatch(ShellSpecError, ValueError):
    """Boundary data computed at different spectral parameters."""


class SpecInvalid(ShellSpecError, ValueError):
    """Model or run specification violates its invariants."""


# EOF
