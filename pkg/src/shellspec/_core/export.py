#!/usr/bin/env python3
# Timestamp: 2026-10-19
"""Export functionality for density curves, Weyl tables and Monte Carlo runs.

Supports two output formats:
- csv: one row per grid point / depth, floats in shortest round-trip form
- json: the result's to_dict() payload
"""

import csv as _csv
import io as _io
import json as _json
from pathlib import Path as _Path
from typing import TYPE_CHECKING, Iterable, List, Sequence, Union

if TYPE_CHECKING:
    from .models import McResult
    from .spectral import DensityEstimate
    from .weyl import WeylTable

__all__ = [
    "save",
    "export_density",
    "export_masses",
    "export_weyl",
    "export_mc",
    "export_json",
    "masses_path",
    "DENSITY_HEADER",
    "MASSES_HEADER",
    "WEYL_HEADER",
    "MC_HEADER",
    "SUPPORTED_FORMATS",
]

SUPPORTED_FORMATS = ["csv", "json"]

DENSITY_HEADER = ["lambda", "density", "min_norm", "stieltjes_re", "stieltjes_im", "flag"]
MASSES_HEADER = ["lambda0", "mass"]
WEYL_HEADER = ["n", "center_re", "center_im", "radius", "truth_re", "truth_im"]
MC_HEADER = ["lambda", "n", "fourth_moment", "stderr", "bound_product"]


def _fmt(value) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, (int,)) and not isinstance(value, bool):
        return str(value)
    return repr(float(value))


def _to_csv(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buffer = _io.StringIO()
    writer = _csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(x) for x in row])
    return buffer.getvalue()


def export_density(estimate: "DensityEstimate") -> str:
    """Density curve as CSV text, one row per grid point."""
    rows = (
        (lam, d, m, s.real, s.imag, flag)
        for lam, d, m, s, flag in zip(
            estimate.grid,
            estimate.density,
            estimate.min_norm,
            estimate.stieltjes,
            estimate.flags,
        )
    )
    return _to_csv(DENSITY_HEADER, rows)


def export_masses(estimate: "DensityEstimate") -> str:
    return _to_csv(MASSES_HEADER, estimate.point_masses)


def export_weyl(table: "WeylTable") -> str:
    rows = (
        (int(r.n), r.center.real, r.center.imag, r.radius, r.truth.real, r.truth.imag)
        for r in table.rows
    )
    return _to_csv(WEYL_HEADER, rows)


def export_mc(result: "McResult") -> str:
    rows = ((lam, int(n), m, se, b) for lam, n, m, se, b in result.rows())
    return _to_csv(MC_HEADER, rows)


def export_json(data) -> str:
    """JSON dump of any result exposing to_dict()."""
    return _json.dumps(data.to_dict(), indent=2)


def masses_path(path: Union[str, _Path]) -> _Path:
    """Sidecar path for point masses: out.csv -> out.masses.csv."""
    path = _Path(path)
    return path.with_name(f"{path.stem}.masses.csv")


def save(
    data: Union["DensityEstimate", "WeylTable", "McResult"],
    path: Union[str, _Path],
    format: str = "csv",
) -> List[str]:
    """Save a result to a file.

    Density curves in CSV also write the point-mass sidecar next to path.

    Args:
        data: DensityEstimate, WeylTable or McResult
        path: Output file path
        format: Output format ("csv", "json")

    Returns:
        Paths of the written files

    Raises:
        ValueError: If format is not supported
        TypeError: If data is not a supported result

    Examples:
        >>> estimate = density_curve(so, cd, grid, depth=50)
        >>> save(estimate, "density.csv")
        ['density.csv', 'density.masses.csv']
    """
    from .models import McResult
    from .spectral import DensityEstimate
    from .weyl import WeylTable

    if format not in SUPPORTED_FORMATS:
        raise ValueError(
            f"Unsupported format: {format}. "
            f"Supported formats: {', '.join(SUPPORTED_FORMATS)}"
        )
    if not isinstance(data, (DensityEstimate, WeylTable, McResult)):
        raise TypeError(f"Unsupported data type: {type(data)}")

    path = _Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    written = {path: export_json(data) if format == "json" else None}

    if format == "csv":
        if isinstance(data, DensityEstimate):
            written[path] = export_density(data)
            written[masses_path(path)] = export_masses(data)
        elif isinstance(data, WeylTable):
            written[path] = export_weyl(data)
        else:
            written[path] = export_mc(data)

    for target, content in written.items():
        target.write_text(content, encoding="utf-8", newline="")
    return [str(p) for p in written]


# EOF
