"""Tests for shellspec._core.export module."""

import csv
import json

import numpy as np
import pytest

from shellspec._core.export import (
    DENSITY_HEADER,
    MC_HEADER,
    WEYL_HEADER,
    SUPPORTED_FORMATS,
    export_density,
    export_weyl,
    masses_path,
    save,
)
from shellspec._core.models import McResult
from shellspec._core.spectral import DensityEstimate
from shellspec._core.weyl import WeylRow, WeylTable


@pytest.fixture
def estimate():
    """Return a small hand-built density estimate."""
    return DensityEstimate(
        grid=[-0.5, 0.0, 0.5],
        depth=3,
        density=[0.25, float("nan"), 0.1],
        min_norm=[1.0, float("nan"), 2.0],
        stieltjes=[0.1 + 0.7j, complex("nan"), -0.2 + 0.3j],
        flags=["ok", "singular", "ok"],
        point_masses=[(0.0, 0.5)],
    )


@pytest.fixture
def table():
    """Return a two-row Weyl table."""
    return WeylTable(
        z=1j,
        rows=[
            WeylRow(n=0, center=0.5j, radius=0.5, truth=1j),
            WeylRow(n=1, center=0.6j, radius=0.1, truth=0.62j),
        ],
    )


class TestCsv:
    """Test CSV writers."""

    def test_density_header_and_rows(self, estimate):
        """Test one row per grid point under the fixed header."""
        # Act
        rows = list(csv.reader(export_density(estimate).splitlines()))
        # Assert
        assert rows[0] == DENSITY_HEADER
        assert len(rows) == 4
        assert rows[2][-1] == "singular"

    def test_floats_use_shortest_repr(self, estimate):
        """Test floats are written in shortest round-trip form."""
        # Act
        rows = list(csv.reader(export_density(estimate).splitlines()))
        # Assert
        assert rows[1][:2] == ["-0.5", "0.25"]

    def test_unix_line_endings(self, estimate):
        """Test lines end with a bare newline."""
        # Act
        text = export_density(estimate)
        # Assert
        assert "\r" not in text and text.endswith("\n")

    def test_weyl_depth_is_integer(self, table):
        """Test the depth column is written as an integer."""
        # Act
        rows = list(csv.reader(export_weyl(table).splitlines()))
        # Assert
        assert rows[0] == WEYL_HEADER
        assert rows[1][0] == "0" and rows[1][3] == "0.5"


class TestSave:
    """Test the save dispatcher."""

    def test_density_csv_writes_masses_sidecar(self, estimate, tmp_path):
        """Test the point masses go next to the curve."""
        # Arrange
        path = tmp_path / "out.csv"
        # Act
        written = save(estimate, path)
        # Assert
        assert written == [str(path), str(tmp_path / "out.masses.csv")]
        assert (tmp_path / "out.masses.csv").read_text() == "lambda0,mass\n0.0,0.5\n"

    def test_json_format(self, table, tmp_path):
        """Test JSON output carries the table rows."""
        # Arrange
        path = tmp_path / "weyl.json"
        # Act
        save(table, path, format="json")
        # Assert
        data = json.loads(path.read_text())
        assert [row["n"] for row in data["rows"]] == [0, 1]

    def test_mc_csv(self, tmp_path):
        """Test Monte Carlo tables have one row per (lambda, n)."""
        # Arrange
        result = McResult(
            grid=[0.0, 0.5],
            depths=[1, 2],
            trials=16,
            fourth_moment=np.ones((2, 2)),
            stderr=np.zeros((2, 2)),
            bound_product=np.ones((2, 2)),
            step_factor=np.ones((2, 3)),
        )
        path = tmp_path / "mc.csv"
        # Act
        save(result, path)
        # Assert
        lines = path.read_text().splitlines()
        assert lines[0] == ",".join(MC_HEADER)
        assert lines[1] == "0.0,1,1.0,0.0,1.0"
        assert len(lines) == 5

    def test_creates_parent_directories(self, table, tmp_path):
        """Test missing parent directories are created."""
        # Arrange
        path = tmp_path / "nested" / "dir" / "weyl.csv"
        # Act
        save(table, path)
        # Assert
        assert path.exists()

    def test_unsupported_format(self, table, tmp_path):
        """Test an unknown format lists the supported ones."""
        # Act / Assert
        with pytest.raises(ValueError, match="Supported formats"):
            save(table, tmp_path / "x.bib", format="bibtex")

    def test_unsupported_type(self, tmp_path):
        """Test arbitrary objects are rejected."""
        # Act / Assert
        with pytest.raises(TypeError):
            save({"a": 1}, tmp_path / "x.csv")

    def test_masses_path(self):
        """Test the sidecar name keeps the directory."""
        # Act
        path = masses_path("runs/density.csv")
        # Assert
        assert path.as_posix() == "runs/density.masses.csv"

    def test_supported_formats(self):
        """Test csv and json are supported."""
        # Assert
        assert SUPPORTED_FORMATS == ["csv", "json"]
