"""Tests for shellspec._core.verify module."""

import json

import numpy as np
import pytest

from shellspec._core.verify import (
    FAULTS,
    SUITES,
    PropertyEntry,
    SuiteResult,
    free_jacobi_density,
    free_jacobi_m,
    run_suites,
)


@pytest.fixture(scope="module")
def algebra():
    """Run the algebra suite once for the module."""
    return run_suites("algebra", seed=0)


class TestOracles:
    """Test closed forms used as references."""

    def test_free_jacobi_m_at_i(self):
        """Test m(i) = i (sqrt(5) - 1) / 2."""
        # Act
        m = free_jacobi_m(1j)
        # Assert
        assert np.isclose(m, 1j * (np.sqrt(5) - 1) / 2)

    def test_free_jacobi_m_solves_quadratic(self):
        """Test m^2 + z m + 1 = 0 with Im m > 0."""
        # Arrange
        z = 0.4 + 0.3j
        # Act
        m = free_jacobi_m(z)
        # Assert
        assert abs(m * m + z * m + 1) < 1e-12
        assert m.imag > 0

    def test_free_jacobi_density_nonnegative(self):
        """Test the truncated chain density is nonnegative on the band."""
        # Act
        values = free_jacobi_density(np.linspace(-1.8, 1.8, 19), 10)
        # Assert
        assert np.all(values >= 0)


class TestRunSuites:
    """Test the property runner."""

    def test_algebra_suite_passes(self, algebra):
        """Test every algebra property holds on the clean composition."""
        # Assert
        failing = [e.name for e in algebra if not e.passed]
        assert algebra.ok, failing
        assert algebra.total == len(algebra.entries) > 0

    def test_entries_report_thresholds(self, algebra):
        """Test each entry has a finite residual under its threshold."""
        # Assert
        assert all(np.isfinite(e.residual) and e.residual <= e.threshold for e in algebra)
        assert {e.suite for e in algebra} == {"algebra"}

    def test_sign_fault_is_caught(self):
        """Test flipping the correction sign fails the composition identity."""
        # Act
        result = run_suites("algebra", seed=0, fault="sign")
        # Assert
        assert not result.ok
        failed = {e.name for e in result if not e.passed}
        assert "composition_identity" in failed
        assert result.fault == "sign"

    def test_same_seed_same_residuals(self, algebra):
        """Test a fixed seed reproduces the residuals."""
        # Act
        again = run_suites("algebra", seed=0)
        # Assert
        assert [e.residual for e in again] == [e.residual for e in algebra]

    def test_invalid_suite(self):
        """Test an unknown suite is rejected."""
        # Act / Assert
        with pytest.raises(ValueError, match="Invalid suite"):
            run_suites("everything")

    def test_invalid_fault(self):
        """Test an unknown fault is rejected."""
        # Act / Assert
        with pytest.raises(ValueError, match="Invalid fault"):
            run_suites("algebra", fault="scale")

    def test_known_names(self):
        """Test the published suite and fault names."""
        # Assert
        assert SUITES == ("algebra", "weyl", "spectral", "models")
        assert list(FAULTS) == ["sign"]

    @pytest.mark.slow
    def test_all_suites_pass(self):
        """Test the full run passes."""
        # Act
        result = run_suites("all", seed=0)
        # Assert
        assert result.ok, [e.name for e in result if not e.passed]

    @pytest.mark.slow
    @pytest.mark.parametrize("suite, name", [("spectral", "point_masses"), ("models", "step_ratio")])
    def test_named_property_passes(self, suite, name):
        """Test a suite runs the named property and it passes."""
        # Act
        result = run_suites(suite, seed=0)
        # Assert
        entry = next(e for e in result if e.name == name)
        assert entry.passed, entry.detail


class TestSuiteResult:
    """Test reporting."""

    def _result(self):
        entries = [
            PropertyEntry("nesting", "weyl", True, 1e-12, 1e-10),
            PropertyEntry("containment", "weyl", False, 0.5, 1e-8, "outside by 0.5"),
        ]
        return SuiteResult(entries=entries, total=2, passed=1, failed=1, elapsed_ms=3.0)

    def test_to_dict_summary(self):
        """Test the summary counts."""
        # Act
        data = self._result().to_dict()
        # Assert
        assert data["summary"]["total"] == 2
        assert data["summary"]["failed"] == 1
        assert data["entries"][1]["detail"] == "outside by 0.5"

    def test_text_format(self):
        """Test text output marks pass and fail."""
        # Act
        text = self._result()._format_text()
        # Assert
        assert "Property Check Results" in text
        assert "[PASS] nesting" in text
        assert "[FAIL] containment" in text
        assert "! outside by 0.5" in text

    def test_save_json(self, tmp_path):
        """Test saving as JSON."""
        # Arrange
        path = tmp_path / "verify.json"
        # Act
        self._result().save(path)
        # Assert
        assert json.loads(path.read_text())["summary"]["passed"] == 1

    def test_save_text(self, tmp_path):
        """Test saving as text."""
        # Arrange
        path = tmp_path / "verify.txt"
        # Act
        self._result().save(path, format="text")
        # Assert
        assert path.read_text().startswith("Property Check Results")

    def test_save_unknown_format(self, tmp_path):
        """Test an unknown save format is rejected."""
        # Act / Assert
        with pytest.raises(ValueError):
            self._result().save(tmp_path / "x", format="xml")
