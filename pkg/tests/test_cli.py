"""Tests for the shellspec command line interface."""

import csv
import json

import pytest
from click.testing import CliRunner

from shellspec._cli.cli import cli
from shellspec._cli.utils import sweep_policy, tolerance_override
from shellspec._core.config import DEFAULT_SUITABILITY_COND_MAX, Config, TolerancePolicy

SINGLE_SITE = '{"kind": "stair", "depth": 0}'


@pytest.fixture
def runner():
    """Return a Click runner."""
    return CliRunner()


class TestGroup:
    """Test top-level options."""

    def test_help_lists_commands(self, runner):
        """Test --help names the subcommands."""
        # Act
        result = runner.invoke(cli, ["--help"])
        # Assert
        assert result.exit_code == 0
        for name in ("density", "weyl", "mc", "verify", "partition", "show-config"):
            assert name in result.output

    def test_version(self, runner):
        """Test --version prints the package version."""
        # Act
        result = runner.invoke(cli, ["--version"])
        # Assert
        assert result.exit_code == 0
        assert "version" in result.output

    def test_help_recursive(self, runner):
        """Test --help-recursive prints every command."""
        # Act
        result = runner.invoke(cli, ["--help-recursive"])
        # Assert
        assert result.exit_code == 0
        assert "shellspec weyl" in result.output

    def test_invalid_threads(self, runner):
        """Test a non-positive worker cap is a configuration error."""
        # Act
        result = runner.invoke(cli, ["--threads", "0", "show-config"])
        # Assert
        assert result.exit_code == 2

    def test_tolerance_flags_reach_config(self, runner):
        """Test group-level tolerance flags replace the policy every command reads."""
        # Act
        result = runner.invoke(cli, ["--rank-tol", "1e-8", "--eig-tol", "1e-9", "show-config", "--json"])
        # Assert
        assert result.exit_code == 0
        tolerance = json.loads(result.output)["tolerance"]
        assert tolerance["rank_rel_tol"] == 1e-8
        assert tolerance["eig_exclusion_tol"] == 1e-9
        assert tolerance["suitability_cond_max"] == DEFAULT_SUITABILITY_COND_MAX

    def test_tolerance_flag_keeps_env_values(self, runner, monkeypatch):
        """Test an unset flag leaves the environment's value in place."""
        # Arrange
        monkeypatch.setenv("SHELLSPEC_COND_MAX", "1e6")
        # Act
        result = runner.invoke(cli, ["--rank-tol", "1e-8", "show-config", "--json"])
        # Assert
        assert json.loads(result.output)["tolerance"]["suitability_cond_max"] == 1e6

    def test_invalid_tolerance_flag(self, runner):
        """Test a non-positive condition cap is a configuration error."""
        # Act
        result = runner.invoke(cli, ["--cond-max", "0", "show-config"])
        # Assert
        assert result.exit_code == 2


class TestPolicyHelpers:
    """Test the helpers that turn command flags into policies."""

    def test_sweep_policy_leaves_config_alone(self):
        """Test building a sweep policy does not replace the stored tolerance."""
        # Arrange
        stored = TolerancePolicy(rank_rel_tol=1e-7)
        Config.set_tolerance(stored)
        # Act
        policy = sweep_policy(no_perturb=True, pseudo=True)
        # Assert
        assert Config.get_tolerance() is stored
        assert policy.tolerance is stored
        assert policy.perturb is False and policy.pseudo is True

    def test_tolerance_override_merges(self):
        """Test only the given thresholds replace the stored ones."""
        # Arrange
        Config.set_tolerance(TolerancePolicy(rank_rel_tol=1e-7, eig_exclusion_tol=1e-11))
        # Act
        merged = tolerance_override(cond_max=1e6)
        # Assert
        assert merged.to_dict() == {
            "rank_rel_tol": 1e-7,
            "suitability_cond_max": 1e6,
            "eig_exclusion_tol": 1e-11,
        }
        assert Config.get_tolerance().suitability_cond_max == DEFAULT_SUITABILITY_COND_MAX


class TestShowConfig:
    """Test the show-config command."""

    def test_text(self, runner):
        """Test the text report lists variables and policy."""
        # Act
        result = runner.invoke(cli, ["show-config"])
        # Assert
        assert result.exit_code == 0
        assert "SHELLSPEC_THREADS" in result.output
        assert "Effective Policy:" in result.output

    def test_json(self, runner):
        """Test the JSON report carries the tolerance policy."""
        # Act
        result = runner.invoke(cli, ["show-config", "--json"])
        # Assert
        data = json.loads(result.output)
        assert data["status"] == "ok"
        assert "rank_rel_tol" in data["tolerance"]

    def test_alias(self, runner):
        """Test "config" resolves to show-config."""
        # Act
        result = runner.invoke(cli, ["config", "--json"])
        # Assert
        assert result.exit_code == 0

    def test_bad_env_value(self, runner, monkeypatch):
        """Test a malformed tolerance variable exits with 2."""
        # Arrange
        monkeypatch.setenv("SHELLSPEC_RANK_TOL", "tiny")
        # Act
        result = runner.invoke(cli, ["show-config"])
        # Assert
        assert result.exit_code == 2


class TestDensity:
    """Test the density command."""

    def test_single_site_csv(self, runner):
        """Test one row per grid point under the fixed header."""
        # Act
        result = runner.invoke(
            cli, ["density", "-m", SINGLE_SITE, "--lmin", "-1.5", "--lmax", "1.5", "--points", "4"]
        )
        # Assert
        assert result.exit_code == 0
        rows = list(csv.reader(result.stdout.splitlines()))
        assert rows[0][0] == "lambda"
        assert len(rows) == 5

    def test_alias_d(self, runner):
        """Test "d" resolves to density."""
        # Act
        result = runner.invoke(cli, ["d", "-m", SINGLE_SITE, "--points", "3"])
        # Assert
        assert result.exit_code == 0

    def test_malformed_model(self, runner):
        """Test malformed inline JSON exits with 2."""
        # Act
        result = runner.invoke(cli, ["density", "-m", "{bad"])
        # Assert
        assert result.exit_code == 2

    def test_model_and_graph_are_exclusive(self, runner, antitree_json):
        """Test giving both a model and a graph exits with 2."""
        # Act
        result = runner.invoke(cli, ["density", "-m", SINGLE_SITE, "-g", str(antitree_json)])
        # Assert
        assert result.exit_code == 2

    def test_bad_grid(self, runner):
        """Test an empty lambda range exits with 2."""
        # Act
        result = runner.invoke(cli, ["density", "-m", SINGLE_SITE, "--lmin", "1", "--lmax", "-1"])
        # Assert
        assert result.exit_code == 2

    def test_output_writes_masses_sidecar(self, runner, antitree_json, tmp_path):
        """Test -o writes the curve and the point masses."""
        # Arrange
        out = tmp_path / "square.csv"
        # Act
        result = runner.invoke(
            cli, ["density", "-g", str(antitree_json), "--points", "9", "-o", str(out)]
        )
        # Assert
        assert result.exit_code == 0
        assert out.exists()
        assert (tmp_path / "square.masses.csv").exists()

    def test_json_format(self, runner):
        """Test --format json prints the estimate."""
        # Act
        result = runner.invoke(cli, ["density", "-m", SINGLE_SITE, "--points", "4", "--format", "json"])
        # Assert
        data = json.loads(result.stdout)
        assert data["depth"] == 0 and len(data["density"]) == 4


class TestWeyl:
    """Test the weyl command."""

    def test_single_site_disc(self, runner):
        """Test the one-site disc at z = i."""
        # Act
        result = runner.invoke(cli, ["weyl", "-m", SINGLE_SITE, "--format", "json"])
        # Assert
        assert result.exit_code == 0
        row = json.loads(result.stdout)["rows"][0]
        assert row["center"][1] == pytest.approx(0.5)
        assert row["radius"] == pytest.approx(0.5)

    def test_real_z_rejected(self, runner):
        """Test Im z <= 0 exits with 2."""
        # Act
        result = runner.invoke(cli, ["weyl", "-m", SINGLE_SITE, "--z", "1"])
        # Assert
        assert result.exit_code == 2

    def test_unparseable_z(self, runner):
        """Test a malformed parameter exits with 2."""
        # Act
        result = runner.invoke(cli, ["weyl", "-m", SINGLE_SITE, "--z", "one"])
        # Assert
        assert result.exit_code == 2

    def test_depths_out_of_range(self, runner):
        """Test depths beyond the model exit with 2."""
        # Act
        result = runner.invoke(cli, ["weyl", "-m", SINGLE_SITE, "--depths", "0..5"])
        # Assert
        assert result.exit_code == 2


class TestMc:
    """Test the mc command."""

    def test_zero_potential(self, runner):
        """Test without noise the fourth moment is one."""
        # Arrange
        model = '{"kind": "stair", "depth": 4}'
        # Act
        result = runner.invoke(
            cli,
            ["mc", "-m", model, "--lmin", "-0.5", "--lmax", "0.5", "--points", "2",
             "--depths", "0,4", "--trials", "16", "--format", "json"],
        )
        # Assert
        assert result.exit_code == 0
        data = json.loads(result.stdout)
        assert all(v == pytest.approx(1.0) for row in data["fourth_moment"] for v in row)

    def test_too_few_trials(self, runner):
        """Test fewer than 16 trials exit with 2."""
        # Act
        result = runner.invoke(cli, ["mc", "-m", SINGLE_SITE, "--trials", "8"])
        # Assert
        assert result.exit_code == 2

    def test_custom_model_refused(self, runner, antitree_json):
        """Test Monte Carlo runs refuse custom graphs."""
        # Arrange
        model = json.dumps({"kind": "custom", "depth": 1, "graph": str(antitree_json)})
        # Act
        result = runner.invoke(cli, ["mc", "-m", model, "--trials", "16"])
        # Assert
        assert result.exit_code == 2


class TestVerify:
    """Test the verify command."""

    def test_algebra_passes(self, runner):
        """Test the algebra suite exits with 0."""
        # Act
        result = runner.invoke(cli, ["verify", "--suite", "algebra"])
        # Assert
        assert result.exit_code == 0
        assert "[FAIL]" not in result.output

    def test_injected_fault_fails(self, runner):
        """Test the sign fault is caught with exit 1."""
        # Act
        result = runner.invoke(cli, ["verify", "--suite", "algebra", "--inject-fault", "sign"])
        # Assert
        assert result.exit_code == 1
        assert "[FAIL] composition_identity" in result.output

    def test_json(self, runner):
        """Test --json prints the summary."""
        # Act
        result = runner.invoke(cli, ["verify", "--suite", "algebra", "--json"])
        # Assert
        assert json.loads(result.stdout)["summary"]["failed"] == 0

    def test_save_text(self, runner, tmp_path):
        """Test --save writes the text report."""
        # Arrange
        path = tmp_path / "verify.txt"
        # Act
        result = runner.invoke(
            cli, ["verify", "--suite", "algebra", "--save", str(path), "--save-format", "text"]
        )
        # Assert
        assert result.exit_code == 0
        assert path.read_text().startswith("Property Check Results")


class TestPartition:
    """Test the partition command."""

    def test_valid_partition(self, runner, antitree_json):
        """Test the square split {1, 2} | {0, 3} has no violations."""
        # Act
        result = runner.invoke(
            cli, ["partition", "-g", str(antitree_json), "--shells", "[[1,2],[0,3]]", "--json"]
        )
        # Assert
        assert result.exit_code == 0
        data = json.loads(result.stdout)
        assert data["violations"] == []
        assert data["partition"]["sizes"] == [2, 2]

    def test_bfs_partition(self, runner, antitree_json):
        """Test the default partition grows from the root."""
        # Act
        result = runner.invoke(cli, ["partition", "-g", str(antitree_json), "--json"])
        # Assert
        assert result.exit_code == 0
        assert json.loads(result.stdout)["partition"]["shells"][0] == [0]

    def test_violating_partition(self, runner, antitree_json):
        """Test an edge skipping a shell exits with 3."""
        # Act
        result = runner.invoke(
            cli, ["partition", "-g", str(antitree_json), "--shells", "[[0],[3],[1,2]]"]
        )
        # Assert
        assert result.exit_code == 3
        assert "Violations" in result.output

    def test_missing_graph_file(self, runner, tmp_path):
        """Test an unreadable graph exits with 2."""
        # Act
        result = runner.invoke(cli, ["partition", "-g", str(tmp_path / "none.json")])
        # Assert
        assert result.exit_code == 2
