"""Tests for shellspec._core.weyl module."""

import numpy as np
import pytest

from shellspec._core.boundary import boundary_data_direct, sweep
from shellspec._core.errors import DimensionMismatch
from shellspec._core.models import ModelSpec, build_model
from shellspec._core.verify import free_jacobi_m
from shellspec._core.weyl import (
    WeylDisc,
    fill_ratio,
    limit_point_diagnostic,
    min_solution_norm,
    resolvent_truth,
    sample_disc,
    weyl_disc,
)


class TestWeylDisc:
    """Test disc geometry."""

    def test_single_site_disc(self, single_site):
        """Test the one-site disc at z = i has center i/2 and radius 1/2."""
        # Arrange
        so, cd = single_site
        R, _ = sweep(so, cd, 1j, 0)
        # Act
        disc = weyl_disc(R, 0)
        # Assert
        assert np.isclose(disc.center, 0.5j)
        assert np.isclose(disc.radius, 0.5)

    def test_truth_inside_disc(self, free_chain):
        """Test the root resolvent of every deeper truncation lies in the disc."""
        # Arrange
        so, cd = free_chain
        z = 0.2 + 0.6j
        disc = weyl_disc(boundary_data_direct(so, cd, 0, 3, z), 3)
        # Act
        inside = [disc.contains(resolvent_truth(so, cd, n, z)) for n in range(4, so.depth + 1)]
        # Assert
        assert all(inside)

    def test_samples_fill_but_stay_inside(self, free_chain):
        """Test sampled couplings land inside the disc."""
        # Arrange
        so, cd = free_chain
        R = boundary_data_direct(so, cd, 0, 2, 0.3 + 0.4j)
        disc = weyl_disc(R, 2)
        # Act
        ratio = fill_ratio(disc, sample_disc(R, count=100, seed=1))
        # Assert
        assert 0 < ratio <= 1 + 1e-8

    def test_no_forward_channel_is_a_point(self, path_graph):
        """Test the last shell of a finite graph gives a zero-radius disc."""
        # Arrange
        from shellspec._core.graph import bfs_partition, channel_decomposition, extract_shell_operator

        so = extract_shell_operator(path_graph, bfs_partition(path_graph, 0))
        cd = channel_decomposition(so)
        # Act
        disc = weyl_disc(boundary_data_direct(so, cd, 0, so.depth, 1j), so.depth)
        # Assert
        assert disc.radius == 0.0

    def test_fill_ratio_of_empty_sample(self):
        """Test no samples give a zero ratio."""
        # Act
        ratio = fill_ratio(WeylDisc(center=0j, radius=1.0), [])
        # Assert
        assert ratio == 0.0


class TestMinimalSolution:
    """Test minimal solutions and the radius duality."""

    def test_radius_duality(self, free_chain):
        """Test r^2 at z times the minimal norms at z and conj(z) is 1 / (4 Im z^2)."""
        # Arrange
        so, cd = free_chain
        z = 0.3 + 0.5j
        n = 4
        radius = weyl_disc(boundary_data_direct(so, cd, 0, n, z), n).radius
        # Act
        _, norm = min_solution_norm(so, cd, n, z)
        _, norm_bar = min_solution_norm(so, cd, n, z.conjugate())
        # Assert
        assert np.isclose(norm * norm_bar * radius**2, 1 / (4 * z.imag**2), rtol=1e-8)

    def test_real_z_rejected(self, free_chain):
        """Test minimal solutions need a non-real parameter."""
        # Arrange
        so, cd = free_chain
        # Act / Assert
        with pytest.raises(ValueError):
            min_solution_norm(so, cd, 2, 0.5)


class TestLimitPoint:
    """Test the depth table."""

    def test_radii_shrink_and_centers_converge(self):
        """Test the free chain discs shrink toward the m-function at z = i."""
        # Arrange
        so, cd = build_model(ModelSpec(kind="stair", depth=60))
        # Act
        table = limit_point_diagnostic(so, cd, 1j, range(0, 61, 5))
        # Assert
        assert table.radii_nonincreasing()
        assert abs(table.rows[-1].center - free_jacobi_m(1j)) < 1e-3

    def test_real_z_rejected(self, single_site):
        """Test a real parameter is refused."""
        # Arrange
        so, cd = single_site
        # Act / Assert
        with pytest.raises(ValueError):
            limit_point_diagnostic(so, cd, 0.5, [0])

    def test_root_data_required(self, rng):
        """Test a disc needs a single root channel."""
        # Arrange
        from shellspec._core.boundary import random_upper_data

        R = random_upper_data(rng, 2, 2)
        # Act / Assert
        with pytest.raises(DimensionMismatch):
            weyl_disc(R)
