"""Tests for area-weighted surface sampling."""

import numpy as np
import pytest
from scipy.stats import chisquare

import sharp_bench.services.sampling as sampling
from sharp_bench.models.mesh import TexturedMesh
from sharp_bench.services.sampling import SamplingError, sample_surface
from tests.factories import make_triangle_soup, unit_triangle


@pytest.fixture
def two_triangles() -> TexturedMesh:
    """Disjoint triangles with areas 1 and 3."""
    vertices = np.array(
        [[0, 0, 0], [1, 0, 0], [0, 2, 0], [5, 0, 0], [8, 0, 0], [5, 2, 0]], dtype=float
    )
    return TexturedMesh(vertices, [[0, 1, 2], [3, 4, 5]])


class TestSampleSurface:
    """Test sample distribution and reproducibility."""

    def test_area_proportional_two_triangles(self, two_triangles):
        """Test triangle counts follow the 1:3 area ratio."""
        samples = sample_surface(two_triangles, 40000, seed=7)
        counts = np.bincount(samples.triangles, minlength=2)
        assert chisquare(counts, [10000, 30000]).pvalue > 1e-3

    def test_area_proportional_many_triangles(self):
        """Test triangle counts follow areas on a random soup."""
        mesh = make_triangle_soup(100, seed=11)
        samples = sample_surface(mesh, 40000, seed=3)
        counts = np.bincount(samples.triangles, minlength=100)
        expected = 40000 * mesh.triangle_areas / mesh.triangle_areas.sum()
        assert chisquare(counts, expected).pvalue > 1e-3

    def test_uniform_inside_triangle(self):
        """Test the sample mean converges to the centroid."""
        mesh = TexturedMesh(unit_triangle(), [[0, 1, 2]])
        samples = sample_surface(mesh, 20000, seed=1)
        assert np.allclose(samples.positions.mean(axis=0), [1 / 3, 1 / 3, 0.0], atol=0.01)

    def test_positions_match_barycentric(self, sphere):
        """Test positions are the barycentric combination of their triangle."""
        samples = sample_surface(sphere, 500, seed=2)
        corners = sphere.corners[samples.triangles]
        rebuilt = np.einsum("nk,nkd->nd", samples.barycentric, corners)
        assert np.allclose(rebuilt, samples.positions)
        assert samples.barycentric.min() >= 0.0
        assert np.allclose(samples.barycentric.sum(axis=1), 1.0)

    def test_deterministic(self, sphere):
        """Test the same seed gives identical samples."""
        a = sample_surface(sphere, 3000, seed=5)
        b = sample_surface(sphere, 3000, seed=5)
        assert np.array_equal(a.positions, b.positions)
        assert np.array_equal(a.colors, b.colors)

    def test_seed_changes_samples(self, sphere):
        """Test different seeds give different samples."""
        a = sample_surface(sphere, 100, seed=5)
        b = sample_surface(sphere, 100, seed=6)
        assert not np.array_equal(a.positions, b.positions)

    def test_jobs_do_not_change_samples(self, sphere, monkeypatch):
        """Test threaded chunks reproduce the single-threaded result."""
        monkeypatch.setattr(sampling, "SAMPLE_CHUNK", 100)
        a = sample_surface(sphere, 1050, seed=9, jobs=1)
        b = sample_surface(sphere, 1050, seed=9, jobs=4)
        assert np.array_equal(a.positions, b.positions)
        assert np.array_equal(a.triangles, b.triangles)

    def test_colors_when_textured(self, sphere, cube):
        """Test colours are present only for textured meshes."""
        assert sample_surface(sphere, 10, seed=0).colors.shape == (10, 3)
        assert sample_surface(cube, 10, seed=0).colors is None

    def test_zero_area_triangles_never_sampled(self):
        """Test degenerate triangles receive no samples."""
        vertices = np.vstack([unit_triangle(), [[0, 0, 0], [1, 1, 1], [2, 2, 2]]])
        mesh = TexturedMesh(vertices, [[3, 4, 5], [0, 1, 2], [3, 5, 4]])
        samples = sample_surface(mesh, 2000, seed=0)
        assert set(samples.triangles.tolist()) == {1}

    def test_zero_samples(self, sphere):
        """Test N = 0 returns an empty set."""
        samples = sample_surface(sphere, 0, seed=0)
        assert len(samples) == 0
        assert samples.colors.shape == (0, 3)

    def test_negative_n(self, sphere):
        """Test negative N is rejected."""
        with pytest.raises(ValueError):
            sample_surface(sphere, -1, seed=0)

    def test_empty_mesh(self):
        """Test a mesh without triangles cannot be sampled."""
        with pytest.raises(SamplingError):
            sample_surface(TexturedMesh.empty(), 10, seed=0)

    def test_zero_area_mesh(self):
        """Test a mesh of only degenerate triangles cannot be sampled."""
        vertices = np.array([[0, 0, 0], [1, 0, 0], [2, 0, 0]], dtype=float)
        with pytest.raises(SamplingError, match="zero total area"):
            sample_surface(TexturedMesh(vertices, [[0, 1, 2]]), 10, seed=0)
