"""Tests for directed surface measures."""

import numpy as np
import pytest

from sharp_bench.models.mesh import TexturedMesh, TextureImage
from sharp_bench.services.distance import directed_measure
from sharp_bench.services.geometry import keep_vertices
from sharp_bench.services.indexing import build_index
from sharp_bench.services.sampling import SamplingError
from tests.factories import make_grid


class TestDirectedMeasure:
    """Test d_s, d_t and hit rate of one directed pass."""

    def test_self_pass(self, sphere):
        """Test a mesh measured against itself is all hits at zero distance."""
        m = directed_measure(sphere, build_index(sphere), 2000, seed=1)
        assert m.hit_rate == 1.0
        assert m.mean_shape_distance <= 1e-9
        assert m.mean_texture_distance <= 1e-9
        assert m.n_samples == 2000
        assert m.textured

    def test_translated_plane(self):
        """Test a parallel offset patch reports the offset as d_s."""
        source = make_grid(11, 11)
        target = make_grid(11, 11, z=0.01)
        m = directed_measure(source, build_index(target), 2000, seed=2)
        assert m.mean_shape_distance == pytest.approx(0.01, abs=1e-9)
        assert m.hit_rate == 1.0

    def test_half_removed(self):
        """Test removing half of the target halves the hit rate."""
        source = make_grid(21, 21)
        target = keep_vertices(source, source.vertices[:, 0] <= 0.5 + 1e-9)
        m = directed_measure(source, build_index(target), 10000, seed=3)
        assert abs(m.hit_rate - 0.5) <= 0.02
        assert m.miss_mean_shape_distance > 0.0
        assert m.hit_count == round(m.hit_rate * 10000)

    def test_texture_difference(self):
        """Test uniformly recoloured targets give a constant RGB distance."""
        source = make_grid(5, 5).with_texture(TextureImage.uniform((0.0, 0.0, 0.0)))
        target = source.with_texture(TextureImage.uniform((0.3, 0.4, 0.0)))
        m = directed_measure(source, build_index(target), 500, seed=4)
        assert m.mean_texture_distance == pytest.approx(0.5)

    def test_untextured_side_forces_zero(self, sphere):
        """Test d_t is 0 when the target has no texture."""
        bare = sphere.with_texture(None)
        m = directed_measure(sphere, build_index(bare), 500, seed=5)
        assert m.mean_texture_distance == 0.0
        assert not m.textured

    def test_deterministic_across_jobs(self, sphere):
        """Test the measure does not depend on the worker count."""
        target = build_index(sphere.with_vertices(sphere.vertices * 1.05))
        a = directed_measure(sphere, target, 3000, seed=6, jobs=1)
        b = directed_measure(sphere, target, 3000, seed=6, jobs=3)
        assert a == b

    def test_zero_area_source(self, sphere):
        """Test an empty source cannot be measured."""
        with pytest.raises(SamplingError):
            directed_measure(TexturedMesh.empty(), build_index(sphere), 10, seed=0)

    def test_max_distance_bounds_mean(self, sphere):
        """Test the recorded maximum is at least the mean."""
        target = build_index(sphere.with_vertices(sphere.vertices + [0.1, 0.0, 0.0]))
        m = directed_measure(sphere, target, 1000, seed=7)
        assert m.max_shape_distance >= m.mean_shape_distance > 0.0
        assert np.isfinite(m.max_shape_distance)
