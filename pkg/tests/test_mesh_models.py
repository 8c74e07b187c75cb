"""Tests for the core mesh, texture and mask data types."""

import numpy as np
import pytest

from sharp_bench.models.mesh import (
    MeshValidationError,
    RegionMask,
    TexturedMesh,
    TextureImage,
)
from tests.factories import make_grid, unit_triangle


class TestTextureImage:
    """Test texture construction and validation."""

    def test_valid_texture(self):
        """Test a well-formed texture exposes its size."""
        tex = TextureImage(np.zeros((4, 8, 3)))
        assert tex.width == 8
        assert tex.height == 4

    def test_pixels_read_only(self):
        """Test pixel arrays cannot be modified in place."""
        tex = TextureImage(np.zeros((2, 2, 3)))
        with pytest.raises(ValueError):
            tex.pixels[0, 0, 0] = 1.0

    def test_input_array_copied(self):
        """Test later edits to the source array do not leak into the texture."""
        source = np.zeros((2, 2, 3))
        tex = TextureImage(source)
        source[0, 0, 0] = 1.0
        assert tex.pixels[0, 0, 0] == 0.0

    @pytest.mark.parametrize("shape", [(4, 4), (4, 4, 4), (0, 4, 3)])
    def test_bad_shape_rejected(self, shape):
        """Test non-RGB or empty arrays are rejected."""
        with pytest.raises(MeshValidationError):
            TextureImage(np.zeros(shape))

    @pytest.mark.parametrize("value", [-0.1, 1.5, np.nan])
    def test_out_of_range_rejected(self, value):
        """Test channel values must lie in [0, 1]."""
        pixels = np.zeros((2, 2, 3))
        pixels[1, 1, 2] = value
        with pytest.raises(MeshValidationError):
            TextureImage(pixels)

    def test_uniform(self):
        """Test single-colour texture helper."""
        tex = TextureImage.uniform((1.0, 0.0, 0.0), width=3, height=2)
        assert tex.pixels.shape == (2, 3, 3)
        assert np.all(tex.pixels[..., 0] == 1.0)
        assert np.all(tex.pixels[..., 1:] == 0.0)


class TestTexturedMesh:
    """Test mesh construction invariants."""

    def test_single_triangle(self):
        """Test a single triangle mesh."""
        mesh = TexturedMesh(unit_triangle(), [[0, 1, 2]])
        assert mesh.n_vertices == 3
        assert mesh.n_triangles == 1
        assert not mesh.is_textured
        assert mesh.triangle_areas[0] == pytest.approx(0.5)

    def test_index_out_of_range(self):
        """Test triangle indices must reference existing vertices."""
        with pytest.raises(MeshValidationError, match="out of range"):
            TexturedMesh(unit_triangle(), [[0, 1, 3]])

    def test_negative_index(self):
        """Test negative indices are rejected."""
        with pytest.raises(MeshValidationError):
            TexturedMesh(unit_triangle(), [[0, 1, -1]])

    def test_repeated_vertex_rejected(self):
        """Test a triangle may not repeat a vertex."""
        with pytest.raises(MeshValidationError, match="repeats"):
            TexturedMesh(unit_triangle(), [[0, 1, 1]])

    def test_non_finite_vertices_rejected(self):
        """Test NaN positions are rejected."""
        vertices = unit_triangle()
        vertices[0, 0] = np.nan
        with pytest.raises(MeshValidationError):
            TexturedMesh(vertices, [[0, 1, 2]])

    def test_corner_uv_count_must_match(self):
        """Test corner_uvs needs one entry per triangle."""
        with pytest.raises(MeshValidationError, match="corner_uvs"):
            TexturedMesh(unit_triangle(), [[0, 1, 2]], np.zeros((2, 3, 2)))

    def test_texture_requires_uvs(self):
        """Test a texture cannot be attached without UVs."""
        with pytest.raises(MeshValidationError):
            TexturedMesh(unit_triangle(), [[0, 1, 2]], texture=TextureImage.uniform((1, 1, 1)))

    def test_empty_mesh(self):
        """Test the empty mesh constructor."""
        mesh = TexturedMesh.empty()
        assert mesh.n_vertices == 0
        assert mesh.n_triangles == 0

    def test_degenerate_triangle_allowed(self):
        """Test zero-area triangles with distinct indices are valid."""
        vertices = np.array([[0, 0, 0], [1, 0, 0], [2, 0, 0]], dtype=float)
        mesh = TexturedMesh(vertices, [[0, 1, 2]])
        assert mesh.triangle_areas[0] == 0.0

    def test_arrays_read_only(self, grid):
        """Test mesh arrays are frozen."""
        with pytest.raises(ValueError):
            grid.vertices[0, 0] = 5.0
        with pytest.raises(ValueError):
            grid.triangles[0, 0] = 1

    def test_with_vertices_keeps_connectivity(self, grid):
        """Test with_vertices shares triangles, UVs and texture."""
        moved = grid.with_vertices(grid.vertices + 1.0)
        assert np.array_equal(moved.triangles, grid.triangles)
        assert np.array_equal(moved.corner_uvs, grid.corner_uvs)
        assert moved.texture is grid.texture
        assert np.allclose(moved.vertices, grid.vertices + 1.0)

    def test_with_texture_none(self, grid):
        """Test dropping the texture leaves an untextured mesh."""
        assert not grid.with_texture(None).is_textured


class TestRegionMask:
    """Test vertex eligibility masks."""

    def test_all(self):
        """Test the all-eligible mask."""
        mask = RegionMask.all(5)
        assert len(mask) == 5
        assert mask.count == 5

    def test_from_indices(self):
        """Test building a mask from an index list."""
        mask = RegionMask.from_indices([0, 3], 5)
        assert mask.eligible.tolist() == [True, False, False, True, False]

    def test_from_indices_out_of_range(self):
        """Test out-of-range indices are rejected."""
        with pytest.raises(MeshValidationError):
            RegionMask.from_indices([5], 5)

    def test_restrict_follows_survivors(self):
        """Test restrict keeps entries of surviving vertices in order."""
        mask = RegionMask.from_indices([1, 3], 4)
        restricted = mask.restrict(np.array([True, False, True, True]))
        assert restricted.eligible.tolist() == [False, False, True]

    def test_check_matches(self):
        """Test a mask of the wrong length is rejected."""
        mesh = make_grid(3, 3)
        with pytest.raises(MeshValidationError):
            RegionMask.all(4).check_matches(mesh)
        RegionMask.all(9).check_matches(mesh)
