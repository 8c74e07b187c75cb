"""Tests for hole cutting, noise and hole filling."""

import numpy as np
import pytest

from sharp_bench.models.config import CalibrationTargets, HoleSpec
from sharp_bench.models.mesh import MeshValidationError, RegionMask, TextureImage
from sharp_bench.services.degrade import (
    HoleCuttingError,
    add_shape_noise,
    add_texture_noise,
    build_baseline_suite,
    carried_boundary,
    cut_hole,
    fill_holes_baseline,
    generate_partial,
    generate_partial_tracked,
    load_mask_file,
    partial_with_fill,
)
from sharp_bench.services.geometry import (
    boundary_edge_count,
    boundary_loops,
    mesh_surface_area,
    remove_vertices,
)
from sharp_bench.utils.seeding import make_rng
from tests.factories import make_grid, make_uv_sphere


def knn_oracle(vertices: np.ndarray, center: int, k: int, eligible: np.ndarray) -> set:
    candidates = np.flatnonzero(eligible)
    d2 = np.sum((vertices[candidates] - vertices[center]) ** 2, axis=1)
    order = np.lexsort((candidates, d2))
    return {tuple(vertices[i]) for i in candidates[order[:k]]}


class TestCutHole:
    """Test single hole removal."""

    def test_k_one_removes_center(self, grid):
        """Test k = 1 removes only the centre vertex."""
        result = cut_hole(grid, 44, 1)
        assert result.n_vertices == grid.n_vertices - 1
        assert not any(np.array_equal(v, grid.vertices[44]) for v in result.vertices)

    def test_removes_k_vertices(self, sphere):
        """Test exactly k vertices disappear."""
        assert cut_hole(sphere, 50, 30).n_vertices == sphere.n_vertices - 30

    def test_mask_protects_vertices(self, grid):
        """Test ineligible vertices survive even when nearest."""
        mask = RegionMask.from_indices([44, 99], grid.n_vertices)
        result = cut_hole(grid, 44, 2, mask)
        assert result.n_vertices == grid.n_vertices - 2
        assert any(np.array_equal(v, grid.vertices[45]) for v in result.vertices)

    def test_ineligible_center(self, grid):
        """Test an ineligible centre is rejected."""
        mask = RegionMask.from_indices([0], grid.n_vertices)
        with pytest.raises(HoleCuttingError):
            cut_hole(grid, 44, 3, mask)

    def test_center_out_of_range(self, grid):
        """Test an out-of-range centre is rejected."""
        with pytest.raises(HoleCuttingError):
            cut_hole(grid, -1, 3)


class TestGeneratePartial:
    """Test repeated hole cutting."""

    def test_count_law(self):
        """Test 40 holes of 2% on 10000 vertices leave exactly 2000."""
        mesh = make_grid(100, 100, textured=False)
        partial = generate_partial(mesh, HoleSpec())
        assert partial.n_vertices == 2000

    def test_holes_match_knn_oracle(self):
        """Test every hole removes the brute-force k nearest survivors."""
        mesh = make_grid(100, 100, size=99.0, textured=False)
        spec = HoleSpec(seed=5)
        k = spec.hole_size(mesh.n_vertices)
        rng = make_rng(spec.seed)

        current = mesh
        for _ in range(spec.holes):
            eligible = np.ones(current.n_vertices, dtype=bool)
            center = int(rng.integers(current.n_vertices))
            expected = knn_oracle(current.vertices, center, k, eligible)
            after = cut_hole(current, center, k)
            removed = {tuple(v) for v in current.vertices} - {tuple(v) for v in after.vertices}
            assert removed == expected
            current = after

        assert np.array_equal(current.vertices, generate_partial(mesh, spec).vertices)

    def test_deterministic(self, sphere):
        """Test the same seed gives the same partial mesh."""
        spec = HoleSpec(holes=10, fraction=0.02, seed=3)
        a = generate_partial(sphere, spec)
        b = generate_partial(sphere, spec)
        assert np.array_equal(a.vertices, b.vertices)
        assert np.array_equal(a.triangles, b.triangles)

    def test_seed_changes_holes(self, sphere):
        """Test different seeds cut different holes."""
        a = generate_partial(sphere, HoleSpec(holes=3, seed=1))
        b = generate_partial(sphere, HoleSpec(holes=3, seed=2))
        assert not np.array_equal(a.vertices, b.vertices)

    def test_zero_holes(self, sphere):
        """Test zero holes return the mesh unchanged."""
        assert generate_partial(sphere, HoleSpec(holes=0)) is sphere

    def test_texture_and_uvs_kept(self, sphere):
        """Test partial meshes keep the texture and per-triangle UVs."""
        partial = generate_partial(sphere, HoleSpec(holes=4, seed=0))
        assert partial.texture is sphere.texture
        assert partial.corner_uvs.shape == (partial.n_triangles, 3, 2)

    def test_mask_limits_region(self, grid):
        """Test only masked vertices are ever removed."""
        eligible = np.flatnonzero(grid.vertices[:, 0] < 0.5)
        mask = RegionMask.from_indices(eligible, grid.n_vertices)
        partial = generate_partial(grid, HoleSpec(holes=10, fraction=0.03, seed=2, mask=mask))
        right_half = grid.vertices[grid.vertices[:, 0] >= 0.5]
        survivors = {tuple(v) for v in partial.vertices}
        assert all(tuple(v) in survivors for v in right_half)
        assert partial.n_vertices < grid.n_vertices

    def test_exhausted_mask_stops(self, grid):
        """Test cutting stops once no eligible vertex is left."""
        mask = RegionMask.from_indices([0, 1, 2], grid.n_vertices)
        partial = generate_partial(grid, HoleSpec(holes=10, fraction=0.01, seed=0, mask=mask))
        assert partial.n_vertices == grid.n_vertices - 3

    def test_tracked_origin(self, sphere):
        """Test every surviving vertex maps back to its source position."""
        spec = HoleSpec(holes=4, fraction=0.03, seed=5)
        partial, origin = generate_partial_tracked(sphere, spec)
        assert len(origin) == partial.n_vertices
        assert np.array_equal(partial.vertices, sphere.vertices[origin])
        assert np.array_equal(partial.vertices, generate_partial(sphere, spec).vertices)

    def test_hole_size_rounding(self):
        """Test k rounds and never drops below one."""
        assert HoleSpec(fraction=0.02).hole_size(10000) == 200
        assert HoleSpec(fraction=0.02).hole_size(10) == 1


class TestMaskFile:
    """Test mask file parsing."""

    def test_reads_indices(self, tmp_path):
        """Test comments and blank lines are skipped."""
        path = tmp_path / "mask.txt"
        path.write_text("# face region\n0\n\n3\n4\n")
        assert load_mask_file(path, 5).eligible.tolist() == [True, False, False, True, True]

    def test_bad_line(self, tmp_path):
        """Test a non-integer line names its position."""
        path = tmp_path / "mask.txt"
        path.write_text("0\nfoo\n")
        with pytest.raises(HoleCuttingError, match=":2:"):
            load_mask_file(path, 5)

    def test_out_of_range(self, tmp_path):
        """Test indices beyond the mesh are rejected."""
        path = tmp_path / "mask.txt"
        path.write_text("7\n")
        with pytest.raises(MeshValidationError):
            load_mask_file(path, 5)


class TestShapeNoise:
    """Test vertex perturbation."""

    def test_global_noise_std(self):
        """Test the displacement standard deviation matches sigma within 5%."""
        grid = make_grid(100, 100)
        noisy = add_shape_noise(grid, 0.01, seed=1)
        delta = noisy.vertices - grid.vertices
        assert abs(delta.std() - 0.01) <= 0.05 * 0.01
        assert abs(delta.mean()) < 1e-3
        assert np.array_equal(noisy.triangles, grid.triangles)

    def test_local_noise_stays_in_region(self):
        """Test vertices outside the noise ball are untouched."""
        grid = make_grid(100, 100)
        noisy = add_shape_noise(grid, 0.01, mode="local", seed=2, region_radius=0.1)
        moved = np.flatnonzero(np.any(noisy.vertices != grid.vertices, axis=1))
        assert 0 < len(moved) < grid.n_vertices // 10
        spread = grid.vertices[moved].max(axis=0) - grid.vertices[moved].min(axis=0)
        assert np.all(spread <= 0.2 + 1e-12)

    def test_zero_sigma_is_identity(self, sphere):
        """Test sigma = 0 returns the mesh unchanged."""
        assert add_shape_noise(sphere, 0.0) is sphere

    def test_deterministic(self, sphere):
        """Test the same seed gives the same displacement."""
        a = add_shape_noise(sphere, 0.01, seed=4)
        b = add_shape_noise(sphere, 0.01, seed=4)
        assert np.array_equal(a.vertices, b.vertices)

    def test_invalid_parameters(self, sphere):
        """Test negative sigma and incomplete local settings are rejected."""
        with pytest.raises(HoleCuttingError):
            add_shape_noise(sphere, -0.1)
        with pytest.raises(HoleCuttingError):
            add_shape_noise(sphere, 0.1, mode="local")
        with pytest.raises(HoleCuttingError):
            add_shape_noise(sphere, 0.1, mode="sideways")  # type: ignore[arg-type]


class TestTextureNoise:
    """Test texture perturbation."""

    def test_clamped_to_unit_range(self):
        """Test noisy values are clamped into [0, 1]."""
        tex = TextureImage.uniform((0.0, 0.5, 1.0), width=16, height=16)
        noisy = add_texture_noise(tex, 0.3, seed=1)
        assert noisy.pixels.min() == 0.0
        assert noisy.pixels.max() == 1.0
        assert not np.array_equal(noisy.pixels, tex.pixels)

    def test_zero_sigma(self):
        """Test sigma = 0 keeps the texture."""
        tex = TextureImage.uniform((0.2, 0.2, 0.2))
        assert add_texture_noise(tex, 0.0) is tex

    def test_negative_sigma(self):
        """Test negative sigma is rejected."""
        with pytest.raises(HoleCuttingError):
            add_texture_noise(TextureImage.uniform((0.2, 0.2, 0.2)), -1.0)


class TestFillHoles:
    """Test the centroid fan fill."""

    def test_watertight_unchanged(self, sphere):
        """Test a closed mesh is returned as is."""
        assert fill_holes_baseline(sphere) is sphere

    def test_single_missing_vertex(self, grid):
        """Test filling the holed grid closes the hole and leaves the rim open."""
        holed = remove_vertices(grid, [44])
        origin = np.delete(np.arange(grid.n_vertices), 44)
        filled = fill_holes_baseline(holed, keep_open=carried_boundary(grid, origin))
        assert boundary_edge_count(holed) == 42
        assert boundary_edge_count(filled) == boundary_edge_count(grid) == 36
        assert filled.n_vertices == holed.n_vertices + 1
        assert filled.n_triangles == holed.n_triangles + 6
        assert np.array_equal(filled.vertices[: holed.n_vertices], holed.vertices)

    def test_without_keep_open_closes_rim(self, grid):
        """Test every loop is filled when no edges are kept open."""
        holed = remove_vertices(grid, [44])
        filled = fill_holes_baseline(holed)
        assert boundary_loops(filled) == []
        assert filled.n_triangles == holed.n_triangles + 6 + 36

    def test_open_mesh_without_holes_unchanged(self, grid):
        """Test an uncut open mesh keeping its rim is returned as is."""
        keep_open = carried_boundary(grid, np.arange(grid.n_vertices))
        assert fill_holes_baseline(grid, keep_open=keep_open) is grid

    def test_fan_center_is_loop_centroid(self, grid):
        """Test the appended vertex sits at the hole's centroid."""
        holed = remove_vertices(grid, [44])
        filled = fill_holes_baseline(holed)
        assert np.allclose(filled.vertices[-1], grid.vertices[44])

    def test_partial_sphere_closed(self, sphere):
        """Test every hole of a partial sphere is closed."""
        partial = generate_partial(sphere, HoleSpec(holes=6, fraction=0.02, seed=7))
        assert boundary_loops(partial)
        filled = fill_holes_baseline(partial)
        assert boundary_loops(filled) == []
        assert mesh_surface_area(filled) > mesh_surface_area(partial)

    def test_filled_uvs_cover_new_triangles(self, grid):
        """Test fan triangles receive corner UVs from their boundary edge."""
        holed = remove_vertices(grid, [44])
        filled = fill_holes_baseline(holed)
        assert filled.corner_uvs.shape == (filled.n_triangles, 3, 2)
        assert filled.texture is grid.texture

    def test_untextured(self):
        """Test untextured meshes are filled without UVs."""
        sphere = make_uv_sphere(8, 8, textured=False)
        filled = fill_holes_baseline(remove_vertices(sphere, [0]))
        assert filled.corner_uvs is None
        assert boundary_loops(filled) == []


def interior_mask(grid) -> RegionMask:
    """Vertices at least three cells away from the rim of a 10 x 10 grid."""
    inner = [r * 10 + c for r in range(3, 7) for c in range(3, 7)]
    return RegionMask.from_indices(inner, grid.n_vertices)


class TestPartialWithFill:
    """Test partial generation paired with its hole-filled baseline."""

    def test_open_grid_keeps_rim(self, grid):
        """Test only the cut holes are filled on an open mesh."""
        spec = HoleSpec(holes=2, fraction=0.01, seed=3, mask=interior_mask(grid))
        partial, filled = partial_with_fill(grid, spec)
        assert boundary_edge_count(partial) > boundary_edge_count(grid)
        assert boundary_edge_count(filled) == boundary_edge_count(grid)
        assert len(boundary_loops(filled)) == 1
        assert np.array_equal(partial.vertices, generate_partial(grid, spec).vertices)

    def test_closed_sphere_fully_closed(self, sphere):
        """Test a watertight source gives a watertight filled baseline."""
        _, filled = partial_with_fill(sphere, HoleSpec(holes=6, fraction=0.02, seed=7))
        assert boundary_loops(filled) == []

    def test_carried_boundary_drops_removed_edges(self, grid):
        """Test rim edges touching a removed vertex are not carried over."""
        origin = np.arange(1, grid.n_vertices)
        edges = carried_boundary(grid, origin)
        assert len(edges) == 34
        assert all(a < b for a, b in edges)


class TestBaselineSuite:
    """Test calibration baseline generation."""

    def test_textured_suite(self, small_sphere):
        """Test all baselines are produced for a textured mesh."""
        suite = build_baseline_suite(
            small_sphere, HoleSpec(holes=3, fraction=0.05), CalibrationTargets(), seed=1
        )
        assert list(suite) == [
            "identity",
            "partial",
            "partial_filled",
            "partial_global_noise",
            "partial_local_noise",
            "texture_noise",
            "partial_texture_noise",
        ]
        assert suite["identity"] is small_sphere
        assert suite["partial"].n_vertices < small_sphere.n_vertices

    def test_untextured_suite(self):
        """Test texture baselines are skipped without a texture."""
        mesh = make_uv_sphere(10, 12, textured=False)
        suite = build_baseline_suite(mesh, HoleSpec(holes=2), CalibrationTargets())
        assert "texture_noise" not in suite
        assert "partial_texture_noise" not in suite

    def test_filled_baseline_keeps_open_rim(self, grid):
        """Test the filled baseline of an open mesh only closes the cut holes."""
        hole_spec = HoleSpec(holes=2, fraction=0.01, seed=1, mask=interior_mask(grid))
        suite = build_baseline_suite(grid, hole_spec, CalibrationTargets())
        assert boundary_edge_count(suite["partial_filled"]) == boundary_edge_count(grid)
