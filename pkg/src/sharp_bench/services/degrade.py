"""Synthetic degradation of meshes: hole cutting, noise and hole filling.

Partial scans are produced by repeatedly removing the k nearest vertices
around a random centre. k is fixed from the ORIGINAL vertex count, so every
hole removes the same number of vertices while enough eligible ones remain.
Holes may overlap; removed vertices simply cannot be picked again.

The remaining operations build the calibration baselines: Gaussian shape
noise (whole mesh or local regions), Gaussian texture noise and a centroid
fan fill of the holes a cut left behind.
"""

from __future__ import annotations

import logging
from collections.abc import Collection
from pathlib import Path
from typing import Literal

import numpy as np
from scipy.spatial import cKDTree

from sharp_bench.models.config import CalibrationTargets, HoleSpec
from sharp_bench.models.mesh import RegionMask, SharpBenchError, TexturedMesh, TextureImage
from sharp_bench.services.geometry import (
    boundary_edges,
    boundary_loops,
    keep_vertices,
    mesh_diagonal,
    vertex_keep_mask,
    vertex_knn,
)
from sharp_bench.utils.seeding import derive_sample_seed, make_rng


logger = logging.getLogger(__name__)

NoiseMode = Literal["global", "local"]


class HoleCuttingError(SharpBenchError):
    """Invalid degradation request (ineligible centre, negative noise level)."""

    pass


def load_mask_file(path: Path, n_vertices: int) -> RegionMask:
    """Read a mask file: one eligible vertex index per line.

    Blank lines and lines starting with ``#`` are skipped.

    Raises:
        HoleCuttingError: If a line is not an integer
        MeshValidationError: If an index is out of range
    """
    path = Path(path)
    indices: list[int] = []
    with open(path, encoding="utf-8") as f:
        for line_number, line in enumerate(f, start=1):
            text = line.strip()
            if not text or text.startswith("#"):
                continue
            try:
                indices.append(int(text))
            except ValueError as e:
                raise HoleCuttingError(
                    f"{path}:{line_number}: expected a vertex index, got '{text}'"
                ) from e
    logger.debug(f"Loaded mask with {len(indices)} eligible vertices from {path}")
    return RegionMask.from_indices(indices, n_vertices)


def _cut(
    mesh: TexturedMesh, center: int, k: int, mask: RegionMask | None
) -> tuple[TexturedMesh, np.ndarray]:
    if not 0 <= center < mesh.n_vertices:
        raise HoleCuttingError(f"Centre vertex {center} out of range for {mesh.n_vertices} vertices")
    if mask is not None and not mask.eligible[center]:
        raise HoleCuttingError(f"Centre vertex {center} is not eligible for hole cutting")
    doomed = vertex_knn(mesh, center, k, mask)
    keep = vertex_keep_mask(mesh, doomed)
    return keep_vertices(mesh, keep), keep


def cut_hole(
    mesh: TexturedMesh, center: int, k: int, mask: RegionMask | None = None
) -> TexturedMesh:
    """Remove the k eligible vertices nearest to ``center`` and their triangles.

    Raises:
        HoleCuttingError: If the centre is out of range or not eligible
    """
    return _cut(mesh, center, k, mask)[0]


def generate_partial(mesh: TexturedMesh, spec: HoleSpec) -> TexturedMesh:
    """Cut ``spec.holes`` holes of ``spec.hole_size(V0)`` vertices each.

    Centres are drawn uniformly among the still-present eligible vertices.
    The mask, if any, follows the vertex re-indexing after each hole.
    """
    return generate_partial_tracked(mesh, spec)[0]


def generate_partial_tracked(
    mesh: TexturedMesh, spec: HoleSpec
) -> tuple[TexturedMesh, np.ndarray]:
    """``generate_partial`` plus the source vertex index of every surviving vertex."""
    origin = np.arange(mesh.n_vertices, dtype=np.int64)
    if spec.holes == 0 or mesh.n_vertices == 0:
        return mesh, origin

    k = spec.hole_size(mesh.n_vertices)
    mask = spec.mask if spec.mask is not None else RegionMask.all(mesh.n_vertices)
    mask.check_matches(mesh)
    rng = make_rng(spec.seed)

    current = mesh
    for hole in range(spec.holes):
        eligible = np.flatnonzero(mask.eligible)
        if len(eligible) == 0:
            logger.debug(f"No eligible vertices left after {hole} holes")
            break
        center = int(eligible[rng.integers(len(eligible))])
        current, keep = _cut(current, center, k, mask)
        mask = mask.restrict(keep)
        origin = origin[keep]

    logger.debug(
        f"Cut {spec.holes} holes of {k} vertices: {mesh.n_vertices} -> {current.n_vertices}"
    )
    return current, origin


def carried_boundary(source: TexturedMesh, origin: np.ndarray) -> set[tuple[int, int]]:
    """Boundary edges of ``source`` that survive in a partial mesh.

    ``origin`` maps each partial vertex to its source index. Edges come back
    in partial indexing, smaller index first.
    """
    local = np.full(source.n_vertices, -1, dtype=np.int64)
    local[origin] = np.arange(len(origin))
    edges = local[boundary_edges(source)]
    edges = np.sort(edges[(edges >= 0).all(axis=1)], axis=1)
    return {(int(a), int(b)) for a, b in edges.tolist()}


def partial_with_fill(mesh: TexturedMesh, spec: HoleSpec) -> tuple[TexturedMesh, TexturedMesh]:
    """Partial scan and its hole-filled baseline.

    Only the holes cut into ``mesh`` are filled; its own open boundary stays open.
    """
    partial, origin = generate_partial_tracked(mesh, spec)
    return partial, fill_holes_baseline(partial, keep_open=carried_boundary(mesh, origin))


def add_shape_noise(
    mesh: TexturedMesh,
    sigma: float,
    mode: NoiseMode = "global",
    seed: int = 0,
    region_radius: float | None = None,
    region_count: int = 1,
) -> TexturedMesh:
    """Displace vertices by i.i.d. zero-mean Gaussian noise per coordinate.

    Args:
        mesh: Mesh to perturb
        sigma: Noise standard deviation (meters)
        mode: "global" moves every vertex; "local" only vertices inside balls
            of ``region_radius`` around ``region_count`` random vertices
        seed: Random seed
        region_radius: Ball radius for local mode (meters)
        region_count: Number of local regions

    Raises:
        HoleCuttingError: If sigma is negative or local parameters are missing
    """
    if sigma < 0.0:
        raise HoleCuttingError(f"Noise level must be non-negative, got {sigma}")
    if sigma == 0.0 or mesh.n_vertices == 0:
        return mesh

    rng = make_rng(seed)
    vertices = np.array(mesh.vertices)

    if mode == "global":
        vertices += rng.normal(0.0, sigma, size=vertices.shape)
        return mesh.with_vertices(vertices)

    if mode != "local":
        raise HoleCuttingError(f"Unknown noise mode: {mode}")
    if region_radius is None or region_radius <= 0.0 or region_count < 1:
        raise HoleCuttingError("Local noise needs a positive region radius and count")

    centers = rng.choice(mesh.n_vertices, size=min(region_count, mesh.n_vertices), replace=False)
    tree = cKDTree(mesh.vertices)
    neighbourhoods = tree.query_ball_point(mesh.vertices[np.sort(centers)], region_radius)
    affected = np.unique(np.concatenate([np.asarray(n, dtype=np.int64) for n in neighbourhoods]))
    vertices[affected] += rng.normal(0.0, sigma, size=(len(affected), 3))
    logger.debug(f"Local noise on {len(affected)} of {mesh.n_vertices} vertices")
    return mesh.with_vertices(vertices)


def add_texture_noise(texture: TextureImage, sigma: float, seed: int = 0) -> TextureImage:
    """Add i.i.d. Gaussian noise per channel, clamped to [0, 1]."""
    if sigma < 0.0:
        raise HoleCuttingError(f"Noise level must be non-negative, got {sigma}")
    if sigma == 0.0:
        return texture
    rng = make_rng(seed)
    noisy = texture.pixels + rng.normal(0.0, sigma, size=texture.pixels.shape)
    return TextureImage(np.clip(noisy, 0.0, 1.0))


def fill_holes_baseline(
    mesh: TexturedMesh, keep_open: Collection[tuple[int, int]] = ()
) -> TexturedMesh:
    """Close every boundary loop with a fan around its centroid.

    Loops made only of edges listed in ``keep_open`` (undirected, smaller
    index first) are left open, so a scan's own rim survives the fill.

    Existing vertices and triangles are kept as they are; one vertex per loop
    and one triangle per loop edge are appended. Each fan triangle reverses its
    boundary edge so the orientation matches the neighbouring triangle.

    Raises:
        NonManifoldError: If the boundary cannot be split into loops
    """
    open_edges = set(keep_open)
    loops = [
        loop
        for loop in boundary_loops(mesh)
        if not all(
            (min(a, b), max(a, b)) in open_edges for a, b in zip(loop, loop[1:] + loop[:1])
        )
    ]
    if not loops:
        return mesh

    textured = mesh.corner_uvs is not None
    # boundary half-edge (a, b) -> (triangle, corner of a, corner of b)
    corner_of: dict[tuple[int, int], tuple[int, int, int]] = {}
    for t, tri in enumerate(mesh.triangles.tolist()):
        for i in range(3):
            j = (i + 1) % 3
            corner_of[(tri[i], tri[j])] = (t, i, j)

    new_vertices: list[np.ndarray] = []
    new_triangles: list[list[int]] = []
    new_uvs: list[np.ndarray] = []
    next_index = mesh.n_vertices

    for loop in loops:
        center = next_index
        next_index += 1
        new_vertices.append(mesh.vertices[loop].mean(axis=0))

        edges = [(loop[i], loop[(i + 1) % len(loop)]) for i in range(len(loop))]
        if textured:
            assert mesh.corner_uvs is not None
            edge_uvs = []
            for a, b in edges:
                t, i, j = corner_of[(a, b)]
                edge_uvs.append((mesh.corner_uvs[t, i], mesh.corner_uvs[t, j]))
            center_uv = np.mean([uv for pair in edge_uvs for uv in pair], axis=0)

        for n, (a, b) in enumerate(edges):
            new_triangles.append([b, a, center])
            if textured:
                uv_a, uv_b = edge_uvs[n]
                new_uvs.append(np.array([uv_b, uv_a, center_uv]))

    vertices = np.vstack([mesh.vertices, np.array(new_vertices)])
    triangles = np.vstack([mesh.triangles, np.array(new_triangles, dtype=np.int64)])
    corner_uvs = None
    if textured:
        assert mesh.corner_uvs is not None
        corner_uvs = np.concatenate([mesh.corner_uvs, np.array(new_uvs)])

    logger.debug(f"Filled {len(loops)} holes with {len(new_triangles)} triangles")
    return TexturedMesh(vertices, triangles, corner_uvs, mesh.texture)


def build_baseline_suite(
    gt: TexturedMesh,
    hole_spec: HoleSpec,
    targets: CalibrationTargets,
    seed: int = 0,
) -> dict[str, TexturedMesh]:
    """Degraded versions of ``gt`` used to calibrate sigma.

    Returns an ordered mapping: identity, partial, partial_filled,
    partial_global_noise, partial_local_noise and, for textured meshes,
    texture_noise and partial_texture_noise. Shape noise and the local region
    radius are scaled by the ground truth's bounding-box diagonal.
    """
    diagonal = mesh_diagonal(gt)
    shape_sigma = targets.shape_noise * diagonal
    partial, filled = partial_with_fill(gt, hole_spec)

    suite: dict[str, TexturedMesh] = {
        "identity": gt,
        "partial": partial,
        "partial_filled": filled,
        "partial_global_noise": add_shape_noise(
            partial, shape_sigma, "global", derive_sample_seed(seed, "partial_global_noise")
        ),
        "partial_local_noise": add_shape_noise(
            partial,
            shape_sigma,
            "local",
            derive_sample_seed(seed, "partial_local_noise"),
            region_radius=targets.local_region_radius * diagonal,
            region_count=targets.local_region_count,
        ),
    }
    if gt.texture is not None:
        noisy = add_texture_noise(
            gt.texture, targets.texture_noise, derive_sample_seed(seed, "texture_noise")
        )
        suite["texture_noise"] = gt.with_texture(noisy)
        suite["partial_texture_noise"] = partial.with_texture(noisy)
    return suite
