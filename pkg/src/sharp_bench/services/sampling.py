"""Area-weighted uniform sampling of mesh surfaces.

Samples are generated in fixed chunks of ordinals. Chunk ``c`` draws from its
own generator seeded with ``(seed, c)``, so the sample set depends only on
(mesh, n, seed) and never on how many worker threads produced it.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from sharp_bench.models.measure import SurfaceSampleSet
from sharp_bench.models.mesh import SharpBenchError, TexturedMesh
from sharp_bench.services.texture import interpolate_uvs, texture_lookup_many
from sharp_bench.utils.seeding import make_rng


logger = logging.getLogger(__name__)

SAMPLE_CHUNK = 4096


class SamplingError(SharpBenchError):
    """The surface cannot be sampled (no triangles or zero total area)."""

    pass


def _sample_chunk(
    mesh: TexturedMesh, cumulative: np.ndarray, last_positive: int, seed: int, chunk: int, count: int
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    rng = make_rng(seed, chunk)
    pick = rng.random(count) * cumulative[-1]
    r = rng.random((count, 2))

    # zero-area triangles occupy empty intervals and are never selected
    tris = np.searchsorted(cumulative, pick, side="right")
    tris = np.minimum(tris, last_positive)

    sqrt_r1 = np.sqrt(r[:, 0])
    bary = np.stack(
        [1.0 - sqrt_r1, sqrt_r1 * (1.0 - r[:, 1]), sqrt_r1 * r[:, 1]], axis=1
    )
    corners = mesh.corners[tris]
    positions = (
        corners[:, 0] * bary[:, 0:1]
        + corners[:, 1] * bary[:, 1:2]
        + corners[:, 2] * bary[:, 2:3]
    )
    return positions, tris.astype(np.int64), bary


def sample_surface(mesh: TexturedMesh, n: int, seed: int, jobs: int = 1) -> SurfaceSampleSet:
    """Draw ``n`` points uniformly with respect to surface area.

    Args:
        mesh: Mesh to sample
        n: Number of samples (>= 0)
        seed: Random seed
        jobs: Worker threads; the result does not depend on this value

    Returns:
        SurfaceSampleSet with colours interpolated from the texture when the
        mesh is textured

    Raises:
        SamplingError: If n > 0 and the mesh has no triangles or zero area
    """
    if n < 0:
        raise ValueError(f"Number of samples must be non-negative, got {n}")

    colors_wanted = mesh.is_textured
    if n == 0:
        return SurfaceSampleSet(
            positions=np.zeros((0, 3)),
            triangles=np.zeros(0, dtype=np.int64),
            barycentric=np.zeros((0, 3)),
            colors=np.zeros((0, 3)) if colors_wanted else None,
        )

    if mesh.n_triangles == 0:
        raise SamplingError("Cannot sample a mesh without triangles")
    areas = mesh.triangle_areas
    cumulative = np.cumsum(areas)
    if not cumulative[-1] > 0.0:
        raise SamplingError("Cannot sample a mesh with zero total area")
    last_positive = int(np.flatnonzero(areas > 0.0)[-1])

    counts = [min(SAMPLE_CHUNK, n - s) for s in range(0, n, SAMPLE_CHUNK)]

    def run(chunk: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        return _sample_chunk(mesh, cumulative, last_positive, seed, chunk, counts[chunk])

    if jobs > 1 and len(counts) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(run, range(len(counts))))
    else:
        parts = [run(c) for c in range(len(counts))]

    positions = np.concatenate([p[0] for p in parts])
    triangles = np.concatenate([p[1] for p in parts])
    bary = np.concatenate([p[2] for p in parts])

    colors = None
    if colors_wanted:
        assert mesh.corner_uvs is not None and mesh.texture is not None
        colors = texture_lookup_many(mesh.texture, interpolate_uvs(mesh.corner_uvs, triangles, bary))

    logger.debug(f"Sampled {n} points from {mesh.n_triangles} triangles (seed={seed})")
    return SurfaceSampleSet(positions=positions, triangles=triangles, barycentric=bary, colors=colors)
