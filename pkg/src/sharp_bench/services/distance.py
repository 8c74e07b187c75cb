"""Directed surface-to-surface measures.

A directed pass A -> B samples N points on A, finds each point's closest
triangle on B and averages the distances. Misses contribute their distance
and colour difference to the means like hits do; only the hit rate tells them
apart.
"""

from __future__ import annotations

import logging

import numpy as np

from sharp_bench.models.measure import CorrespondenceBatch, DirectedMeasure, SurfaceSampleSet
from sharp_bench.models.mesh import TexturedMesh
from sharp_bench.services.geometry import norm3
from sharp_bench.services.indexing import SpatialIndex, closest_points
from sharp_bench.services.sampling import sample_surface


logger = logging.getLogger(__name__)


def summarize_correspondences(
    samples: SurfaceSampleSet, matches: CorrespondenceBatch
) -> DirectedMeasure:
    """Reduce per-sample correspondences to a DirectedMeasure.

    Texture distance is the Euclidean RGB distance, forced to 0 when either
    side carries no colour. Means use numpy's pairwise summation, so the value
    does not depend on how the batch was produced.
    """
    n = len(samples)
    if n == 0:
        return DirectedMeasure(
            mean_shape_distance=0.0,
            mean_texture_distance=0.0,
            hit_rate=0.0,
            n_samples=0,
            textured=samples.colors is not None and matches.colors is not None,
        )

    d = matches.d
    hits = int(np.count_nonzero(matches.hit))
    misses = d[~matches.hit]

    textured = samples.colors is not None and matches.colors is not None
    if textured:
        assert samples.colors is not None and matches.colors is not None
        mean_texture = float(np.mean(norm3(samples.colors - matches.colors)))
    else:
        mean_texture = 0.0

    return DirectedMeasure(
        mean_shape_distance=float(np.mean(d)),
        mean_texture_distance=mean_texture,
        hit_rate=hits / n,
        n_samples=n,
        hit_count=hits,
        max_shape_distance=float(np.max(d)),
        miss_mean_shape_distance=float(np.mean(misses)) if len(misses) else 0.0,
        textured=textured,
    )


def directed_measure(
    source: TexturedMesh,
    target: SpatialIndex,
    n: int,
    seed: int,
    jobs: int = 1,
) -> DirectedMeasure:
    """Measure the directed pass source -> target.

    Args:
        source: Mesh to sample (positive area)
        target: Index over the target mesh (non-empty)
        n: Number of samples
        seed: Sampling seed
        jobs: Worker threads for sampling and queries

    Returns:
        DirectedMeasure with d_s, d_t and the hit rate

    Raises:
        SamplingError: If the source has zero area
        EmptyIndexError: If the target has no triangles
    """
    samples = sample_surface(source, n, seed, jobs=jobs)
    matches = closest_points(target, samples.positions, jobs=jobs)
    measure = summarize_correspondences(samples, matches)
    logger.debug(
        f"Directed pass: d_s={measure.mean_shape_distance:.6g} "
        f"d_t={measure.mean_texture_distance:.6g} h={measure.hit_rate:.4f}"
    )
    return measure
