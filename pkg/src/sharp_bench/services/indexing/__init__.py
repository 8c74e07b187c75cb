"""Closest-point search over triangle meshes."""

from sharp_bench.services.indexing.brute_force import (
    brute_force_closest,
    closest_point_triangle,
)
from sharp_bench.services.indexing.bvh import (
    EmptyIndexError,
    SpatialIndex,
    build_index,
    closest_on_mesh,
    closest_points,
)
from sharp_bench.services.indexing.kernels import (
    HIT_TOLERANCE,
    KernelResult,
    closest_points_on_triangles,
)


__all__ = [
    "EmptyIndexError",
    "HIT_TOLERANCE",
    "KernelResult",
    "SpatialIndex",
    "brute_force_closest",
    "build_index",
    "closest_on_mesh",
    "closest_point_triangle",
    "closest_points",
    "closest_points_on_triangles",
]
