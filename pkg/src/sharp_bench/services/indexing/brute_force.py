"""Exhaustive closest-triangle search.

Reference oracle for the BVH: every query is evaluated against every triangle
with the same kernel, so both paths must agree bit for bit.
"""

from __future__ import annotations

import numpy as np

from sharp_bench.models.measure import Correspondence, CorrespondenceBatch
from sharp_bench.models.mesh import TexturedMesh
from sharp_bench.services.indexing.bvh import EmptyIndexError
from sharp_bench.services.indexing.kernels import closest_points_on_triangles
from sharp_bench.services.texture import interpolate_uvs, texture_lookup_many


_BLOCK_PAIRS = 1 << 20


def closest_point_triangle(point: np.ndarray, triangle: np.ndarray) -> Correspondence:
    """Two-component closest-point query against one triangle.

    Args:
        point: (3,) query point
        triangle: (3, 3) corner positions

    Example:
        >>> tri = np.array([[0, 0, 0], [1, 0, 0], [0, 1, 0]], dtype=float)
        >>> c = closest_point_triangle(np.array([2.0, 0.0, 1.0]), tri)
        >>> c.d0, c.d1, c.hit
        (1.0, 1.0, False)
    """
    p = np.asarray(point, dtype=np.float64).reshape(1, 3)
    t = np.asarray(triangle, dtype=np.float64).reshape(3, 3)
    res = closest_points_on_triangles(p, t[0:1], t[1:2], t[2:3])
    return Correspondence(
        foot_point=res.foot_points[0],
        plane_point=res.plane_points[0],
        d0=float(res.d0[0]),
        d1=float(res.d1[0]),
        d=float(res.d[0]),
        hit=bool(res.hit[0]),
        barycentric=res.barycentric[0],
    )


def brute_force_closest(mesh: TexturedMesh, points: np.ndarray) -> CorrespondenceBatch:
    """Closest triangle per point by scanning all triangles.

    Ties on distance go to the lowest triangle index.

    Raises:
        EmptyIndexError: If the mesh has no triangles
    """
    if mesh.n_triangles == 0:
        raise EmptyIndexError("Cannot query a mesh without triangles")

    points = np.asarray(points, dtype=np.float64).reshape(-1, 3)
    corners = mesh.corners
    n_tri = len(corners)
    best = np.zeros(len(points), dtype=np.int64)

    block = max(1, _BLOCK_PAIRS // n_tri)
    for s in range(0, len(points), block):
        chunk = points[s : s + block]
        p = np.repeat(chunk, n_tri, axis=0)
        c = np.tile(corners, (len(chunk), 1, 1))
        d = closest_points_on_triangles(p, c[:, 0], c[:, 1], c[:, 2]).d
        best[s : s + len(chunk)] = np.argmin(d.reshape(len(chunk), n_tri), axis=1)

    tri_corners = corners[best]
    res = closest_points_on_triangles(
        points, tri_corners[:, 0], tri_corners[:, 1], tri_corners[:, 2]
    )
    colors = None
    if mesh.is_textured:
        assert mesh.corner_uvs is not None and mesh.texture is not None
        colors = texture_lookup_many(
            mesh.texture, interpolate_uvs(mesh.corner_uvs, best, res.barycentric)
        )
    return CorrespondenceBatch(
        foot_points=res.foot_points,
        plane_points=res.plane_points,
        d0=res.d0,
        d1=res.d1,
        d=res.d,
        hit=res.hit,
        triangles=best,
        barycentric=res.barycentric,
        colors=colors,
    )
