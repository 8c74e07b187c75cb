"""Data models for surface samples, closest-point correspondences and
directed surface-to-surface measures.

Samples and correspondences are produced in bulk as array-backed batches
(``SurfaceSampleSet``, ``CorrespondenceBatch``); indexing a batch yields the
single-item views (``SurfaceSample``, ``Correspondence``).
"""

from __future__ import annotations

from collections.abc import Iterator
from dataclasses import asdict, dataclass
from typing import Any

import numpy as np


@dataclass(frozen=True)
class SurfaceSample:
    """A point sampled on a mesh surface.

    Attributes:
        position: (3,) position in meters
        triangle: Index of the source triangle
        barycentric: (w0, w1, w2), non-negative, summing to 1
        color: RGB in [0, 1], or None for untextured meshes
    """

    position: np.ndarray
    triangle: int
    barycentric: np.ndarray
    color: np.ndarray | None = None


@dataclass(frozen=True, eq=False)
class SurfaceSampleSet:
    """Array-backed batch of surface samples.

    Attributes:
        positions: (N, 3) sample positions
        triangles: (N,) source triangle indices
        barycentric: (N, 3) barycentric coordinates
        colors: (N, 3) interpolated texture colours, or None if untextured
    """

    positions: np.ndarray
    triangles: np.ndarray
    barycentric: np.ndarray
    colors: np.ndarray | None = None

    def __len__(self) -> int:
        return int(len(self.positions))

    def __getitem__(self, i: int) -> SurfaceSample:
        return SurfaceSample(
            position=self.positions[i],
            triangle=int(self.triangles[i]),
            barycentric=self.barycentric[i],
            color=None if self.colors is None else self.colors[i],
        )

    def __iter__(self) -> Iterator[SurfaceSample]:
        for i in range(len(self)):
            yield self[i]


@dataclass(frozen=True)
class Correspondence:
    """Result of a closest-point query against a triangle or mesh.

    The point-to-triangle distance has two components: ``d0`` from the query
    point to its projection ``p0`` on the triangle plane, and ``d1`` from ``p0``
    to the nearest triangle point ``p1`` within that plane. ``d = d0 + d1``.

    Attributes:
        foot_point: p1, nearest point of the triangle (meters)
        plane_point: p0, projection on the triangle plane (meters)
        d0: Plane distance
        d1: In-plane distance (0 for a hit)
        d: Total distance d0 + d1
        hit: True when p0 lies inside the triangle
        triangle: Index of the winning triangle on the target (-1 for a lone triangle)
        barycentric: Barycentric coordinates of p1 in the winning triangle
        color: Target colour at p1, or None if the target is untextured
    """

    foot_point: np.ndarray
    plane_point: np.ndarray
    d0: float
    d1: float
    d: float
    hit: bool
    triangle: int = -1
    barycentric: np.ndarray | None = None
    color: np.ndarray | None = None


@dataclass(frozen=True, eq=False)
class CorrespondenceBatch:
    """Array-backed batch of correspondences, one row per query point."""

    foot_points: np.ndarray
    plane_points: np.ndarray
    d0: np.ndarray
    d1: np.ndarray
    d: np.ndarray
    hit: np.ndarray
    triangles: np.ndarray
    barycentric: np.ndarray
    colors: np.ndarray | None = None

    def __len__(self) -> int:
        return int(len(self.d))

    def __getitem__(self, i: int) -> Correspondence:
        return Correspondence(
            foot_point=self.foot_points[i],
            plane_point=self.plane_points[i],
            d0=float(self.d0[i]),
            d1=float(self.d1[i]),
            d=float(self.d[i]),
            hit=bool(self.hit[i]),
            triangle=int(self.triangles[i]),
            barycentric=self.barycentric[i],
            color=None if self.colors is None else self.colors[i],
        )

    @classmethod
    def concatenate(cls, batches: list[CorrespondenceBatch]) -> CorrespondenceBatch:
        """Join batches in order."""
        has_colors = all(b.colors is not None for b in batches) and bool(batches)
        return cls(
            foot_points=np.concatenate([b.foot_points for b in batches]),
            plane_points=np.concatenate([b.plane_points for b in batches]),
            d0=np.concatenate([b.d0 for b in batches]),
            d1=np.concatenate([b.d1 for b in batches]),
            d=np.concatenate([b.d for b in batches]),
            hit=np.concatenate([b.hit for b in batches]),
            triangles=np.concatenate([b.triangles for b in batches]),
            barycentric=np.concatenate([b.barycentric for b in batches]),
            colors=(
                np.concatenate([b.colors for b in batches])  # type: ignore[misc]
                if has_colors
                else None
            ),
        )


@dataclass(frozen=True)
class DirectedMeasure:
    """Aggregate of one directed pass A -> B.

    Attributes:
        mean_shape_distance: d_s, mean of d over all N samples (meters)
        mean_texture_distance: d_t, mean RGB distance over all N samples
        hit_rate: h = hits / N
        n_samples: N
        hit_count: Number of hits
        max_shape_distance: Largest d among the samples
        miss_mean_shape_distance: Mean d over misses only (0 if none)
        textured: False when either side had no texture (d_t forced to 0)
    """

    mean_shape_distance: float
    mean_texture_distance: float
    hit_rate: float
    n_samples: int
    hit_count: int = 0
    max_shape_distance: float = 0.0
    miss_mean_shape_distance: float = 0.0
    textured: bool = True

    def to_dict(self) -> dict[str, Any]:
        """Convert DirectedMeasure to dictionary for JSON serialization."""
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> DirectedMeasure:
        return cls(**data)

    @classmethod
    def empty(cls) -> DirectedMeasure:
        """Measure of a pass that could not run (zero area / missing mesh)."""
        return cls(
            mean_shape_distance=0.0,
            mean_texture_distance=0.0,
            hit_rate=0.0,
            n_samples=0,
            textured=False,
        )
