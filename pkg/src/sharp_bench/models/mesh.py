"""Core mesh and texture data types.

Design Decision: Immutable numpy-backed dataclasses

Rationale: Every module (sampling, indexing, hole cutting, scoring) reads the
same arrays. Freezing the dataclasses and marking the arrays read-only makes
meshes safe to share between worker threads; every transformation returns a
new value instead of editing in place.

Conventions:
- vertices: (V, 3) float64 positions in meters
- triangles: (T, 3) int64 vertex indices
- corner_uvs: (T, 3, 2) float64 texture coordinates per triangle corner
- texture pixels: (H, W, 3) float64 in [0, 1], row 0 is the TOP of the image,
  texture coordinate v = 0 addresses the BOTTOM row
"""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass, field

import numpy as np


class SharpBenchError(Exception):
    """Base exception for all sharp-bench errors."""

    pass


class MeshValidationError(SharpBenchError):
    """Mesh, texture or mask violates a structural invariant."""

    pass


def _readonly(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class TextureImage:
    """Texture atlas holding surface colour.

    Attributes:
        pixels: (H, W, 3) RGB array, channels normalized to [0, 1]
    """

    pixels: np.ndarray

    def __post_init__(self) -> None:
        pixels = np.array(self.pixels, dtype=np.float64, copy=True)
        if pixels.ndim != 3 or pixels.shape[2] != 3:
            raise MeshValidationError(
                f"Texture must be an (H, W, 3) array, got shape {pixels.shape}"
            )
        if pixels.shape[0] < 1 or pixels.shape[1] < 1:
            raise MeshValidationError("Texture must be at least 1x1 texel")
        if not np.all(np.isfinite(pixels)) or pixels.min() < 0.0 or pixels.max() > 1.0:
            raise MeshValidationError("Texture channel values must lie in [0, 1]")
        object.__setattr__(self, "pixels", _readonly(pixels))

    @property
    def width(self) -> int:
        return int(self.pixels.shape[1])

    @property
    def height(self) -> int:
        return int(self.pixels.shape[0])

    @classmethod
    def uniform(
        cls, color: Iterable[float], width: int = 1, height: int = 1
    ) -> TextureImage:
        """Create a single-colour texture."""
        rgb = np.asarray(list(color), dtype=np.float64)
        return cls(np.broadcast_to(rgb, (height, width, 3)))


@dataclass(frozen=True, eq=False)
class TexturedMesh:
    """Indexed triangle mesh with per-corner texture coordinates.

    Used for ground truth, partial input and reconstructions alike.

    Attributes:
        vertices: (V, 3) vertex positions (meters)
        triangles: (T, 3) vertex-index triples
        corner_uvs: (T, 3, 2) per-corner texture coordinates, or None
        texture: Attached texture atlas, or None
    """

    vertices: np.ndarray
    triangles: np.ndarray
    corner_uvs: np.ndarray | None = None
    texture: TextureImage | None = None
    _areas: np.ndarray | None = field(default=None, init=False, repr=False)

    def __post_init__(self) -> None:
        vertices = np.array(self.vertices, dtype=np.float64, copy=True).reshape(-1, 3)
        triangles = np.array(self.triangles, dtype=np.int64, copy=True).reshape(-1, 3)

        if not np.all(np.isfinite(vertices)):
            raise MeshValidationError("Vertex positions must be finite")
        if len(triangles):
            if triangles.min() < 0 or triangles.max() >= len(vertices):
                raise MeshValidationError(
                    f"Triangle index out of range for {len(vertices)} vertices"
                )
            repeated = (
                (triangles[:, 0] == triangles[:, 1])
                | (triangles[:, 1] == triangles[:, 2])
                | (triangles[:, 0] == triangles[:, 2])
            )
            if repeated.any():
                first = int(np.flatnonzero(repeated)[0])
                raise MeshValidationError(
                    f"Triangle {first} repeats a vertex index: {triangles[first].tolist()}"
                )

        corner_uvs = None
        if self.corner_uvs is not None:
            corner_uvs = np.array(self.corner_uvs, dtype=np.float64, copy=True)
            corner_uvs = corner_uvs.reshape(-1, 3, 2)
            if len(corner_uvs) != len(triangles):
                raise MeshValidationError(
                    f"corner_uvs has {len(corner_uvs)} entries for {len(triangles)} triangles"
                )
            corner_uvs = _readonly(corner_uvs)

        if self.texture is not None and corner_uvs is None:
            raise MeshValidationError("A textured mesh needs per-corner UVs")

        object.__setattr__(self, "vertices", _readonly(vertices))
        object.__setattr__(self, "triangles", _readonly(triangles))
        object.__setattr__(self, "corner_uvs", corner_uvs)

    @classmethod
    def empty(cls, texture: TextureImage | None = None) -> TexturedMesh:
        """Mesh with no vertices and no triangles."""
        uvs = np.zeros((0, 3, 2)) if texture is not None else None
        return cls(np.zeros((0, 3)), np.zeros((0, 3), dtype=np.int64), uvs, texture)

    @property
    def n_vertices(self) -> int:
        return int(len(self.vertices))

    @property
    def n_triangles(self) -> int:
        return int(len(self.triangles))

    @property
    def is_textured(self) -> bool:
        return self.texture is not None and self.corner_uvs is not None

    @property
    def corners(self) -> np.ndarray:
        """(T, 3, 3) corner positions of every triangle."""
        return self.vertices[self.triangles]

    @property
    def triangle_areas(self) -> np.ndarray:
        """(T,) triangle areas, computed once and cached."""
        if self._areas is None:
            from sharp_bench.services.geometry import triangle_areas

            object.__setattr__(self, "_areas", _readonly(triangle_areas(self.corners)))
        assert self._areas is not None
        return self._areas

    def with_vertices(self, vertices: np.ndarray) -> TexturedMesh:
        """Same connectivity, UVs and texture with new vertex positions."""
        return TexturedMesh(vertices, self.triangles, self.corner_uvs, self.texture)

    def with_texture(self, texture: TextureImage | None) -> TexturedMesh:
        """Same geometry with a different texture image."""
        return TexturedMesh(self.vertices, self.triangles, self.corner_uvs, texture)


@dataclass(frozen=True, eq=False)
class RegionMask:
    """Per-vertex eligibility for hole cutting and perturbation.

    Attributes:
        eligible: (V,) boolean array, True = vertex may be cut/perturbed
    """

    eligible: np.ndarray

    def __post_init__(self) -> None:
        eligible = np.array(self.eligible, dtype=bool, copy=True).reshape(-1)
        object.__setattr__(self, "eligible", _readonly(eligible))

    def __len__(self) -> int:
        return int(len(self.eligible))

    @property
    def count(self) -> int:
        return int(self.eligible.sum())

    @classmethod
    def all(cls, n_vertices: int) -> RegionMask:
        return cls(np.ones(n_vertices, dtype=bool))

    @classmethod
    def from_indices(cls, indices: Iterable[int], n_vertices: int) -> RegionMask:
        """Build a mask that marks only ``indices`` as eligible."""
        idx = np.asarray(list(indices), dtype=np.int64)
        if len(idx) and (idx.min() < 0 or idx.max() >= n_vertices):
            raise MeshValidationError(
                f"Mask index out of range for {n_vertices} vertices"
            )
        eligible = np.zeros(n_vertices, dtype=bool)
        eligible[idx] = True
        return cls(eligible)

    def restrict(self, keep: np.ndarray) -> RegionMask:
        """Mask for the surviving vertices after a removal (``keep`` is per-vertex)."""
        return RegionMask(self.eligible[np.asarray(keep, dtype=bool)])

    def check_matches(self, mesh: TexturedMesh) -> None:
        if len(self) != mesh.n_vertices:
            raise MeshValidationError(
                f"Mask has {len(self)} entries for {mesh.n_vertices} vertices"
            )
