"""Pytest configuration and fixtures for performance benchmarks.

Benchmark meshes are larger than the unit-test meshes and built once per
module; the query points are fixed so that rounds are comparable.
"""

import numpy as np
import pytest

from sharp_bench.models.mesh import TexturedMesh
from sharp_bench.services.indexing import SpatialIndex, build_index
from tests.factories import make_uv_sphere


@pytest.fixture(scope="module")
def dense_sphere() -> TexturedMesh:
    """Textured sphere with 9902 vertices and about 20k triangles."""
    return make_uv_sphere(100, 100)


@pytest.fixture(scope="module")
def dense_index(dense_sphere: TexturedMesh) -> SpatialIndex:
    return build_index(dense_sphere)


@pytest.fixture(scope="module")
def query_points() -> np.ndarray:
    """20k points in a shell around the unit sphere."""
    rng = np.random.default_rng(2024)
    directions = rng.normal(size=(20_000, 3))
    directions /= np.linalg.norm(directions, axis=1, keepdims=True)
    return directions * rng.uniform(0.8, 1.2, size=(20_000, 1))
