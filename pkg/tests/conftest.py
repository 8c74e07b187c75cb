"""Pytest configuration and fixtures for sharp-bench tests."""

from collections.abc import Generator
from pathlib import Path

import numpy as np
import pytest

from sharp_bench.models.config import ScoreConfig
from sharp_bench.models.mesh import TexturedMesh
from sharp_bench.services.mesh_io import save_mesh
from tests.factories import make_cube, make_grid, make_uv_sphere


@pytest.fixture
def sphere() -> TexturedMesh:
    """Textured unit sphere, 20 x 20 grid (382 vertices)."""
    return make_uv_sphere(20, 20)


@pytest.fixture
def small_sphere() -> TexturedMesh:
    """Coarse textured sphere for fast end-to-end checks."""
    return make_uv_sphere(10, 12)


@pytest.fixture
def grid() -> TexturedMesh:
    """Textured planar 10 x 10 vertex grid over the unit square."""
    return make_grid(10, 10)


@pytest.fixture
def cube() -> TexturedMesh:
    return make_cube()


@pytest.fixture
def score_config() -> ScoreConfig:
    """Fixed sigmas sized for unit-scale test meshes."""
    return ScoreConfig(sigma_shape=0.05, sigma_texture=0.1, n_samples=2000, seed=3)


@pytest.fixture
def mesh_dir(tmp_path: Path) -> Generator[Path, None, None]:
    """Directory of three small textured spheres of different sizes.

    Args:
        tmp_path: Pytest temporary path fixture

    Yields:
        Path to directory containing sphere_0.obj .. sphere_2.obj
    """
    directory = tmp_path / "gt"
    directory.mkdir()
    for i in range(3):
        mesh = make_uv_sphere(10, 12, radius=1.0 + 0.25 * i)
        save_mesh(mesh, directory / f"sphere_{i}.obj")
    yield directory


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(12345)
