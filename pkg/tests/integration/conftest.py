"""Pytest configuration and fixtures for integration tests."""

from collections.abc import Generator
from pathlib import Path

import pytest

from sharp_bench.models.mesh import TexturedMesh
from sharp_bench.services.mesh_io import save_mesh
from tests.factories import make_uv_sphere


@pytest.fixture(scope="module")
def sphere_set() -> dict[str, TexturedMesh]:
    """Ten textured spheres of slightly different radii and positions."""
    return {
        f"sample_{i:03d}": make_uv_sphere(
            20, 20, radius=1.0 + 0.05 * i, center=(0.1 * i, 0.0, -0.05 * i)
        )
        for i in range(10)
    }


@pytest.fixture
def sphere_set_dir(tmp_path: Path, sphere_set) -> Generator[Path, None, None]:
    """The sphere set written as .obj bundles.

    Args:
        tmp_path: Pytest temporary path fixture
        sphere_set: Meshes by sample id

    Yields:
        Path to the ground-truth directory
    """
    directory = tmp_path / "gt"
    directory.mkdir()
    for sample_id, mesh in sphere_set.items():
        save_mesh(mesh, directory / f"{sample_id}.obj")
    yield directory


@pytest.fixture(scope="module")
def dense_sphere_dir(tmp_path_factory: pytest.TempPathFactory) -> Path:
    """Ten finer textured spheres (40 x 40) written as .obj bundles."""
    directory = tmp_path_factory.mktemp("dense_gt")
    for i in range(10):
        mesh = make_uv_sphere(40, 40, radius=1.0 + 0.05 * i, center=(0.1 * i, 0.0, -0.05 * i))
        save_mesh(mesh, directory / f"sample_{i:03d}.obj")
    return directory
