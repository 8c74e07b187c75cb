"""Shared fixtures for CLI tests."""

from __future__ import annotations

from pathlib import Path

import pytest
from click.testing import CliRunner

from sharp_bench.models.config import ScoreConfig


@pytest.fixture
def cli_runner() -> CliRunner:
    """Provide Click test runner."""
    return CliRunner()


@pytest.fixture(autouse=True)
def isolated_settings(tmp_path: Path, monkeypatch: pytest.MonkeyPatch) -> None:
    """Keep the user's ~/.sharp-bench and SHARP_BENCH_* out of CLI runs."""
    home = tmp_path / "home"
    home.mkdir()
    monkeypatch.setenv("HOME", str(home))
    for name in ("JOBS", "SEED", "N_SAMPLES", "HISTOGRAM_BINS", "LOG_LEVEL"):
        monkeypatch.delenv(f"SHARP_BENCH_{name}", raising=False)


@pytest.fixture
def config_file(tmp_path: Path) -> Path:
    """Score config with sigmas sized for unit-scale spheres."""
    path = tmp_path / "score_config.yaml"
    ScoreConfig(sigma_shape=0.05, sigma_texture=0.1, n_samples=500, seed=3).save(path)
    return path
