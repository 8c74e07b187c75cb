"""Pydantic models for configuration management."""

from __future__ import annotations

import logging
import os
from pathlib import Path
from typing import Any

import yaml
from pydantic import BaseModel, ConfigDict, Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from sharp_bench.models.mesh import RegionMask


logger = logging.getLogger(__name__)


class ScoreConfig(BaseModel):
    """Scoring configuration.

    Attributes:
        sigma_shape: Shape mapping scale sigma_s (meters)
        sigma_texture: Texture mapping scale sigma_t (RGB units)
        n_samples: Points sampled per directed pass (N)
        seed: Base seed for surface sampling
        use_texture: False selects shape-only evaluation (S = S_a * S_s)

    File format (YAML):
        sigma_shape: 0.0042466
        sigma_texture: 0.0849322
        n_samples: 100000
        seed: 0
        use_texture: true
    """

    sigma_shape: float = Field(..., gt=0.0, description="Shape mapping scale (m)")
    sigma_texture: float = Field(
        ..., gt=0.0, description="Texture mapping scale (RGB units)"
    )
    n_samples: int = Field(100_000, gt=0, description="Samples per directed pass")
    seed: int = Field(0, ge=0, description="Base sampling seed")
    use_texture: bool = Field(True, description="Score texture; False selects shape-only")

    @property
    def overall_mode(self) -> str:
        return "area_weighted" if self.use_texture else "shape_only"

    def save(self, path: Path) -> None:
        """Write the configuration as YAML (floats keep full precision)."""
        path = Path(path)
        with open(path, "w", encoding="utf-8") as f:
            yaml.safe_dump(self.model_dump(), f, sort_keys=False)
        logger.info(f"Wrote score config to {path}")

    @classmethod
    def load(cls, path: Path) -> ScoreConfig:
        """Read a YAML configuration written by :meth:`save` (or by hand)."""
        path = Path(path)
        with open(path, encoding="utf-8") as f:
            data = yaml.safe_load(f) or {}
        if not isinstance(data, dict):
            raise ValueError(f"Config file {path} must contain a key-value mapping")
        logger.debug(f"Loaded score config from {path}")
        return cls(**data)


class HoleSpec(BaseModel):
    """Hole cutting parameters for partial-scan generation.

    Attributes:
        holes: Number of holes cut (default 40)
        fraction: Vertices removed per hole as a fraction of the ORIGINAL
            vertex count (default 0.02)
        seed: Seed for the hole-centre sequence
        mask: Optional region mask restricting where holes are cut
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)

    holes: int = Field(40, ge=0, description="Number of holes")
    fraction: float = Field(0.02, gt=0.0, le=1.0, description="Vertex fraction per hole")
    seed: int = Field(0, ge=0, description="Hole sequence seed")
    mask: RegionMask | None = Field(None, description="Eligible vertices")

    def hole_size(self, n_vertices: int) -> int:
        """k = round(fraction * original vertex count), at least 1."""
        return max(1, int(round(self.fraction * n_vertices)))


class CalibrationTargets(BaseModel):
    """Baseline suite and target scores for sigma calibration.

    Target maps name a baseline of the suite and the score its symmetric mean
    distance should map to. Noise levels for shape are fractions of the mesh
    bounding-box diagonal.
    """

    shape_targets: dict[str, float] = Field(
        default_factory=lambda: {"partial_filled": 0.5},
        description="Baseline name -> target shape score",
    )
    texture_targets: dict[str, float] = Field(
        default_factory=lambda: {"partial_filled": 0.5},
        description="Baseline name -> target texture score",
    )
    shape_noise: float = Field(0.005, ge=0.0, description="Shape noise / bbox diagonal")
    texture_noise: float = Field(0.05, ge=0.0, description="Texture noise (RGB units)")
    local_region_radius: float = Field(
        0.05, gt=0.0, description="Local noise region radius / bbox diagonal"
    )
    local_region_count: int = Field(10, ge=1, description="Local noise regions")
    max_samples: int | None = Field(
        10, ge=1, description="Ground-truth meshes used (None = all)"
    )

    @field_validator("shape_targets", "texture_targets")
    @classmethod
    def validate_targets(cls, v: dict[str, float]) -> dict[str, float]:
        """Target scores must lie strictly inside (0, 1).

        Raises:
            ValueError: If a target is outside (0, 1)
        """
        for name, target in v.items():
            if not 0.0 < target < 1.0:
                raise ValueError(f"Target for '{name}' must lie in (0, 1), got {target}")
        return v


class BenchmarkSettings(BaseSettings):
    """Main sharp-bench settings.

    Loads configuration from:
    1. Explicit kwargs (CLI flags)
    2. Environment variables (SHARP_BENCH_*)
    3. Config file (~/.sharp-bench/config.yaml)
    4. Defaults
    """

    model_config = SettingsConfigDict(
        env_prefix="SHARP_BENCH_", env_file=".env", env_file_encoding="utf-8"
    )

    base_dir: Path = Field(
        default_factory=lambda: Path.home() / ".sharp-bench",
        description="Base directory for sharp-bench",
    )
    n_samples: int = Field(100_000, gt=0, description="Default samples per pass")
    jobs: int = Field(1, ge=1, description="Default worker count")
    seed: int = Field(0, ge=0, description="Default base seed")
    histogram_bins: int = Field(50, ge=1, description="Histogram bins over [0, 1]")
    log_level: str = Field("info", description="Logging level")

    def __init__(self, config_path: Path | None = None, **kwargs: Any) -> None:
        """Initialize settings, filling unset values from the YAML config file."""
        config_path = config_path or Path.home() / ".sharp-bench" / "config.yaml"
        yaml_config: dict[str, Any] = {}

        if config_path.exists():
            try:
                with open(config_path) as f:
                    yaml_config = yaml.safe_load(f) or {}
                logger.debug(f"Loaded settings from {config_path}")
            except Exception as e:
                logger.warning(f"Failed to load settings from {config_path}: {e}")

        for key, value in yaml_config.items():
            env_key = f"SHARP_BENCH_{key.upper()}"
            if key in type(self).model_fields and key not in kwargs and env_key not in os.environ:
                kwargs[key] = value

        super().__init__(**kwargs)
