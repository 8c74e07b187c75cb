"""Data models for sharp-bench."""

from sharp_bench.models.config import (
    BenchmarkSettings,
    CalibrationTargets,
    HoleSpec,
    ScoreConfig,
)
from sharp_bench.models.measure import (
    Correspondence,
    CorrespondenceBatch,
    DirectedMeasure,
    SurfaceSample,
    SurfaceSampleSet,
)
from sharp_bench.models.mesh import (
    MeshValidationError,
    RegionMask,
    SharpBenchError,
    TexturedMesh,
    TextureImage,
)
from sharp_bench.models.report import (
    AggregateReport,
    BatchManifest,
    ManifestEntry,
    ScoreReport,
)


__all__ = [
    "AggregateReport",
    "BatchManifest",
    "BenchmarkSettings",
    "CalibrationTargets",
    "Correspondence",
    "CorrespondenceBatch",
    "DirectedMeasure",
    "HoleSpec",
    "ManifestEntry",
    "MeshValidationError",
    "RegionMask",
    "ScoreConfig",
    "ScoreReport",
    "SharpBenchError",
    "SurfaceSample",
    "SurfaceSampleSet",
    "TexturedMesh",
    "TextureImage",
]
