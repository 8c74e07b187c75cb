"""Domain services: geometry, I/O, sampling, distances, scoring and degradation."""

from sharp_bench.services.batch_runner import BenchmarkRunner, resolve_manifest
from sharp_bench.services.calibration import CalibrationError, calibrate_directory
from sharp_bench.services.degrade import (
    HoleCuttingError,
    add_shape_noise,
    add_texture_noise,
    build_baseline_suite,
    cut_hole,
    fill_holes_baseline,
    generate_partial,
    partial_with_fill,
)
from sharp_bench.services.distance import directed_measure
from sharp_bench.services.indexing import (
    EmptyIndexError,
    build_index,
    closest_on_mesh,
    closest_point_triangle,
)
from sharp_bench.services.mesh_io import MeshFormatError, TextureFormatError, load_mesh, save_mesh
from sharp_bench.services.sampling import SamplingError, sample_surface
from sharp_bench.services.scoring import (
    ScoringError,
    aggregate_scores,
    area_score,
    calibrate_sigma,
    overall_score,
    phi,
    score_pair,
    shape_score,
    texture_score,
)


__all__ = [
    "BenchmarkRunner",
    "CalibrationError",
    "EmptyIndexError",
    "HoleCuttingError",
    "MeshFormatError",
    "SamplingError",
    "ScoringError",
    "TextureFormatError",
    "add_shape_noise",
    "add_texture_noise",
    "aggregate_scores",
    "area_score",
    "build_baseline_suite",
    "build_index",
    "calibrate_directory",
    "calibrate_sigma",
    "closest_on_mesh",
    "closest_point_triangle",
    "cut_hole",
    "directed_measure",
    "fill_holes_baseline",
    "generate_partial",
    "load_mesh",
    "overall_score",
    "partial_with_fill",
    "phi",
    "resolve_manifest",
    "sample_surface",
    "save_mesh",
    "score_pair",
    "shape_score",
    "texture_score",
]
