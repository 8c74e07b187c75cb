"""Sigma calibration from a suite of degraded baselines.

For each ground-truth mesh a baseline suite is built (identity, partial scan,
hole-filled partial scan, shape and texture noise). Every baseline is measured
against its ground truth in both directions, and the symmetric mean distances
are averaged over the meshes. sigma_s and sigma_t are then fitted so that the
configured baselines map to their target scores.
"""

from __future__ import annotations

import logging
from collections.abc import Callable
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from sharp_bench.models.config import CalibrationTargets, HoleSpec, ScoreConfig
from sharp_bench.models.mesh import SharpBenchError
from sharp_bench.services.degrade import build_baseline_suite
from sharp_bench.services.distance import directed_measure
from sharp_bench.services.geometry import mesh_diagonal
from sharp_bench.services.indexing import build_index
from sharp_bench.services.mesh_io import discover_meshes, load_mesh
from sharp_bench.services.scoring import ScoringError, baseline_distance, calibrate_sigma
from sharp_bench.utils.seeding import derive_sample_seed


logger = logging.getLogger(__name__)

# distances below this fraction of the mean diagonal count as zero
ZERO_DISTANCE = 1e-9
# sigma_t written for shape-only calibrations, never used for scoring
UNUSED_SIGMA_TEXTURE = 1.0


class CalibrationError(SharpBenchError):
    """The baseline suite cannot determine sigma (e.g. all distances are zero)."""

    pass


@dataclass
class CalibrationResult:
    """Fitted configuration and the distances it was fitted to.

    Attributes:
        config: Calibrated ScoreConfig
        shape_distances: Baseline name -> mean symmetric shape distance (m)
        texture_distances: Baseline name -> mean symmetric texture distance
        samples: Ground-truth sample ids used
    """

    config: ScoreConfig
    shape_distances: dict[str, float] = field(default_factory=dict)
    texture_distances: dict[str, float] = field(default_factory=dict)
    samples: list[str] = field(default_factory=list)


def fit_sigma(
    distances: dict[str, float], targets: dict[str, float], zero: float, kind: str
) -> float:
    """Fit sigma for one score kind from named baseline distances.

    Raises:
        CalibrationError: If a target names an unknown baseline or every
            targeted distance is zero
    """
    missing = sorted(set(targets) - set(distances))
    if missing:
        raise CalibrationError(f"No {kind} distance for baselines {missing}")

    pairs = [(distances[name], target) for name, target in targets.items()]
    if all(d <= zero for d, _ in pairs):
        raise CalibrationError(f"Cannot calibrate {kind} sigma from zero distances")
    try:
        return calibrate_sigma([(d, s) for d, s in pairs if d > zero])
    except ScoringError as e:
        raise CalibrationError(f"Cannot calibrate {kind} sigma: {e}") from e


def calibrate_directory(
    gt_dir: Path,
    targets: CalibrationTargets | None = None,
    holes: int = 40,
    fraction: float = 0.02,
    n_samples: int = 100_000,
    seed: int = 0,
    use_texture: bool = True,
    progress_callback: Callable[[int, int, str], None] | None = None,
) -> CalibrationResult:
    """Calibrate sigma_s and sigma_t on the ground-truth meshes in ``gt_dir``.

    Args:
        gt_dir: Directory of ground-truth ``.obj`` bundles
        targets: Target scores, noise levels and sample cap
        holes: Holes per partial scan
        fraction: Vertices per hole, fraction of the original count
        n_samples: Samples per directed pass (also written to the config)
        seed: Base seed (also written to the config)
        use_texture: False skips the texture fit and writes a shape-only config
        progress_callback: Called with (completed, total, sample id)

    Returns:
        CalibrationResult with the fitted config

    Raises:
        CalibrationError: If the directory is empty or the suite is degenerate
    """
    targets = targets or CalibrationTargets()
    meshes = discover_meshes(gt_dir)
    sample_ids = list(meshes)
    if targets.max_samples is not None:
        sample_ids = sample_ids[: targets.max_samples]
    if not sample_ids:
        raise CalibrationError(f"No ground-truth meshes found in {gt_dir}")

    shape: dict[str, list[float]] = {}
    texture: dict[str, list[float]] = {}
    diagonals: list[float] = []
    textured = use_texture

    for done, sid in enumerate(sample_ids, start=1):
        gt = load_mesh(meshes[sid]).mesh
        sample_seed = derive_sample_seed(seed, sid)
        hole_spec = HoleSpec(holes=holes, fraction=fraction, seed=sample_seed)
        suite = build_baseline_suite(gt, hole_spec, targets, sample_seed)
        textured = textured and gt.is_textured
        diagonals.append(mesh_diagonal(gt))

        gt_index = build_index(gt)
        for name, baseline in suite.items():
            m_xy = directed_measure(
                baseline, gt_index, n_samples, derive_sample_seed(sample_seed, f"{name}:xy")
            )
            m_yx = directed_measure(
                gt, build_index(baseline), n_samples, derive_sample_seed(sample_seed, f"{name}:yx")
            )
            shape.setdefault(name, []).append(baseline_distance(m_xy, m_yx, "shape"))
            texture.setdefault(name, []).append(baseline_distance(m_xy, m_yx, "texture"))
        logger.debug(f"{sid}: measured {len(suite)} baselines")
        if progress_callback:
            progress_callback(done, len(sample_ids), sid)

    shape_means = {name: float(np.mean(v)) for name, v in shape.items()}
    texture_means = {name: float(np.mean(v)) for name, v in texture.items()}

    zero = ZERO_DISTANCE * float(np.mean(diagonals))
    sigma_shape = fit_sigma(shape_means, targets.shape_targets, zero, "shape")
    if textured:
        sigma_texture = fit_sigma(texture_means, targets.texture_targets, ZERO_DISTANCE, "texture")
    else:
        logger.warning("Texture not calibrated (disabled or untextured ground truth): shape only")
        sigma_texture = UNUSED_SIGMA_TEXTURE

    config = ScoreConfig(
        sigma_shape=sigma_shape,
        sigma_texture=sigma_texture,
        n_samples=n_samples,
        seed=seed,
        use_texture=textured,
    )
    logger.info(f"Calibrated sigma_s={sigma_shape:.6g}, sigma_t={sigma_texture:.6g}")
    return CalibrationResult(
        config=config,
        shape_distances=shape_means,
        texture_distances=texture_means if textured else {},
        samples=sample_ids,
    )

