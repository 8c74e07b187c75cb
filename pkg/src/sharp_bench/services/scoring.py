"""Distance-to-score mapping, pair scoring, sigma calibration and aggregation.

Scores (all in [0, 1]):
- area score S_a = 1 - |A_X/(A_X+A_Y) - A_Y/(A_X+A_Y)|
- shape score S_s = (h_xy * phi(d_s_xy) + h_yx * phi(d_s_yx)) / 2
- texture score S_t, same form with the texture distances and sigma_t
- overall score S = S_a * (S_s + S_t) / 2, or S_a * S_s for shape-only runs

phi is the unit-peak Gaussian exp(-d^2 / (2 sigma^2)): 1 at d = 0 and 0.5 at
d = sigma * sqrt(2 ln 2). phi is applied to the mean distance of each pass.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Mapping, Sequence
from typing import Literal

import numpy as np
from scipy import stats
from scipy.optimize import minimize_scalar

from sharp_bench.models.config import ScoreConfig
from sharp_bench.models.measure import DirectedMeasure
from sharp_bench.models.mesh import SharpBenchError, TexturedMesh
from sharp_bench.models.report import SCORE_KEYS, AggregateReport, ScoreReport, ScoreSummary
from sharp_bench.services.distance import directed_measure
from sharp_bench.services.geometry import mesh_surface_area
from sharp_bench.services.indexing import build_index
from sharp_bench.utils.seeding import derive_sample_seed


logger = logging.getLogger(__name__)

HISTOGRAM_BINS = 50
_RANGE_TOLERANCE = 1e-12


class ScoringError(SharpBenchError):
    """Invalid scoring input: non-positive sigma, out-of-range score, unreachable target."""

    pass


def phi(d: float, sigma: float) -> float:
    """Map a distance to a score in (0, 1].

    Example:
        >>> phi(0.0, 0.1)
        1.0
        >>> round(phi(0.2, 0.1), 6)
        0.135335
    """
    if not sigma > 0.0:
        raise ScoringError(f"sigma must be positive, got {sigma}")
    if d < 0.0:
        raise ScoringError(f"Distance must be non-negative, got {d}")
    return math.exp(-(d * d) / (2.0 * sigma * sigma))


def _phi_array(d: np.ndarray, sigma: float) -> np.ndarray:
    return np.exp(-(d * d) / (2.0 * sigma * sigma))


def area_score(area_recon: float, area_gt: float) -> float:
    """Penalise a reconstruction whose area differs from the ground truth's."""
    if area_recon < 0.0 or area_gt < 0.0:
        raise ScoringError(f"Areas must be non-negative, got {area_recon}, {area_gt}")
    total = area_recon + area_gt
    if total <= 0.0:
        raise ScoringError("Area score undefined when both areas are zero")
    return 1.0 - abs(area_recon / total - area_gt / total)


def shape_score(m_xy: DirectedMeasure, m_yx: DirectedMeasure, sigma_shape: float) -> float:
    return (
        m_xy.hit_rate * phi(m_xy.mean_shape_distance, sigma_shape)
        + m_yx.hit_rate * phi(m_yx.mean_shape_distance, sigma_shape)
    ) / 2.0


def texture_score(m_xy: DirectedMeasure, m_yx: DirectedMeasure, sigma_texture: float) -> float:
    """Texture counterpart of :func:`shape_score`.

    Untextured passes carry d_t = 0, so the score reduces to the mean hit rate.
    """
    return (
        m_xy.hit_rate * phi(m_xy.mean_texture_distance, sigma_texture)
        + m_yx.hit_rate * phi(m_yx.mean_texture_distance, sigma_texture)
    ) / 2.0


def _check_unit(name: str, value: float) -> None:
    if not -_RANGE_TOLERANCE <= value <= 1.0 + _RANGE_TOLERANCE:
        raise ScoringError(f"{name} must lie in [0, 1], got {value}")


def overall_score(area: float, shape: float, texture: float | None = None) -> float:
    """S_a * (S_s + S_t) / 2, or S_a * S_s when ``texture`` is None."""
    _check_unit("Area score", area)
    _check_unit("Shape score", shape)
    if texture is None:
        return area * shape
    _check_unit("Texture score", texture)
    return area * (shape + texture) / 2.0


def _zero_report(
    area_recon: float, area_gt: float, config: ScoreConfig, sample_id: str, flags: list[str]
) -> ScoreReport:
    total = area_recon + area_gt
    area = area_score(area_recon, area_gt) if total > 0.0 else 0.0
    return ScoreReport(
        area_score=area,
        shape_score=0.0,
        texture_score=0.0,
        overall_score=0.0,
        measure_xy=DirectedMeasure.empty(),
        measure_yx=DirectedMeasure.empty(),
        area_recon=area_recon,
        area_gt=area_gt,
        shape_only_score=0.0,
        config=config.model_dump(),
        flags=flags,
        sample_id=sample_id,
    )


def failed_report(config: ScoreConfig, sample_id: str, flag: str) -> ScoreReport:
    """Zero-score report for a sample whose reconstruction is missing or unreadable."""
    return _zero_report(0.0, 0.0, config, sample_id, [flag])


def score_pair(
    gt: TexturedMesh,
    recon: TexturedMesh,
    config: ScoreConfig,
    jobs: int = 1,
    sample_id: str = "",
) -> ScoreReport:
    """Score a reconstruction X against its ground truth Y.

    Args:
        gt: Ground-truth mesh Y
        recon: Reconstructed mesh X
        config: Sigmas, sample count, seed, texture switch
        jobs: Worker threads used inside each directed pass
        sample_id: Identifier echoed in the report

    Returns:
        ScoreReport; a zero-area mesh on either side gives S = 0 and the
        "zero_area" flag instead of an error
    """
    area_recon = mesh_surface_area(recon)
    area_gt = mesh_surface_area(gt)
    if area_recon <= 0.0 or area_gt <= 0.0:
        logger.warning(f"Zero-area mesh in pair '{sample_id}': scoring 0")
        return _zero_report(area_recon, area_gt, config, sample_id, ["zero_area"])

    flags: list[str] = []
    if config.use_texture:
        if not (gt.is_textured and recon.is_textured):
            flags.append("texture_degenerate")
    else:
        gt = gt.with_texture(None)
        recon = recon.with_texture(None)

    gt_index = build_index(gt)
    recon_index = build_index(recon)
    m_xy = directed_measure(
        recon, gt_index, config.n_samples, derive_sample_seed(config.seed, "xy"), jobs=jobs
    )
    m_yx = directed_measure(
        gt, recon_index, config.n_samples, derive_sample_seed(config.seed, "yx"), jobs=jobs
    )

    s_area = area_score(area_recon, area_gt)
    s_shape = shape_score(m_xy, m_yx, config.sigma_shape)
    s_texture = texture_score(m_xy, m_yx, config.sigma_texture)
    overall = overall_score(s_area, s_shape, s_texture if config.use_texture else None)

    return ScoreReport(
        area_score=s_area,
        shape_score=s_shape,
        texture_score=s_texture,
        overall_score=overall,
        measure_xy=m_xy,
        measure_yx=m_yx,
        area_recon=area_recon,
        area_gt=area_gt,
        shape_only_score=s_area * s_shape,
        config=config.model_dump(),
        flags=flags,
        sample_id=sample_id,
    )


def baseline_distance(
    m_xy: DirectedMeasure, m_yx: DirectedMeasure, kind: Literal["shape", "texture"]
) -> float:
    """Symmetric mean distance of a baseline, the quantity sigma is fitted to."""
    if kind == "shape":
        return (m_xy.mean_shape_distance + m_yx.mean_shape_distance) / 2.0
    if kind == "texture":
        return (m_xy.mean_texture_distance + m_yx.mean_texture_distance) / 2.0
    raise ValueError(f"Unknown distance kind: {kind}")


def calibrate_sigma(reference: Sequence[tuple[float, float]]) -> float:
    """Fit sigma so that phi(d_i, sigma) matches target scores s_i.

    One pair is inverted exactly: sigma = d / sqrt(-2 ln s). Several pairs are
    fitted by least squares over log(sigma) with a bounded scalar search.

    Args:
        reference: (distance, target score) pairs

    Returns:
        sigma > 0

    Raises:
        ScoringError: If empty, a target lies outside (0, 1), or a distance is
            zero (phi(0) = 1 cannot reach a target below 1)

    Example:
        >>> round(calibrate_sigma([(0.05, 0.5)]), 7)
        0.0424661
    """
    if not reference:
        raise ScoringError("At least one (distance, target) pair is needed")

    distances = np.array([float(d) for d, _ in reference])
    targets = np.array([float(s) for _, s in reference])
    for d, s in zip(distances, targets, strict=True):
        if not 0.0 < s < 1.0:
            raise ScoringError(f"Target score {s} is unreachable: must lie in (0, 1)")
        if d < 0.0:
            raise ScoringError(f"Distance must be non-negative, got {d}")
        if d == 0.0:
            raise ScoringError("A zero distance maps to 1 and cannot reach a target below 1")

    inverted = distances / np.sqrt(-2.0 * np.log(targets))
    if len(reference) == 1:
        return float(inverted[0])

    def loss(log_sigma: float) -> float:
        residual = _phi_array(distances, math.exp(log_sigma)) - targets
        return float(np.dot(residual, residual))

    lo = math.log(float(inverted.min())) - math.log(10.0)
    hi = math.log(float(inverted.max())) + math.log(10.0)
    result = minimize_scalar(loss, bounds=(lo, hi), method="bounded", options={"xatol": 1e-12})
    sigma = math.exp(float(result.x))
    logger.debug(f"Fitted sigma={sigma:.6g} from {len(reference)} pairs (loss={result.fun:.3g})")
    return sigma


def summarize(values: Sequence[float] | np.ndarray) -> ScoreSummary:
    """Mean, population std and five-number summary; zeros when empty."""
    v = np.asarray(values, dtype=np.float64)
    if len(v) == 0:
        return ScoreSummary(0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0)
    q1, median, q3 = np.percentile(v, [25.0, 50.0, 75.0])
    return ScoreSummary(
        mean=float(np.mean(v)),
        std=float(np.std(v, ddof=0)),
        minimum=float(v.min()),
        q1=float(q1),
        median=float(median),
        q3=float(q3),
        maximum=float(v.max()),
    )


def _pearson(x: np.ndarray, y: np.ndarray) -> float | None:
    if len(x) < 2 or np.ptp(x) == 0.0 or np.ptp(y) == 0.0:
        return None
    return float(stats.pearsonr(x, y)[0])


def aggregate_scores(
    reports: Sequence[ScoreReport],
    method: str = "",
    bins: int = HISTOGRAM_BINS,
    subsets: Mapping[str, str] | None = None,
    config: ScoreConfig | None = None,
) -> AggregateReport:
    """Aggregate per-sample reports over a test set.

    Args:
        reports: Per-sample reports (zero-scored failures included)
        method: Method name recorded in the aggregate
        bins: Uniform histogram bins over [0, 1]; 1.0 falls in the last bin
        subsets: Optional sample id -> subset label mapping
        config: Score configuration echoed in the aggregate

    Returns:
        AggregateReport with reports sorted by sample id
    """
    if bins < 1:
        raise ValueError(f"bins must be at least 1, got {bins}")

    ordered = sorted(reports, key=lambda r: r.sample_id)
    values = {
        key: np.array([getattr(r, key) for r in ordered], dtype=np.float64)
        for key in SCORE_KEYS
    }
    edges = np.linspace(0.0, 1.0, bins + 1)
    histograms = {
        key: np.histogram(np.clip(v, 0.0, 1.0), bins=edges)[0].astype(int).tolist()
        for key, v in values.items()
    }

    subset_summaries: dict[str, dict[str, ScoreSummary]] = {}
    if subsets:
        labels = sorted(set(subsets.values()))
        for label in labels:
            members = [r for r in ordered if subsets.get(r.sample_id) == label]
            subset_summaries[label] = {
                key: summarize([getattr(r, key) for r in members]) for key in SCORE_KEYS
            }

    shape = values["shape_score"]
    texture = values["texture_score"]
    return AggregateReport(
        method=method,
        reports=list(ordered),
        summary={key: summarize(v) for key, v in values.items()},
        histogram_edges=edges.tolist(),
        histograms=histograms,
        correlation_pairs=[(float(s), float(t)) for s, t in zip(shape, texture, strict=True)],
        pearson=_pearson(shape, texture),
        subsets=subset_summaries,
        config=config.model_dump() if config is not None else {},
    )
