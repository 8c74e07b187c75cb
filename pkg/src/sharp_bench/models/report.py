"""Score report, batch manifest and aggregate report models."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any

from sharp_bench.models.measure import DirectedMeasure


# Fixed per-sample CSV header (machine-readable files hold fractions, not percent)
CSV_HEADER = [
    "id",
    "area_score",
    "shape_score",
    "texture_score",
    "overall_score",
    "hit_rate_xy",
    "hit_rate_yx",
    "shape_distance_xy",
    "shape_distance_yx",
    "texture_distance_xy",
    "texture_distance_yx",
    "flags",
]

SCORE_KEYS = ("shape_score", "texture_score", "overall_score")


@dataclass
class ScoreReport:
    """Scores of one reconstruction X against its ground truth Y.

    Attributes:
        area_score: S_a
        shape_score: S_s
        texture_score: S_t
        overall_score: S (S_a * (S_s + S_t) / 2, or S_a * S_s shape-only)
        measure_xy: Directed measure reconstruction -> ground truth
        measure_yx: Directed measure ground truth -> reconstruction
        area_recon: A_X
        area_gt: A_Y
        shape_only_score: S_a * S_s
        config: Echo of the ScoreConfig used
        flags: Diagnostics ("texture_degenerate", "zero_area", "missing", "load_error")
        sample_id: Batch sample identifier (empty for single pairs)
    """

    area_score: float
    shape_score: float
    texture_score: float
    overall_score: float
    measure_xy: DirectedMeasure
    measure_yx: DirectedMeasure
    area_recon: float
    area_gt: float
    shape_only_score: float
    config: dict[str, Any] = field(default_factory=dict)
    flags: list[str] = field(default_factory=list)
    sample_id: str = ""

    @property
    def flagged(self) -> bool:
        return any(f in ("zero_area", "missing", "load_error") for f in self.flags)

    def to_row(self) -> list[Any]:
        """CSV row matching :data:`CSV_HEADER`."""
        return [
            self.sample_id,
            self.area_score,
            self.shape_score,
            self.texture_score,
            self.overall_score,
            self.measure_xy.hit_rate,
            self.measure_yx.hit_rate,
            self.measure_xy.mean_shape_distance,
            self.measure_yx.mean_shape_distance,
            self.measure_xy.mean_texture_distance,
            self.measure_yx.mean_texture_distance,
            ";".join(self.flags),
        ]

    def to_dict(self) -> dict[str, Any]:
        """Convert ScoreReport to dictionary for JSON serialization."""
        return asdict(self)


@dataclass(frozen=True)
class ManifestEntry:
    """One (sample id, ground-truth path, reconstruction path) triple."""

    sample_id: str
    gt_path: Path
    recon_path: Path | None


@dataclass
class BatchManifest:
    """Ground-truth / reconstruction pairs matched by file stem.

    A reconstruction path of None marks a missing counterpart; the sample is
    still evaluated (scored 0 and flagged).
    """

    entries: list[ManifestEntry] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def sample_ids(self) -> list[str]:
        return [e.sample_id for e in self.entries]


@dataclass
class ScoreSummary:
    """Mean and population standard deviation of one score (fractions)."""

    mean: float
    std: float
    minimum: float
    q1: float
    median: float
    q3: float
    maximum: float


@dataclass
class AggregateReport:
    """Aggregate over a test set.

    Attributes:
        method: Method name (reconstruction directory name by default)
        reports: Per-sample score reports, ordered by sample id
        summary: score key -> ScoreSummary
        histogram_edges: Bin edges over [0, 1]
        histograms: score key -> bin counts
        correlation_pairs: (S_s, S_t) per sample
        pearson: Pearson coefficient of (S_s, S_t), None when undefined
        subsets: subset label -> score key -> ScoreSummary
        config: Echo of the ScoreConfig
    """

    method: str
    reports: list[ScoreReport]
    summary: dict[str, ScoreSummary]
    histogram_edges: list[float]
    histograms: dict[str, list[int]]
    correlation_pairs: list[tuple[float, float]]
    pearson: float | None
    subsets: dict[str, dict[str, ScoreSummary]] = field(default_factory=dict)
    config: dict[str, Any] = field(default_factory=dict)

    @property
    def n_samples(self) -> int:
        return len(self.reports)

    @property
    def flagged(self) -> list[str]:
        return [r.sample_id for r in self.reports if r.flagged]

    def to_dict(self) -> dict[str, Any]:
        """JSON document written by ``eval`` and read by ``report``."""
        return {
            "method": self.method,
            "n_samples": self.n_samples,
            "config": self.config,
            "mean": {k: s.mean for k, s in self.summary.items()},
            "std": {k: s.std for k, s in self.summary.items()},
            "boxplot": {
                k: {
                    "min": s.minimum,
                    "q1": s.q1,
                    "median": s.median,
                    "q3": s.q3,
                    "max": s.maximum,
                }
                for k, s in self.summary.items()
            },
            "histogram": {
                "bins": len(self.histogram_edges) - 1,
                "edges": self.histogram_edges,
                "counts": self.histograms,
            },
            "correlation": {
                "pairs": [list(p) for p in self.correlation_pairs],
                "pearson": self.pearson,
            },
            "subsets": {
                label: {k: asdict(s) for k, s in scores.items()}
                for label, scores in self.subsets.items()
            },
            "flagged": self.flagged,
        }
