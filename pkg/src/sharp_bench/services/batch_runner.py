"""Batch engine behind the ``gen-partial`` and ``eval`` commands.

Design Decision: Thread pool across samples, single writer

Rationale: Scoring a test set is embarrassingly parallel across samples. Each
sample gets its own seed (base seed XOR a stable hash of its id), runs on a
worker thread over immutable meshes, and the results are sorted by sample id
before anything is written. Output bytes therefore never depend on ``jobs``.

Failures are per sample: a missing or unreadable reconstruction is scored 0
and flagged instead of aborting the batch.
"""

from __future__ import annotations

import csv
import json
import logging
from collections.abc import Callable, Mapping
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import yaml

from sharp_bench.models.config import HoleSpec, ScoreConfig
from sharp_bench.models.mesh import RegionMask, SharpBenchError, TexturedMesh
from sharp_bench.models.report import (
    CSV_HEADER,
    AggregateReport,
    BatchManifest,
    ManifestEntry,
    ScoreReport,
)
from sharp_bench.services.degrade import generate_partial, load_mask_file, partial_with_fill
from sharp_bench.services.mesh_io import discover_meshes, load_mesh, save_mesh
from sharp_bench.services.scoring import HISTOGRAM_BINS, aggregate_scores, failed_report, score_pair
from sharp_bench.utils.seeding import derive_sample_seed


logger = logging.getLogger(__name__)

# (completed, total, sample id)
ProgressCallback = Callable[[int, int, str], None]

MANIFEST_NAME = "manifest.json"
FILLED_DIR = "filled"


@dataclass
class GenerationResult:
    """Outcome of a partial-data generation run.

    Attributes:
        written: Sample ids written successfully
        failed: Sample id -> error message
        manifest_path: Path of the seed manifest
    """

    written: list[str] = field(default_factory=list)
    failed: dict[str, str] = field(default_factory=dict)
    manifest_path: Path | None = None

    @property
    def ok(self) -> bool:
        return not self.failed


def resolve_manifest(gt_dir: Path, recon_dir: Path) -> BatchManifest:
    """Pair ground-truth and reconstruction meshes by file stem.

    Every ground-truth mesh yields an entry; a missing reconstruction is
    recorded as None. Reconstructions without ground truth are ignored.
    """
    gt = discover_meshes(gt_dir)
    recon = discover_meshes(recon_dir)
    extra = sorted(set(recon) - set(gt))
    if extra:
        logger.warning(f"Ignoring {len(extra)} reconstructions without ground truth: {extra[:5]}")
    entries = [ManifestEntry(sid, path, recon.get(sid)) for sid, path in gt.items()]
    return BatchManifest(entries)


def load_subsets(path: Path) -> dict[str, str]:
    """Read a YAML mapping of sample id -> subset label."""
    with open(path, encoding="utf-8") as f:
        data = yaml.safe_load(f) or {}
    if not isinstance(data, dict):
        raise ValueError(f"Subset file {path} must contain a mapping of sample id to label")
    return {str(k): str(v) for k, v in data.items()}


def _format_cell(value: Any) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_scores_csv(aggregate: AggregateReport, path: Path) -> None:
    """Per-sample rows under the fixed :data:`CSV_HEADER`."""
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for report in aggregate.reports:
            writer.writerow([_format_cell(v) for v in report.to_row()])


def write_aggregate_json(aggregate: AggregateReport, path: Path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        json.dump(aggregate.to_dict(), f, indent=2, ensure_ascii=False)
        f.write("\n")


class BenchmarkRunner:
    """Runs partial-data generation and evaluation over directories of meshes.

    Args:
        jobs: Worker threads used across samples
    """

    def __init__(self, jobs: int = 1) -> None:
        if jobs < 1:
            raise ValueError(f"jobs must be at least 1, got {jobs}")
        self.jobs = jobs

    def _map(
        self,
        fn: Callable[[str], Any],
        sample_ids: list[str],
        progress_callback: ProgressCallback | None,
    ) -> dict[str, Any]:
        results: dict[str, Any] = {}
        total = len(sample_ids)
        if self.jobs == 1 or total <= 1:
            for done, sid in enumerate(sample_ids, start=1):
                results[sid] = fn(sid)
                if progress_callback:
                    progress_callback(done, total, sid)
            return results

        with ThreadPoolExecutor(max_workers=self.jobs) as pool:
            futures = {sid: pool.submit(fn, sid) for sid in sample_ids}
            for done, sid in enumerate(sample_ids, start=1):
                results[sid] = futures[sid].result()
                if progress_callback:
                    progress_callback(done, total, sid)
        return results

    def generate_partials(
        self,
        input_dir: Path,
        output_dir: Path,
        base_seed: int = 0,
        holes: int = 40,
        fraction: float = 0.02,
        mask_path: Path | None = None,
        fill: bool = False,
        progress_callback: ProgressCallback | None = None,
    ) -> GenerationResult:
        """Cut holes in every mesh of ``input_dir`` and write the partial scans.

        Outputs keep the input file stems. A seed manifest is written to
        ``output_dir/manifest.json``; with ``fill`` the hole-filled baseline
        is written to ``output_dir/filled/``.

        Args:
            input_dir: Directory of ground-truth ``.obj`` bundles
            output_dir: Destination directory (created if needed)
            base_seed: Base seed; per-sample seeds are derived from it
            holes: Holes per mesh
            fraction: Vertices removed per hole, fraction of the original count
            mask_path: Mask file for every mesh, or a directory of
                ``<stem>.txt`` masks
            fill: Also write the hole-filled baseline
            progress_callback: Called with (completed, total, sample id)
        """
        meshes = discover_meshes(input_dir)
        output_dir = Path(output_dir)
        output_dir.mkdir(parents=True, exist_ok=True)
        if fill:
            (output_dir / FILLED_DIR).mkdir(exist_ok=True)

        seeds = {sid: derive_sample_seed(base_seed, sid) for sid in meshes}
        result = GenerationResult()

        def run(sid: str) -> str | None:
            try:
                mesh = load_mesh(meshes[sid]).mesh
                spec = HoleSpec(
                    holes=holes,
                    fraction=fraction,
                    seed=seeds[sid],
                    mask=self._mask_for(mask_path, sid, mesh),
                )
                if fill:
                    partial, filled = partial_with_fill(mesh, spec)
                    save_mesh(filled, output_dir / FILLED_DIR / f"{sid}.obj")
                else:
                    partial = generate_partial(mesh, spec)
                save_mesh(partial, output_dir / f"{sid}.obj")
                logger.debug(f"{sid}: {mesh.n_vertices} -> {partial.n_vertices} vertices")
                return None
            except (SharpBenchError, OSError, ValueError) as e:
                logger.warning(f"Partial generation failed for {sid}: {e}")
                return str(e)

        outcomes = self._map(run, list(meshes), progress_callback)
        for sid, error in outcomes.items():
            if error is None:
                result.written.append(sid)
            else:
                result.failed[sid] = error

        manifest = {
            "base_seed": base_seed,
            "holes": holes,
            "fraction": fraction,
            "samples": {sid: seeds[sid] for sid in result.written},
        }
        result.manifest_path = output_dir / MANIFEST_NAME
        with open(result.manifest_path, "w", encoding="utf-8") as f:
            json.dump(manifest, f, indent=2)
            f.write("\n")

        logger.info(
            f"Generated {len(result.written)} partial meshes in {output_dir}"
            f" ({len(result.failed)} failed)"
        )
        return result

    @staticmethod
    def _mask_for(mask_path: Path | None, sid: str, mesh: TexturedMesh) -> RegionMask | None:
        if mask_path is None:
            return None
        mask_path = Path(mask_path)
        if mask_path.is_dir():
            candidate = mask_path / f"{sid}.txt"
            if not candidate.exists():
                return None
            return load_mask_file(candidate, mesh.n_vertices)
        return load_mask_file(mask_path, mesh.n_vertices)

    def evaluate(
        self,
        manifest: BatchManifest,
        config: ScoreConfig,
        method: str = "",
        subsets: Mapping[str, str] | None = None,
        bins: int = HISTOGRAM_BINS,
        progress_callback: ProgressCallback | None = None,
    ) -> AggregateReport:
        """Score every manifest entry and aggregate.

        Each sample is scored with seed ``derive_sample_seed(config.seed, id)``.
        Missing reconstructions are flagged "missing", unreadable meshes
        "load_error"; both score 0 and stay in the aggregate.
        """

        def run(sid: str) -> ScoreReport:
            entry = by_id[sid]
            if entry.recon_path is None:
                logger.warning(f"{sid}: reconstruction missing, scoring 0")
                return failed_report(config, sid, "missing")
            try:
                gt = load_mesh(entry.gt_path).mesh
                recon = load_mesh(entry.recon_path).mesh
            except (SharpBenchError, OSError) as e:
                logger.warning(f"{sid}: cannot load mesh ({e}), scoring 0")
                return failed_report(config, sid, "load_error")
            sample_config = config.model_copy(
                update={"seed": derive_sample_seed(config.seed, sid)}
            )
            return score_pair(gt, recon, sample_config, sample_id=sid)

        by_id = {e.sample_id: e for e in manifest.entries}
        reports = self._map(run, manifest.sample_ids, progress_callback)
        aggregate = aggregate_scores(
            list(reports.values()), method=method, bins=bins, subsets=subsets, config=config
        )
        logger.info(
            f"Evaluated {aggregate.n_samples} samples for '{method}'"
            f" ({len(aggregate.flagged)} flagged)"
        )
        return aggregate
