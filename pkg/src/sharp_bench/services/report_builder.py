"""Comparison tables and plot data from aggregate JSON files."""

from __future__ import annotations

import csv
import io
import json
import logging
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from rich import box
from rich.console import Console
from rich.table import Table
from rich.text import Text

from sharp_bench.models.mesh import SharpBenchError
from sharp_bench.models.report import SCORE_KEYS


logger = logging.getLogger(__name__)

# config keys that must agree for scores to be comparable
COMPARABLE_KEYS = ("sigma_shape", "sigma_texture", "n_samples", "use_texture")
WARNING_MARK = "⚠"
TABLE_WIDTH = 160


class ReportError(SharpBenchError):
    """An aggregate file is missing fields or cannot be parsed."""

    pass


@dataclass
class MethodSummary:
    """One row of the comparison table (fractions, not percent)."""

    method: str
    n_samples: int
    mean: dict[str, float]
    std: dict[str, float]
    config: dict[str, Any]
    histogram_edges: list[float]
    histograms: dict[str, list[int]]
    correlation_pairs: list[list[float]]
    pearson: float | None
    source: Path
    warnings: list[str] = field(default_factory=list)

    @property
    def incompatible(self) -> bool:
        return bool(self.warnings)

    def cell(self, key: str) -> str:
        """``mean ± std`` in percent."""
        return f"{100.0 * self.mean[key]:.2f} ± {100.0 * self.std[key]:.2f}"


def load_aggregate(path: Path) -> MethodSummary:
    """Read an aggregate JSON written by ``eval``.

    Raises:
        ReportError: If the file is not valid JSON or lacks required fields
    """
    path = Path(path)
    try:
        with open(path, encoding="utf-8") as f:
            data = json.load(f)
        return MethodSummary(
            method=data.get("method") or path.stem,
            n_samples=int(data["n_samples"]),
            mean={k: float(data["mean"][k]) for k in SCORE_KEYS},
            std={k: float(data["std"][k]) for k in SCORE_KEYS},
            config=dict(data.get("config", {})),
            histogram_edges=list(data["histogram"]["edges"]),
            histograms={k: list(data["histogram"]["counts"][k]) for k in SCORE_KEYS},
            correlation_pairs=list(data["correlation"]["pairs"]),
            pearson=data["correlation"].get("pearson"),
            source=path,
        )
    except (json.JSONDecodeError, AttributeError, KeyError, TypeError, ValueError) as e:
        raise ReportError(f"Invalid aggregate file {path}: {e}") from e


def compare(summaries: list[MethodSummary]) -> list[MethodSummary]:
    """Order methods by overall score, best first, and flag config mismatches.

    The first summary given is the reference for compatibility checks.
    """
    if not summaries:
        raise ReportError("At least one aggregate file is needed")

    reference = summaries[0].config
    for summary in summaries[1:]:
        for key in COMPARABLE_KEYS:
            if summary.config.get(key) != reference.get(key):
                summary.warnings.append(
                    f"{key}={summary.config.get(key)} differs from {reference.get(key)}"
                )
        if summary.warnings:
            logger.warning(f"{summary.method}: incompatible config ({'; '.join(summary.warnings)})")

    return sorted(summaries, key=lambda s: (-s.mean["overall_score"], s.method))


def comparison_table(rows: list[MethodSummary], title: str | None = None) -> Table:
    """Shape / texture / overall scores, mean ± std in percent, one row per method."""
    table = Table(title=title, box=box.SIMPLE_HEAD, show_edge=False, pad_edge=False)
    table.add_column("Method", style="cyan", no_wrap=True)
    table.add_column("N", justify="right", style="dim")
    table.add_column("Shape (%)", justify="right")
    table.add_column("Texture (%)", justify="right")
    table.add_column("Overall (%)", justify="right", style="bold")
    for r in rows:
        name = Text(r.method)
        if r.incompatible:
            name.append(f" {WARNING_MARK}", style="yellow")
        table.add_row(
            name,
            str(r.n_samples),
            r.cell("shape_score"),
            r.cell("texture_score"),
            r.cell("overall_score"),
        )
    return table


def format_table(rows: list[MethodSummary]) -> str:
    """``comparison_table`` as plain text, followed by one line per config warning."""
    text_console = Console(
        file=io.StringIO(), record=True, width=TABLE_WIDTH, color_system=None
    )
    text_console.print(comparison_table(rows))
    for r in rows:
        for warning in r.warnings:
            text_console.print(f"{WARNING_MARK} {r.method}: {warning}", markup=False, highlight=False)
    lines = text_console.export_text().splitlines()
    return "\n".join(line.rstrip() for line in lines) + "\n"


def plot_stems(rows: list[MethodSummary]) -> list[str]:
    """Plot file stem per row: the method name, plus its rank when names repeat."""
    counts = Counter(r.method for r in rows)
    stems = []
    for rank, r in enumerate(rows, start=1):
        if counts[r.method] > 1:
            logger.warning(f"Method name '{r.method}' is used by several files ({r.source})")
            stems.append(f"{r.method}_{rank}")
        else:
            stems.append(r.method)
    return stems


def write_plot_data(summary: MethodSummary, output_dir: Path, stem: str | None = None) -> list[Path]:
    """Write ``<stem>_histogram.csv`` and ``<stem>_correlation.csv``.

    ``stem`` defaults to the method name.
    """
    output_dir = Path(output_dir)
    stem = stem or summary.method
    histogram_path = output_dir / f"{stem}_histogram.csv"
    correlation_path = output_dir / f"{stem}_correlation.csv"

    edges = summary.histogram_edges
    with open(histogram_path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(["bin_start", "bin_end", *SCORE_KEYS])
        for i in range(len(edges) - 1):
            writer.writerow(
                [repr(edges[i]), repr(edges[i + 1]), *(summary.histograms[k][i] for k in SCORE_KEYS)]
            )

    with open(correlation_path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(["shape_score", "texture_score"])
        for shape, texture in summary.correlation_pairs:
            writer.writerow([repr(float(shape)), repr(float(texture))])

    return [histogram_path, correlation_path]


def build_report(paths: list[Path], output_dir: Path) -> tuple[list[MethodSummary], Path]:
    """Compare aggregates and write plot data plus ``comparison.txt``.

    Returns:
        (rows ordered best first, path of the comparison table)
    """
    rows = compare([load_aggregate(p) for p in paths])
    output_dir = Path(output_dir)
    output_dir.mkdir(parents=True, exist_ok=True)
    for row, stem in zip(rows, plot_stems(rows), strict=True):
        write_plot_data(row, output_dir, stem)
    table_path = output_dir / "comparison.txt"
    table_path.write_text(format_table(rows), encoding="utf-8")
    logger.info(f"Compared {len(rows)} methods, wrote {table_path}")
    return rows, table_path
