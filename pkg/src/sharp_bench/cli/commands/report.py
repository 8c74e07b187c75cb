"""Command: report - Compare methods and export plot data."""

from __future__ import annotations

import logging
from pathlib import Path

import click

from sharp_bench.cli.shared.console import console
from sharp_bench.services.report_builder import WARNING_MARK, build_report, comparison_table


logger = logging.getLogger(__name__)


@click.command()
@click.argument(
    "aggregates",
    nargs=-1,
    required=True,
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
)
@click.option(
    "--output-dir",
    "-o",
    type=click.Path(file_okay=False, path_type=Path),
    default=Path("report"),
    show_default=True,
    help="Directory for comparison.txt and plot data",
)
def report(aggregates: tuple[Path, ...], output_dir: Path) -> None:
    """Compare aggregate results of one or more methods.

    Prints a table of shape / texture / overall scores (mean ± std, %) ordered
    by overall score, and writes per-method histogram and correlation CSV
    files for plotting. Methods scored with a different configuration than
    the first file are marked with ⚠.

    Examples:
        sharp-bench report results/baseline.json results/mine.json
        sharp-bench report results/*.json -o figures/
    """
    try:
        rows, table_path = build_report(list(aggregates), output_dir)

        console.print(comparison_table(rows, title="Reconstruction Scores"))

        for row in rows:
            for warning in row.warnings:
                console.print(f"[yellow]{WARNING_MARK} {row.method}: {warning}[/yellow]")
        console.print(f"\n[dim]Comparison table: {table_path}[/dim]")
        console.print(f"[dim]Plot data: {output_dir}[/dim]")

    except Exception as e:
        console.print(f"[red]Report failed: {e}[/red]")
        logger.exception("Report failed")
        raise SystemExit(1)
