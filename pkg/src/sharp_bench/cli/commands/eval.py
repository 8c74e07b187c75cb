"""Command: eval - Score reconstructions against ground truth."""

from __future__ import annotations

import logging
from pathlib import Path

import click
from rich.table import Table

from sharp_bench.cli.shared.console import batch_progress, console, percent
from sharp_bench.cli.shared.options import (
    config_option,
    get_settings,
    jobs_option,
    no_texture_option,
    samples_option,
    seed_option,
)
from sharp_bench.models.config import ScoreConfig
from sharp_bench.models.report import AggregateReport
from sharp_bench.services.batch_runner import (
    BenchmarkRunner,
    load_subsets,
    resolve_manifest,
    write_aggregate_json,
    write_scores_csv,
)


logger = logging.getLogger(__name__)

SCORE_LABELS = {
    "shape_score": "Shape",
    "texture_score": "Texture",
    "overall_score": "Overall",
}


def _print_summary(aggregate: AggregateReport) -> None:
    table = Table(title=f"Scores: {aggregate.method} ({aggregate.n_samples} samples)")
    table.add_column("Score", style="cyan")
    table.add_column("Mean (%)", justify="right", style="bold")
    table.add_column("Std (%)", justify="right")
    table.add_column("Median (%)", justify="right", style="dim")
    for key, label in SCORE_LABELS.items():
        s = aggregate.summary[key]
        table.add_row(label, percent(s.mean), percent(s.std), percent(s.median))
    console.print(table)

    if aggregate.subsets:
        subset_table = Table(title="Subsets (overall score)")
        subset_table.add_column("Subset", style="cyan")
        subset_table.add_column("Mean ± Std (%)", justify="right")
        for label, scores in aggregate.subsets.items():
            s = scores["overall_score"]
            subset_table.add_row(label, f"{percent(s.mean)} ± {percent(s.std)}")
        console.print(subset_table)


@click.command("eval")
@click.argument("gt_dir", type=click.Path(exists=True, file_okay=False, path_type=Path))
@click.argument("recon_dir", type=click.Path(exists=True, file_okay=False, path_type=Path))
@config_option(required=True)
@click.option(
    "--output",
    "-o",
    type=click.Path(dir_okay=False, path_type=Path),
    required=True,
    help="Output stem: writes <output>.csv and <output>.json",
)
@click.option("--method", default=None, help="Method name (default: RECON_DIR name)")
@click.option(
    "--subsets",
    "subsets_path",
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
    default=None,
    help="YAML mapping sample id -> subset label",
)
@samples_option
@seed_option
@jobs_option
@no_texture_option
@click.pass_context
def eval_cmd(
    ctx: click.Context,
    gt_dir: Path,
    recon_dir: Path,
    config_path: Path,
    output: Path,
    method: str | None,
    subsets_path: Path | None,
    n_samples: int | None,
    seed: int | None,
    jobs: int | None,
    no_texture: bool,
) -> None:
    """Evaluate a directory of reconstructions.

    Reconstructions are matched to ground truth by file stem. Missing or
    unreadable reconstructions score 0, are flagged, and make the command
    exit with status 1 after the reports are written.

    Examples:
        sharp-bench eval data/gt submissions/mine --config config.yaml -o results/mine
        sharp-bench eval data/gt data/partial --config config.yaml -o results/partial --jobs 8
        sharp-bench eval data/gt submissions/mine --config config.yaml -o out/mine --no-texture
    """
    settings = get_settings(ctx)
    jobs = jobs or settings.jobs

    try:
        config = ScoreConfig.load(config_path)
        updates: dict[str, object] = {}
        if n_samples is not None:
            updates["n_samples"] = n_samples
        if seed is not None:
            updates["seed"] = seed
        if no_texture:
            updates["use_texture"] = False
        if updates:
            config = ScoreConfig(**{**config.model_dump(), **updates})

        method = method or recon_dir.name
        subsets = load_subsets(subsets_path) if subsets_path else None
        manifest = resolve_manifest(gt_dir, recon_dir)

        console.print(
            f"🎯 [bold]Evaluating '{method}' on {len(manifest)} samples[/bold] "
            f"[dim](N={config.n_samples}, {config.overall_mode})[/dim]\n"
        )
        runner = BenchmarkRunner(jobs=jobs)
        with batch_progress() as progress:
            task = progress.add_task("Scoring", total=len(manifest))

            def update_progress(current: int, total: int, sample_id: str) -> None:
                progress.update(task, completed=current, description=sample_id)

            aggregate = runner.evaluate(
                manifest,
                config,
                method=method,
                subsets=subsets,
                bins=settings.histogram_bins,
                progress_callback=update_progress,
            )

        stem = output.with_suffix("") if output.suffix in (".csv", ".json") else output
        stem.parent.mkdir(parents=True, exist_ok=True)
        csv_path = stem.parent / f"{stem.name}.csv"
        json_path = stem.parent / f"{stem.name}.json"
        write_scores_csv(aggregate, csv_path)
        write_aggregate_json(aggregate, json_path)

        _print_summary(aggregate)
        console.print(f"\n[dim]Per-sample scores: {csv_path}[/dim]")
        console.print(f"[dim]Aggregate: {json_path}[/dim]")

    except Exception as e:
        console.print(f"[red]Evaluation failed: {e}[/red]")
        logger.exception("Evaluation failed")
        raise SystemExit(1)

    if aggregate.flagged:
        console.print(
            f"\n[red]✗ {len(aggregate.flagged)} samples flagged:[/red] "
            + ", ".join(aggregate.flagged)
        )
        raise SystemExit(1)
    console.print("\n[green]✓[/green] Evaluation complete")
