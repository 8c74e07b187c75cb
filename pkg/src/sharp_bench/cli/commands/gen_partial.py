"""Command: gen-partial - Synthesize partial scans by hole cutting."""

from __future__ import annotations

import logging
from pathlib import Path

import click
from rich.table import Table

from sharp_bench.cli.shared.console import batch_progress, console
from sharp_bench.cli.shared.options import get_settings, jobs_option, seed_option
from sharp_bench.services.batch_runner import FILLED_DIR, BenchmarkRunner
from sharp_bench.services.mesh_io import discover_meshes


logger = logging.getLogger(__name__)


@click.command("gen-partial")
@click.argument("input_dir", type=click.Path(exists=True, file_okay=False, path_type=Path))
@click.argument("output_dir", type=click.Path(file_okay=False, path_type=Path))
@click.option("--holes", type=click.IntRange(min=0), default=40, show_default=True, help="Holes per mesh")
@click.option(
    "--fraction",
    type=click.FloatRange(min=0.0, max=1.0, min_open=True),
    default=0.02,
    show_default=True,
    help="Vertices removed per hole (fraction of the original count)",
)
@click.option(
    "--mask",
    "mask_path",
    type=click.Path(exists=True, path_type=Path),
    default=None,
    help="Eligible-vertex file, or a directory of <stem>.txt files",
)
@click.option("--fill", is_flag=True, help=f"Also write the hole-filled baseline to OUTPUT_DIR/{FILLED_DIR}")
@seed_option
@jobs_option
@click.pass_context
def gen_partial(
    ctx: click.Context,
    input_dir: Path,
    output_dir: Path,
    holes: int,
    fraction: float,
    mask_path: Path | None,
    fill: bool,
    seed: int | None,
    jobs: int | None,
) -> None:
    """Generate partial scans from complete meshes.

    Each mesh loses HOLES patches of FRACTION x (vertex count) nearest
    vertices around random centres. Per-sample seeds (base seed XOR a stable
    hash of the file stem) are recorded in OUTPUT_DIR/manifest.json.

    Examples:
        sharp-bench gen-partial data/gt data/partial
        sharp-bench gen-partial data/gt data/partial --holes 40 --fraction 0.02 --seed 7
        sharp-bench gen-partial data/gt data/partial --fill --jobs 4
    """
    settings = get_settings(ctx)
    seed = settings.seed if seed is None else seed
    jobs = jobs or settings.jobs

    try:
        meshes = discover_meshes(input_dir)
        if not meshes:
            output_dir.mkdir(parents=True, exist_ok=True)
            console.print(f"[yellow]No .obj meshes found in {input_dir}[/yellow]")
            logger.warning(f"No meshes in {input_dir}")
            return

        console.print(
            f"✂️  [bold]Cutting {holes} holes of {fraction:.1%} in {len(meshes)} meshes[/bold]\n"
        )
        runner = BenchmarkRunner(jobs=jobs)
        with batch_progress() as progress:
            task = progress.add_task("Generating partial scans", total=len(meshes))

            def update_progress(current: int, total: int, sample_id: str) -> None:
                progress.update(task, completed=current, description=sample_id)

            result = runner.generate_partials(
                input_dir,
                output_dir,
                base_seed=seed,
                holes=holes,
                fraction=fraction,
                mask_path=mask_path,
                fill=fill,
                progress_callback=update_progress,
            )

        table = Table(title="Partial Data", show_header=False)
        table.add_column("Metric", style="cyan")
        table.add_column("Value", style="bold")
        table.add_row("Written", str(len(result.written)))
        table.add_row("Failed", str(len(result.failed)))
        table.add_row("Base seed", str(seed))
        table.add_row("Manifest", str(result.manifest_path))
        console.print(table)

    except Exception as e:
        console.print(f"[red]Partial generation failed: {e}[/red]")
        logger.exception("Partial generation failed")
        raise SystemExit(1)

    if not result.ok:
        for sample_id, error in result.failed.items():
            console.print(f"[red]✗[/red] {sample_id}: {error}")
        raise SystemExit(1)
    console.print("[green]✓[/green] Partial data generated")
