"""Command: calibrate - Fit sigma_s and sigma_t on degraded baselines."""

from __future__ import annotations

import logging
from pathlib import Path

import click
import yaml
from rich.table import Table

from sharp_bench.cli.shared.console import batch_progress, console
from sharp_bench.cli.shared.options import (
    get_settings,
    no_texture_option,
    samples_option,
    seed_option,
)
from sharp_bench.models.config import CalibrationTargets
from sharp_bench.services.calibration import calibrate_directory
from sharp_bench.services.mesh_io import discover_meshes


logger = logging.getLogger(__name__)


def _load_targets(path: Path | None, **overrides: float | int | None) -> CalibrationTargets:
    data: dict = {}
    if path is not None:
        with open(path, encoding="utf-8") as f:
            data = yaml.safe_load(f) or {}
    data.update({k: v for k, v in overrides.items() if v is not None})
    return CalibrationTargets(**data)


@click.command()
@click.argument("gt_dir", type=click.Path(exists=True, file_okay=False, path_type=Path))
@click.option(
    "--output",
    "-o",
    type=click.Path(dir_okay=False, path_type=Path),
    default=Path("score_config.yaml"),
    show_default=True,
    help="Where to write the calibrated score config",
)
@click.option(
    "--targets",
    "targets_path",
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
    default=None,
    help="YAML file with target scores and noise levels",
)
@click.option("--holes", type=click.IntRange(min=0), default=40, show_default=True)
@click.option(
    "--fraction", type=click.FloatRange(min=0.0, max=1.0, min_open=True), default=0.02, show_default=True
)
@click.option(
    "--shape-noise",
    type=click.FloatRange(min=0.0),
    default=None,
    help="Shape noise level, fraction of the bounding-box diagonal",
)
@click.option(
    "--texture-noise", type=click.FloatRange(min=0.0), default=None, help="Texture noise (RGB units)"
)
@click.option(
    "--max-samples", type=click.IntRange(min=1), default=None, help="Ground-truth meshes to use"
)
@samples_option
@seed_option
@no_texture_option
@click.pass_context
def calibrate(
    ctx: click.Context,
    gt_dir: Path,
    output: Path,
    targets_path: Path | None,
    holes: int,
    fraction: float,
    shape_noise: float | None,
    texture_noise: float | None,
    max_samples: int | None,
    n_samples: int | None,
    seed: int | None,
    no_texture: bool,
) -> None:
    """Calibrate the distance-to-score mapping on ground-truth meshes.

    Builds degraded baselines (partial scan, hole-filled partial scan,
    shape and texture noise) for each mesh, measures their distances to the
    ground truth and fits sigma so that the target baselines score as
    configured (default: hole-filled partial scan -> 0.5).

    Examples:
        sharp-bench calibrate data/gt -o config.yaml
        sharp-bench calibrate data/gt --samples 20000 --max-samples 5
        sharp-bench calibrate data/gt --targets targets.yaml --no-texture
    """
    settings = get_settings(ctx)
    n_samples = n_samples or settings.n_samples
    seed = settings.seed if seed is None else seed

    try:
        targets = _load_targets(
            targets_path,
            shape_noise=shape_noise,
            texture_noise=texture_noise,
            max_samples=max_samples,
        )
        total = len(discover_meshes(gt_dir))
        if targets.max_samples is not None:
            total = min(total, targets.max_samples)

        console.print(f"📐 [bold]Calibrating on {total} ground-truth meshes[/bold]\n")
        with batch_progress() as progress:
            task = progress.add_task("Measuring baselines", total=total)

            def update_progress(current: int, count: int, sample_id: str) -> None:
                progress.update(task, completed=current, total=count, description=sample_id)

            result = calibrate_directory(
                gt_dir,
                targets=targets,
                holes=holes,
                fraction=fraction,
                n_samples=n_samples,
                seed=seed,
                use_texture=not no_texture,
                progress_callback=update_progress,
            )

        table = Table(title="Baseline Distances (mean over samples)")
        table.add_column("Baseline", style="cyan")
        table.add_column("Shape (m)", justify="right")
        table.add_column("Texture (RGB)", justify="right")
        for name, d_shape in result.shape_distances.items():
            d_texture = result.texture_distances.get(name)
            table.add_row(name, f"{d_shape:.6g}", "-" if d_texture is None else f"{d_texture:.6g}")
        console.print(table)

        output.parent.mkdir(parents=True, exist_ok=True)
        result.config.save(output)
        console.print(f"\n[green]✓[/green] sigma_s = {result.config.sigma_shape:.6g} m")
        if result.config.use_texture:
            console.print(f"[green]✓[/green] sigma_t = {result.config.sigma_texture:.6g}")
        else:
            console.print("[yellow]Texture not calibrated: shape-only config[/yellow]")
        console.print(f"[dim]Config written to {output}[/dim]")

    except Exception as e:
        console.print(f"[red]Calibration failed: {e}[/red]")
        logger.exception("Calibration failed")
        raise SystemExit(1)
