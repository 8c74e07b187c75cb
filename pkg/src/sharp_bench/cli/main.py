"""Main CLI entry point for sharp-bench."""

from __future__ import annotations

from pathlib import Path

import click

from sharp_bench import __version__
from sharp_bench.cli.commands.calibrate import calibrate
from sharp_bench.cli.commands.eval import eval_cmd
from sharp_bench.cli.commands.gen_partial import gen_partial
from sharp_bench.cli.commands.report import report
from sharp_bench.models.config import BenchmarkSettings
from sharp_bench.utils.logger import LOG_LEVELS, setup_logger


@click.group()
@click.version_option(version=__version__, prog_name="sharp-bench")
@click.option(
    "--log-level",
    type=click.Choice(LOG_LEVELS, case_sensitive=False),
    default=None,
    help="Logging level (default from settings: info)",
)
@click.option(
    "--log-file",
    type=click.Path(dir_okay=False, path_type=Path),
    default=None,
    help="Also write logs to this file",
)
@click.pass_context
def cli(ctx: click.Context, log_level: str | None, log_file: Path | None) -> None:
    """SHARP benchmark - score textured 3D reconstructions of partial scans.

    Generates partial scans by hole cutting, calibrates the distance-to-score
    mapping on degraded baselines, evaluates reconstructions against ground
    truth and compares methods.
    """
    settings = BenchmarkSettings()
    setup_logger(
        level=log_level or settings.log_level,
        log_file=str(log_file) if log_file else None,
    )
    ctx.obj = settings


cli.add_command(gen_partial)
cli.add_command(calibrate)
cli.add_command(eval_cmd)
cli.add_command(report)


if __name__ == "__main__":
    cli()
