"""Click options shared by several subcommands.

Options default to None so that unset flags fall back to BenchmarkSettings
(environment, ``~/.sharp-bench/config.yaml``, built-in defaults).
"""

from __future__ import annotations

from collections.abc import Callable
from pathlib import Path
from typing import Any, TypeVar

import click

from sharp_bench.models.config import BenchmarkSettings


F = TypeVar("F", bound=Callable[..., Any])


def seed_option(fn: F) -> F:
    return click.option(
        "--seed", type=click.IntRange(min=0), default=None, help="Base random seed"
    )(fn)


def samples_option(fn: F) -> F:
    return click.option(
        "--samples",
        "n_samples",
        type=click.IntRange(min=1),
        default=None,
        help="Points sampled per directed pass (N)",
    )(fn)


def jobs_option(fn: F) -> F:
    return click.option(
        "--jobs", type=click.IntRange(min=1), default=None, help="Worker threads"
    )(fn)


def no_texture_option(fn: F) -> F:
    return click.option(
        "--no-texture", is_flag=True, help="Shape-only evaluation (S = S_a * S_s)"
    )(fn)


def config_option(required: bool = False) -> Callable[[F], F]:
    def decorator(fn: F) -> F:
        return click.option(
            "--config",
            "config_path",
            type=click.Path(exists=required, dir_okay=False, path_type=Path),
            required=required,
            help="Score configuration file (YAML)",
        )(fn)

    return decorator


def get_settings(ctx: click.Context) -> BenchmarkSettings:
    """Settings created by the CLI group, or fresh ones for a bare command."""
    if isinstance(ctx.obj, BenchmarkSettings):
        return ctx.obj
    ctx.obj = BenchmarkSettings()
    return ctx.obj
