"""Shared Rich console and progress bar for all CLI commands."""

from rich.console import Console
from rich.progress import (
    BarColumn,
    MofNCompleteColumn,
    Progress,
    SpinnerColumn,
    TextColumn,
    TimeElapsedColumn,
)


console = Console()


def batch_progress() -> Progress:
    """Progress bar for per-sample batch loops."""
    return Progress(
        SpinnerColumn(),
        TextColumn("[bold blue]{task.description}"),
        BarColumn(bar_width=40),
        MofNCompleteColumn(),
        TimeElapsedColumn(),
        console=console,
    )


def percent(value: float) -> str:
    return f"{100.0 * value:.2f}"
