"""Command-line interface for sharp-bench."""

from sharp_bench.cli.main import cli


__all__ = ["cli"]
