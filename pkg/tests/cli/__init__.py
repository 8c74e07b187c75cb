"""CLI test suite for sharp-bench."""
