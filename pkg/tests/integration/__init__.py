"""Integration tests for sharp-bench workflows."""
