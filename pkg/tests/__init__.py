"""Test suite for sharp-bench."""
