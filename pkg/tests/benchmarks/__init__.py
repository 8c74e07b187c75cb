"""Performance benchmarks for sharp-bench."""
