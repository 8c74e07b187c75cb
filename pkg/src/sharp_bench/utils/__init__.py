"""Utility functions and helpers for sharp-bench."""

from sharp_bench.utils.logger import get_logger, setup_logger
from sharp_bench.utils.seeding import derive_sample_seed, make_rng, stable_hash64


__all__ = [
    "setup_logger",
    "get_logger",
    "derive_sample_seed",
    "make_rng",
    "stable_hash64",
]
