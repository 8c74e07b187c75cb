"""Seed derivation helpers.

Per-sample seeds are derived from a base seed and the sample id so that adding
or removing samples from a batch never shifts the randomness of the others.
"""

import hashlib

import numpy as np


SEED_MASK = (1 << 64) - 1


def stable_hash64(text: str) -> int:
    """Return a platform-independent 64-bit hash of ``text``.

    Python's built-in ``hash`` is salted per process, so blake2b is used.
    """
    digest = hashlib.blake2b(text.encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "little")


def derive_sample_seed(base_seed: int, sample_id: str) -> int:
    """Per-sample seed: ``base_seed XOR stable_hash64(sample_id)``."""
    return (int(base_seed) ^ stable_hash64(sample_id)) & SEED_MASK


def make_rng(seed: int, *stream: int) -> np.random.Generator:
    """Create a PCG64 generator keyed by ``seed`` and optional stream ids."""
    entropy = [int(seed) & SEED_MASK, *(int(s) for s in stream)]
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy)))
