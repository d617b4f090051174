"""
Seeded random number generation.

All stochastic operations draw from numpy's PCG64 (128-bit state). Per-task
seeds are derived from the master seed with ``derive_seed``:

    SeedSequence(master, spawn_key=(crc32(key_1), crc32(key_2), ...))

and the first 64-bit word of the resulting state. The rule depends only on
the keys, never on the order in which tasks run.
"""

import zlib

import numpy as np

from .errors import InvalidParameterError

BIT_GENERATOR = "PCG64"


def _check_seed(seed: int) -> int:
    if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)):
        raise InvalidParameterError(f"seed must be an integer, got {seed!r}")
    if seed < 0:
        raise InvalidParameterError(f"seed must be >= 0, got {seed}")
    return int(seed)


def make_rng(seed: int) -> np.random.Generator:
    """Return a fresh PCG64 generator for ``seed``."""
    return np.random.Generator(np.random.PCG64(_check_seed(seed)))


def derive_seed(master: int, *keys: str) -> int:
    """Derive a child seed from ``master`` and a tuple of string keys."""
    spawn_key = tuple(zlib.crc32(key.encode("utf-8")) for key in keys)
    sequence = np.random.SeedSequence(_check_seed(master), spawn_key=spawn_key)
    return int(sequence.generate_state(1, dtype=np.uint64)[0])
