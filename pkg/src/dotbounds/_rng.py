"""Counter-based RNG streams (Philox) for reproducible, prefix-stable draws.

Each (seed, purpose) pair keys an independent Philox stream, so vectors,
perturbations, and Monte-Carlo signs never share state, and draws of
length n are prefixes of draws of length m > n from the same key.
"""

from __future__ import annotations

import numpy as np

#: Pinned in output metadata; identifies the generator algorithm.
RNG_ALGORITHM = "philox4x64 (numpy.random.Philox)"

STREAM_X = 0
STREAM_Y = 1
STREAM_DELTA = 2
STREAM_THETA = 3
STREAM_SIGNS = 4


def stream(seed: int, purpose: int) -> np.random.Generator:
    """Independent generator keyed by (seed, purpose)."""
    seed = int(seed)
    if not 0 <= seed < 2**64:
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
    key = np.array([seed, purpose], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))
