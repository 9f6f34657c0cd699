"""Named random sub-streams derived from a single seed.

Every source of randomness in the package (tessellation jitter, dataset
generators, transform subsampling) draws from ``substream(seed, name)`` so a
single seed makes the whole run reproducible while the components stay
independently replayable.
"""

import zlib

import numpy as np


def substream(seed: int, name: str) -> np.random.Generator:
    """Return a generator for the named sub-stream of ``seed``."""
    tag = zlib.crc32(name.encode("utf-8"))
    return np.random.default_rng([int(seed) & 0xFFFFFFFF, tag])
