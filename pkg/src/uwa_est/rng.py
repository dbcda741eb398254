"""Pinned, seedable randomness.

All stochastic components draw from numpy's PCG64 (64-bit) bit generator,
seeded through a ``SeedSequence`` whose spawn key separates the consuming
component. One experiment seed therefore drives channel generation, mask
selection, and noise injection through three independent streams: the mask
cannot be correlated with the channel support just because both were built
from the same seed.

Stream ids are part of the reproducibility contract and must not change:
``CHANNEL_STREAM = 0``, ``MASK_STREAM = 1``, ``NOISE_STREAM = 2``.
"""

from __future__ import annotations

import numpy as np

CHANNEL_STREAM = 0
MASK_STREAM = 1
NOISE_STREAM = 2


def component_rng(seed: int, stream: int) -> np.random.Generator:
    """Return the PCG64 generator for (seed, stream).

    Seeds are reduced mod 2**64 so negative integers are accepted.
    """
    ss = np.random.SeedSequence(entropy=int(seed) % 2**64, spawn_key=(stream,))
    return np.random.Generator(np.random.PCG64(ss))
