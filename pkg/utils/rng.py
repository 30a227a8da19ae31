"""
Seeded random streams.

All randomness goes through numpy's Philox4x64 counter-based generator.
``Generator.random()`` maps a 64-bit draw to [0, 1) by keeping its top 53
bits (truncation), and uniform samples on [a, b) are a + (b − a)·random().
"""

import numpy as np


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))


def keyed_rng(seed: int, *key: int) -> np.random.Generator:
    """Stream addressed by an integer key, independent of how many other streams exist"""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=key)))
