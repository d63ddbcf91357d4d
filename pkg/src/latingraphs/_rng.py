"""Seed mixing and generator construction.

Every random draw in the package goes through :func:`make_rng`, which wraps a
Philox4x64 counter-based bit generator.  Per-trial seeds are derived with
:func:`mix` so that a trial's stream depends only on ``(master_seed, index)``.
"""
import numpy as np

_MASK = (1 << 64) - 1


def splitmix64(x):
    x = (x + 0x9E3779B97F4A7C15) & _MASK
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


def mix(master_seed, index):
    """Derive a 64-bit child seed from a master seed and an index."""
    return splitmix64((splitmix64(int(master_seed) & _MASK) + int(index)) & _MASK)


def make_rng(seed):
    """Return a ``numpy.random.Generator`` backed by Philox, keyed by ``seed``."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(np.random.Philox(key=int(seed) & _MASK))
