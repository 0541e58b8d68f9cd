"""Deterministic 64-bit seed derivation for Monte-Carlo sub-streams.

Child streams are derived by folding integer indices into a parent seed
with a splitmix64 finalizer.  The fan-out is pure arithmetic, so results
are bit-reproducible regardless of call order, process count, or host.
"""

import numpy as np

_MASK64 = (1 << 64) - 1


def splitmix64(value: int) -> int:
    """One step of the splitmix64 sequence/finalizer (Steele et al. 2014)."""
    value = (value + 0x9E3779B97F4A7C15) & _MASK64
    z = value
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (z ^ (z >> 31)) & _MASK64


def derive_seed(seed: int, *indices: int) -> int:
    """Derive a child seed from a parent seed and one or more stream indices.

    Each index is xor-folded into the running state and passed through the
    splitmix64 finalizer, so (seed, i) and (seed, j) give unrelated streams
    for i != j, and the mapping is stable across platforms.
    """
    state = seed & _MASK64
    for index in indices:
        state = splitmix64(state ^ (index & _MASK64))
    return state


def make_rng(seed: int) -> np.random.Generator:
    """PCG64 generator for a 64-bit seed."""
    return np.random.Generator(np.random.PCG64(seed & _MASK64))
