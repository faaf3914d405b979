"""Counter-based random stream built on the splitmix64 finalizer.

The i-th word of a stream is a pure function of (seed, i), so any subset
of draws can be generated in any order, split across workers, or replayed
exactly. Both compute backends implement this same arithmetic, which is
what makes sampled counts bit-identical between them.
"""

from __future__ import annotations

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15
MIX_MULT_1 = 0xBF58476D1CE4E5B9
MIX_MULT_2 = 0x94D049BB133111EB
DOUBLE_SCALE = 1.0 / (1 << 53)


def mix64(seed: int, index: int) -> int:
    """Return the index-th 64-bit word of the stream for this seed."""
    z = (seed + (index + 1) * GOLDEN_GAMMA) & MASK64
    z ^= z >> 30
    z = (z * MIX_MULT_1) & MASK64
    z ^= z >> 27
    z = (z * MIX_MULT_2) & MASK64
    z ^= z >> 31
    return z


def uniform(seed: int, index: int) -> float:
    """Return the index-th double in [0, 1) of the stream for this seed."""
    return (mix64(seed, index) >> 11) * DOUBLE_SCALE
