"""Deterministic 64-bit pseudo-random generator for all randomized components.

SplitMix64: the state advances by the 64-bit golden-ratio increment and each
output is a two-round multiply/xor-shift finalizer of the state.  The whole
generator is a handful of integer operations, so a fuzz campaign seeded here
reproduces bit-for-bit in any language that has 64-bit unsigned arithmetic.

State transition and output, with all arithmetic mod 2**64:

    state   <- state + 0x9E3779B97F4A7C15
    z       <- state
    z       <- (z xor (z >> 30)) * 0xBF58476D1CE4E5B9
    z       <- (z xor (z >> 27)) * 0x94D049BB133111EB
    output  <- z xor (z >> 31)

Doubles in [0, 1) take the top 53 bits of an output word.
"""

from __future__ import annotations

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15


def mix64(value: int) -> int:
    """SplitMix64 output finalizer."""
    z = value & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def derive_seed(seed: int, index: int) -> int:
    """Sub-seed for stream ``index`` of a campaign seeded with ``seed``.

    Defined as mix64(seed + (index + 1) * GOLDEN); trial streams are fully
    determined by (seed, index), so serial and parallel execution agree.
    """
    return mix64((seed + (index + 1) * GOLDEN) & MASK64)


class SplitMix64:
    """Sequential SplitMix64 stream."""

    def __init__(self, seed: int):
        self._state = seed & MASK64

    def next_u64(self) -> int:
        self._state = (self._state + GOLDEN) & MASK64
        return mix64(self._state)

    def uniform(self, lo: float = 0.0, hi: float = 1.0) -> float:
        """Uniform double in [lo, hi) from the top 53 bits of one output."""
        x = (self.next_u64() >> 11) * 2.0**-53
        return lo + (hi - lo) * x

    def below(self, n: int) -> int:
        """Uniform integer in [0, n); modulo bias is negligible for small n."""
        if n <= 0:
            raise ValueError("n must be positive")
        return self.next_u64() % n
