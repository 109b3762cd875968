"""Deterministic 64-bit RNG used everywhere randomness is needed.

SplitMix64 with all arithmetic reduced mod 2**64, so streams are identical
on every platform. Bounded draws use plain modulo; for the range sizes in
this toolkit the bias is below 2**-50 and is accepted.
"""

from __future__ import annotations

_MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15


class SplitMix64:
    """Counter-based generator; one instance per independent stream."""

    def __init__(self, seed: int):
        self.seed = seed & _MASK64
        self._state = self.seed

    def next_u64(self) -> int:
        self._state = (self._state + GOLDEN_GAMMA) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def below(self, n: int) -> int:
        """Uniform integer in [0, n)."""
        if n <= 0:
            raise ValueError(f"below() needs n >= 1, got {n}")
        return self.next_u64() % n

    def uniform(self, lo: float, hi: float) -> float:
        """Uniform float in [lo, hi), from the top 53 bits."""
        u = self.next_u64() >> 11
        return lo + (hi - lo) * (u * (2.0 ** -53))
