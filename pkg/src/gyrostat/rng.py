"""Deterministic 64-bit generator for audit sampling.

This is the splitmix64 sequence: state advances by a fixed odd constant
and the output mixes the state with two xor-shift-multiply rounds.  It is
pinned here (rather than delegating to a library generator) so that audit
sample streams can be reproduced bit-for-bit from the seed alone, in any
language.  Doubles take the top 53 bits of the output.
"""

from __future__ import annotations

__all__ = ["SplitMix64"]

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


class SplitMix64:
    """Sequence of 64-bit words from a single 64-bit seed."""

    def __init__(self, seed: int):
        if not 0 <= int(seed) <= _MASK:
            raise ValueError(f"seed must fit in 64 bits, got {seed}")
        self._state = int(seed)

    def next_u64(self) -> int:
        self._state = (self._state + _GOLDEN) & _MASK
        z = self._state
        z = ((z ^ (z >> 30)) * _MIX1) & _MASK
        z = ((z ^ (z >> 27)) * _MIX2) & _MASK
        return z ^ (z >> 31)

    def next_double(self) -> float:
        """Uniform double in [0, 1) with 53-bit resolution."""
        return (self.next_u64() >> 11) * 2.0**-53

    def uniform(self, low: float, high: float) -> float:
        """Uniform double in [low, high)."""
        return low + (high - low) * self.next_double()
