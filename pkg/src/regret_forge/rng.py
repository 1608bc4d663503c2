"""Seedable, portable 64-bit random number generation.

The sampling engines use SplitMix64 (Steele, Lea & Flood's finalizer with a
Weyl increment of the 64-bit golden ratio).  It is trivial to implement
bit-identically in any language or JIT, which keeps sampled runs reproducible
across machines and across the pure-Python reference implementations used in
the test suite.

Stream splitting: a multi-run experiment with base seed ``s`` gives run ``k``
the initial state ``mix64(s XOR k * STREAM_SALT)``.  Different ``k`` land in
well-separated regions of the state space, so per-run streams are effectively
independent.
"""

from __future__ import annotations

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB
STREAM_SALT = 0xD2B74407B1CE6E93

# 2**-53, the spacing used to turn the top 53 bits into a double in [0, 1)
DOUBLE_UNIT = 1.0 / 9007199254740992.0


def mix64(z: int) -> int:
    """The SplitMix64 output finalizer (a strong 64-bit bit mixer)."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * _MIX1) & MASK64
    z = ((z ^ (z >> 27)) * _MIX2) & MASK64
    return z ^ (z >> 31)


def stream_state(seed: int, run_index: int = 0) -> int:
    """Initial generator state for run ``run_index`` of a seeded experiment."""
    return mix64((seed ^ (run_index * STREAM_SALT)) & MASK64)


class SplitMix64:
    """Reference SplitMix64 generator over plain Python integers.

    The MCCFR kernel re-implements exactly these operations on uint64; the
    test suite asserts the two produce identical streams.
    """

    __slots__ = ("state",)

    def __init__(self, state: int):
        self.state = state & MASK64

    @classmethod
    def for_run(cls, seed: int, run_index: int = 0) -> "SplitMix64":
        return cls(stream_state(seed, run_index))

    def next_u64(self) -> int:
        self.state = (self.state + GOLDEN_GAMMA) & MASK64
        return mix64(self.state)

    def next_double(self) -> float:
        """Uniform double in [0, 1) from the top 53 bits."""
        return (self.next_u64() >> 11) * DOUBLE_UNIT
