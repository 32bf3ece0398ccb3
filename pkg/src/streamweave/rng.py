"""SplitMix64, the one random generator used anywhere in this package.

Workload generation must be reproducible bit for bit from a 64-bit seed, in
any implementation language, so we pin the exact algorithm instead of
deferring to a host library. SplitMix64 steps a 64-bit counter by the
constant 0x9E3779B97F4A7C15 and scrambles it:

    state = (state + 0x9E3779B97F4A7C15) mod 2**64
    z = state
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9  mod 2**64
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB  mod 2**64
    output: z ^ (z >> 31)

Reference vector: with seed 0 the first output is 0xE220A8397B1DCDAF.

Bounded draws use plain modulo (`next_u64() % n`); the tiny modulo bias is
irrelevant here and the rule is trivial to reproduce elsewhere. Bernoulli
draws compare the raw 64-bit output against floor(p * 2**64).
"""

from __future__ import annotations

_MASK = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


class SplitMix64:
    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = seed & _MASK

    def next_u64(self) -> int:
        self.state = (self.state + _GAMMA) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * _MIX1) & _MASK
        z = ((z ^ (z >> 27)) * _MIX2) & _MASK
        return z ^ (z >> 31)

    def below(self, n: int) -> int:
        """Uniform-ish draw in [0, n)."""
        if n <= 0:
            raise ValueError("below() needs n >= 1")
        return self.next_u64() % n

    def randint(self, lo: int, hi: int) -> int:
        """Draw in [lo, hi], both ends inclusive."""
        if hi < lo:
            raise ValueError("randint() needs lo <= hi")
        return lo + self.below(hi - lo + 1)

    def chance(self, p: float) -> bool:
        """True with probability p (p is clamped to [0, 1])."""
        if p <= 0.0:
            self.next_u64()
            return False
        threshold = int(p * (1 << 64))
        return self.next_u64() < threshold
