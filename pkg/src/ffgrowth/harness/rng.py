"""Seeded 64-bit generator with a fully specified output sequence.

SplitMix64, all arithmetic mod 2^64:

    state  <- state + 0x9E3779B97F4A7C15
    z      <- state
    z      <- (z xor (z >> 30)) * 0xBF58476D1CE4E5B9
    z      <- (z xor (z >> 27)) * 0x94D049BB133111EB
    output <- z xor (z >> 31)

Uniform draws in [0, m) reject outputs >= floor(2^64 / m) * m and reduce the
rest mod m.  Sub-seeds for individual trials are derived by feeding each label
through one SplitMix64 step: s <- next(SplitMix64(s xor label)).
"""

from __future__ import annotations

MASK = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15


class SplitMix64:
    def __init__(self, seed: int):
        self.state = seed & MASK

    def next(self) -> int:
        self.state = (self.state + GOLDEN) & MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
        return z ^ (z >> 31)

    def below(self, m: int) -> int:
        if m <= 0:
            raise ValueError("range must be positive")
        limit = ((1 << 64) // m) * m
        while True:
            x = self.next()
            if x < limit:
                return x % m

    def sample(self, pool: list[int], k: int) -> list[int]:
        """k distinct items of pool by a partial Fisher-Yates shuffle."""
        if k > len(pool):
            raise ValueError(f"cannot draw {k} distinct items from {len(pool)}")
        pool = list(pool)
        for i in range(k):
            j = i + self.below(len(pool) - i)
            pool[i], pool[j] = pool[j], pool[i]
        return pool[:k]


def derive_seed(seed: int, *labels: int) -> int:
    s = seed & MASK
    for v in labels:
        s = SplitMix64(s ^ (v & MASK)).next()
    return s
