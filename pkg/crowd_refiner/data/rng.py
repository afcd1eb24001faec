"""
SplitMix64 pseudo-random generator.

Synthetic datasets must be identical on every platform, so the generator is
fully specified here instead of relying on a library's stream:

    state  <- state + 0x9E3779B97F4A7C15            (mod 2**64)
    z      <- (state ^ (state >> 30)) * 0xBF58476D1CE4E5B9
    z      <- (z ^ (z >> 27)) * 0x94D049BB133111EB
    output <- z ^ (z >> 31)

Uniform doubles take the top 53 bits of an output. Per-image streams are
seeded with ``seed ^ index``.

Example:
    >>> SplitMix64(0).next_u64()
    16294208416658607535
"""

import math
from typing import List, MutableSequence, TypeVar

T = TypeVar('T')

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15
MIX1 = 0xBF58476D1CE4E5B9
MIX2 = 0x94D049BB133111EB


class SplitMix64:
    """Deterministic 64-bit generator.

    Attributes:
        state (int): Current 64-bit state.
    """

    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + GOLDEN_GAMMA) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * MIX1) & MASK64
        z = ((z ^ (z >> 27)) * MIX2) & MASK64
        return z ^ (z >> 31)

    def uniform(self, low: float = 0.0, high: float = 1.0) -> float:
        """Draw from [low, high)."""
        return low + (high - low) * ((self.next_u64() >> 11) * (1.0 / (1 << 53)))

    def randint(self, low: int, high: int) -> int:
        """Draw an integer from the closed range [low, high]."""
        span = high - low + 1
        return low + self.next_u64() % span

    def normal(self) -> float:
        """Standard normal draw by the Box-Muller transform."""
        u1 = 1.0 - self.uniform()
        u2 = self.uniform()
        return math.sqrt(-2.0 * math.log(u1)) * math.cos(2.0 * math.pi * u2)

    def shuffle(self, items: MutableSequence[T]) -> None:
        """Fisher-Yates shuffle in place."""
        for i in range(len(items) - 1, 0, -1):
            j = self.randint(0, i)
            items[i], items[j] = items[j], items[i]

    def permutation(self, n: int) -> List[int]:
        order = list(range(n))
        self.shuffle(order)
        return order


def derive_seed(seed: int, index: int) -> int:
    """Seed of the stream owned by item ``index`` of a seeded collection."""
    return (seed ^ index) & MASK64
