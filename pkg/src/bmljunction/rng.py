"""Deterministic sampling utilities.

All randomness in the package flows through splitmix64 so that every run is
reproducible from a 64-bit seed, independent of Python's hash randomization
or library versions.
"""

from __future__ import annotations

import math
from fractions import Fraction

_MASK64 = (1 << 64) - 1

# Salt XORed into the seed to derive the second (blue) sampling stream.
# Fractional bits of sqrt(2), a fixed published constant.
BLUE_STREAM_SALT = 0x6A09E667F3BCC909


class SplitMix64:
    """The splitmix64 generator (Steele, Lea, Flood mixing constants)."""

    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = seed & _MASK64

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def below(self, bound: int) -> int:
        """Uniform-ish integer in [0, bound) via modulo (bias < 2**-40 here)."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        return self.next_u64() % bound


def partial_sample(population: list[int], k: int, stream: SplitMix64) -> list[int]:
    """Draw k distinct items via a partial Fisher-Yates shuffle.

    Returns the items in selection order; deterministic in (population, k, seed).
    """
    if k > len(population):
        raise ValueError(f"cannot draw {k} items from {len(population)}")
    pool = list(population)
    for i in range(k):
        j = i + stream.below(len(pool) - i)
        pool[i], pool[j] = pool[j], pool[i]
    return pool[:k]


def round_half_up(x: Fraction) -> int:
    """Round to nearest integer, ties away from zero (for non-negative x)."""
    return math.floor(x + Fraction(1, 2))


def as_fraction(p) -> Fraction:
    """Coerce a density-like value to an exact Fraction.

    Strings accept decimals ("0.48") and ratios ("12/25"). Floats are read
    through their shortest decimal repr, so 0.48 means 12/25 exactly; avoid
    passing floats that are not short decimals.
    """
    if isinstance(p, Fraction):
        return p
    if isinstance(p, int):
        return Fraction(p)
    if isinstance(p, float):
        return Fraction(str(p))
    if isinstance(p, str):
        return Fraction(p)
    raise TypeError(f"cannot interpret {p!r} as an exact fraction")
