"""Platform-independent 64-bit pseudo-random generator.

The generator is xorshift64* seeded through splitmix64, so any language with
unsigned 64-bit arithmetic can reproduce the streams::

    seeding (splitmix64, applied once to the user seed s):
        z = s + 0x9E3779B97F4A7C15
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
        z = (z ^ (z >> 27)) * 0x94D049BB133111EB
        state = z ^ (z >> 31)            (replaced by 1 if zero)

    each draw (xorshift64*):
        state ^= state >> 12
        state ^= state << 25
        state ^= state >> 27
        out = state * 0x2545F4914F6CDD1D

    uniform double in [0, 1): (out >> 11) * 2**-53

All arithmetic is modulo 2**64.
"""

from __future__ import annotations

import math

import numpy as np

MASK64 = (1 << 64) - 1


def splitmix64(seed: int) -> int:
    z = (seed + 0x9E3779B97F4A7C15) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


class XorShift64Star:
    """Seedable generator; see the module docstring for the recurrence."""

    def __init__(self, seed: int):
        self.state = splitmix64(int(seed) & MASK64) or 1

    def next_u64(self) -> int:
        x = self.state
        x ^= x >> 12
        x ^= (x << 25) & MASK64
        x ^= x >> 27
        self.state = x
        return (x * 0x2545F4914F6CDD1D) & MASK64

    def uniform(self, lo: float = 0.0, hi: float = 1.0) -> float:
        return lo + (hi - lo) * ((self.next_u64() >> 11) * 2.0**-53)

    def uniforms(self, n: int, lo: float = 0.0, hi: float = 1.0) -> np.ndarray:
        return np.array([self.uniform(lo, hi) for _ in range(n)])

    def normal(self) -> float:
        """Standard normal by the Box-Muller transform."""
        u1 = 1.0 - self.uniform()  # in (0, 1]
        u2 = self.uniform()
        return math.sqrt(-2.0 * math.log(u1)) * math.cos(2.0 * math.pi * u2)

    def normals(self, n: int) -> np.ndarray:
        return np.array([self.normal() for _ in range(n)])


def child_seed(master: int, index: int) -> int:
    """Independent per-task seed derived from a master seed."""
    return splitmix64((splitmix64(int(master) & MASK64) + int(index)) & MASK64)
