"""Deterministic pseudo-random streams shared by sampling and training.

The generator is xoshiro256** (Blackman & Vigna) seeded through splitmix64,
implemented over plain Python integers so that a given 64-bit seed yields
the same stream on every platform. Independent child streams are derived
from a root seed and a task index via :func:`derive_seed`.
"""

from __future__ import annotations

from typing import Sequence, TypeVar

_MASK64 = (1 << 64) - 1

T = TypeVar("T")


def _splitmix64_step(state: int) -> tuple[int, int]:
    """One splitmix64 step; returns (output, next_state)."""
    state = (state + 0x9E3779B97F4A7C15) & _MASK64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (z ^ (z >> 31)) & _MASK64, state


def derive_seed(root: int, index: int) -> int:
    """Derive the seed of an independent child stream.

    Child streams for parallel tasks must come from (root seed, task index)
    so that concurrent samplers never share a generator.
    """
    a, state = _splitmix64_step(root & _MASK64)
    b, _ = _splitmix64_step(state ^ ((index & _MASK64) * 0x9E3779B97F4A7C15 & _MASK64))
    return (a ^ b) & _MASK64


def _rotl(x: int, k: int) -> int:
    return ((x << k) | (x >> (64 - k))) & _MASK64


class SeededRng:
    """xoshiro256** stream with convenience draws.

    A single instance is single-owner: it must not be shared between
    concurrent samplers. Use :func:`derive_seed` per task instead.
    """

    def __init__(self, seed: int) -> None:
        self.seed = seed & _MASK64
        state = self.seed
        s = []
        for _ in range(4):
            out, state = _splitmix64_step(state)
            s.append(out)
        if not any(s):  # all-zero state is the one invalid xoshiro state
            s[0] = 0x9E3779B97F4A7C15
        self._s = s

    def next_u64(self) -> int:
        s = self._s
        result = (_rotl((s[1] * 5) & _MASK64, 7) * 9) & _MASK64
        t = (s[1] << 17) & _MASK64
        s[2] ^= s[0]
        s[3] ^= s[1]
        s[1] ^= s[2]
        s[0] ^= s[3]
        s[2] ^= t
        s[3] = _rotl(s[3], 45)
        return result

    def random(self) -> float:
        """Uniform float in [0, 1) with 53 bits of precision."""
        return (self.next_u64() >> 11) * (2.0 ** -53)

    def randrange(self, n: int) -> int:
        """Uniform integer in [0, n); rejection sampling, no modulo bias."""
        if n <= 0:
            raise ValueError(f"randrange bound must be positive, got {n}")
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            x = self.next_u64()
            if x < limit:
                return x % n

    def randint(self, lo: int, hi: int) -> int:
        """Uniform integer in [lo, hi], both ends inclusive."""
        if hi < lo:
            raise ValueError(f"empty range [{lo}, {hi}]")
        return lo + self.randrange(hi - lo + 1)

    def choice(self, seq: Sequence[T]) -> T:
        if not seq:
            raise ValueError("cannot choose from an empty sequence")
        return seq[self.randrange(len(seq))]

    def shuffle(self, items: list) -> None:
        """In-place Fisher-Yates shuffle."""
        for i in range(len(items) - 1, 0, -1):
            j = self.randrange(i + 1)
            items[i], items[j] = items[j], items[i]

    def spawn(self, index: int) -> "SeededRng":
        """Child stream independent of this one, keyed by index."""
        return SeededRng(derive_seed(self.seed, index))
