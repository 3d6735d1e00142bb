"""Pools of odd primes with constant-time rank and value lookup.

Labels throughout the package are drawn from the first ``n`` odd primes
(3, 5, 7, ...); 2 is excluded so that every difference of two labels is even.
Ranks are 1-based: rank 1 is 3, rank 2 is 5, and so on.
"""

from __future__ import annotations

import math
from bisect import bisect_left
from typing import Iterator


def is_prime(v: int) -> bool:
    """Trial-division primality test, kept free of sieve state on purpose.

    The sequence verifier leans on this so that a sieve bug cannot vouch
    for itself.
    """
    if v < 2:
        return False
    if v < 4:
        return True
    if v % 2 == 0:
        return False
    f = 3
    while f * f <= v:
        if v % f == 0:
            return False
        f += 2
    return True


def _sieve_upto(limit: int) -> list[int]:
    """All primes <= limit by the classic sieve of Eratosthenes."""
    if limit < 2:
        return []
    flags = bytearray([1]) * (limit + 1)
    flags[0] = flags[1] = 0
    for p in range(2, math.isqrt(limit) + 1):
        if flags[p]:
            flags[p * p :: p] = bytearray(len(flags[p * p :: p]))
    return [i for i, f in enumerate(flags) if f]


class PrimePool:
    """The first ``count`` odd primes, with both directions of lookup."""

    __slots__ = ("count", "values", "_rank")

    def __init__(self, values: list[int]):
        self.count = len(values)
        self.values = tuple(values)
        self._rank = {p: i + 1 for i, p in enumerate(values)}

    def value(self, rank: int) -> int:
        """Prime at 1-based rank; raises IndexError outside 1..count."""
        if not 1 <= rank <= self.count:
            raise IndexError(f"rank {rank} outside 1..{self.count}")
        return self.values[rank - 1]

    def rank(self, p: int) -> int | None:
        """1-based rank of p, or None if p is not in the pool."""
        return self._rank.get(p)

    @property
    def max_value(self) -> int:
        return self.values[-1]

    def __len__(self) -> int:
        return self.count

    def __iter__(self) -> Iterator[int]:
        return iter(self.values)

    def __contains__(self, p: int) -> bool:
        return p in self._rank

    def __repr__(self) -> str:
        return f"PrimePool(count={self.count}, max={self.values[-1] if self.count else None})"


def build_pool(count: int) -> PrimePool:
    """Pool of the first ``count`` odd primes.

    The sieve bound comes from the p_k < k (ln k + ln ln k) estimate for the
    k-th prime (k >= 6), padded and grown on the rare undershoot.
    """
    if count < 1:
        raise ValueError("pool needs at least one prime")
    k = count + 1  # odd primes skip 2
    if k < 6:
        bound = 15
    else:
        bound = int(k * (math.log(k) + math.log(math.log(k)))) + 16
    while True:
        odd = [p for p in _sieve_upto(bound) if p != 2]
        if len(odd) >= count:
            return PrimePool(odd[:count])
        bound = bound * 3 // 2 + 16


def rank(pool: PrimePool, p: int) -> int | None:
    """Module-level alias for PrimePool.rank."""
    return pool.rank(p)


def rank_of_value(sorted_values: tuple[int, ...], v: int) -> int:
    """1-based rank of v in a sorted tuple, or 0 when absent.

    Binary search rather than a dict so the compiled kernel can share the
    exact same routine over a plain array.
    """
    i = bisect_left(sorted_values, v)
    if i < len(sorted_values) and sorted_values[i] == v:
        return i + 1
    return 0
