"""Exhaustive ground truth for small pools.

Two enumeration strategies answer the same question from different search
trees: the prime-first walk places the next prime and derives the gap, the
gap-first walk picks the next gap and derives the prime. Their counts must
agree; tests pin those counts as regression constants.

Counting is exact and deterministic; no randomness enters this module.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional

from .backend import PathState
from .primes import PrimePool, build_pool

__all__ = [
    "EnumerationResult",
    "enumerate_elegant",
    "elegant_paths",
    "count_elegant_gap_first",
    "enumerate_admissible",
    "admissible_label_paths",
    "count_admissible",
    "ELEGANT_GUARD",
    "ADMISSIBLE_GUARD",
]

ELEGANT_GUARD = 12
ADMISSIBLE_GUARD = 9


@dataclass(frozen=True)
class EnumerationResult:
    """Exact elegant-path counts for one pool size."""

    n: int
    total_elegant: int
    distinct_up_to_reversal: int
    sample_paths: Optional[tuple[tuple[int, ...], ...]] = None

    def to_dict(self) -> dict:
        doc = {
            "n": self.n,
            "total_elegant": self.total_elegant,
            "distinct_up_to_reversal": self.distinct_up_to_reversal,
        }
        if self.sample_paths is not None:
            doc["sample_paths"] = [list(p) for p in self.sample_paths]
        return doc


def _guard(n: int, guard: int, allow_large: bool) -> None:
    if n < 2:
        raise ValueError("n must be at least 2")
    if n > guard and not allow_large:
        raise ValueError(
            f"n={n} exceeds the exhaustive-search guard ({guard}); "
            "pass allow_large=True to force it"
        )


def _neighbor_table(vals: tuple[int, ...], n: int) -> list[list[tuple[int, int]]]:
    """For each rank index, the rank indices reachable by an in-range gap.

    Entries are (other_index, gap_bit) with gap_bit = 1 << (gap // 2).
    """
    table: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            g = abs(vals[j] - vals[i])
            k = g >> 1
            if 1 <= k <= n - 1:
                table[i].append((j, 1 << k))
    return table


def elegant_paths(
    n: int, pool: PrimePool | None = None, allow_large: bool = False
) -> Iterator[list[int]]:
    """Yield every elegant label sequence (both directions), sorted start."""
    _guard(n, ELEGANT_GUARD, allow_large)
    if pool is None:
        pool = build_pool(n)
    vals = pool.values
    table = _neighbor_table(vals, n)
    seq = [0] * n

    def rec(i: int, used: int, gaps: int, depth: int):
        seq[depth - 1] = i
        if depth == n:
            yield [vals[x] for x in seq]
            return
        for j, gb in table[i]:
            if not (used >> j) & 1 and not gaps & gb:
                yield from rec(j, used | (1 << j), gaps | gb, depth + 1)

    for s in range(n):
        yield from rec(s, 1 << s, 0, 1)


def _count_prime_first(n: int, vals: tuple[int, ...]) -> int:
    table = _neighbor_table(vals, n)
    total = 0

    def rec(i: int, used: int, gaps: int, depth: int) -> None:
        nonlocal total
        if depth == n:
            total += 1
            return
        for j, gb in table[i]:
            if not (used >> j) & 1 and not gaps & gb:
                rec(j, used | (1 << j), gaps | gb, depth + 1)

    for s in range(n):
        rec(s, 1 << s, 0, 1)
    return total


def count_elegant_gap_first(
    n: int, pool: PrimePool | None = None, allow_large: bool = False
) -> int:
    """Count elegant label sequences by choosing each edge's gap first.

    Independent cross-check for enumerate_elegant: the branching is over
    which even value the next edge carries and in which direction.
    """
    _guard(n, ELEGANT_GUARD, allow_large)
    if pool is None:
        pool = build_pool(n)
    vals = pool.values
    rank_of = {v: i for i, v in enumerate(vals)}
    total = 0
    all_gaps = range(1, n)  # gap = 2k

    def rec(cur: int, used: int, gaps: int, depth: int) -> None:
        nonlocal total
        if depth == n:
            total += 1
            return
        for k in all_gaps:
            if (gaps >> k) & 1:
                continue
            g = 2 * k
            for cand in (cur + g, cur - g):
                j = rank_of.get(cand)
                if j is not None and not (used >> j) & 1:
                    rec(cand, used | (1 << j), gaps | (1 << k), depth + 1)

    for s in range(n):
        rec(vals[s], 1 << s, 0, 1)
    return total


def enumerate_elegant(
    n: int,
    pool: PrimePool | None = None,
    allow_large: bool = False,
    sample_cap: int = 0,
) -> EnumerationResult:
    """Exact elegant-path counts via the prime-first walk.

    A path can never equal its own reversal (labels are distinct), so the
    directed total is exactly twice the undirected count; this is asserted.
    """
    _guard(n, ELEGANT_GUARD, allow_large)
    if pool is None:
        pool = build_pool(n)
    if sample_cap > 0:
        total = 0
        samples: list[tuple[int, ...]] = []
        for path in elegant_paths(n, pool, allow_large):
            total += 1
            if len(samples) < sample_cap:
                samples.append(tuple(path))
        sample: Optional[tuple[tuple[int, ...], ...]] = tuple(samples)
    else:
        total = _count_prime_first(n, pool.values)
        sample = None
    assert total % 2 == 0
    return EnumerationResult(
        n=n,
        total_elegant=total,
        distinct_up_to_reversal=total // 2,
        sample_paths=sample,
    )


# ------------------------------------------------------------- admissibles

def admissible_label_paths(
    n: int,
    l: int | None = None,
    pool: PrimePool | None = None,
    allow_large: bool = False,
) -> Iterator[list[int]]:
    """Yield admissible label sequences: every length when l is None.

    Directed: a path and its reversal both appear (unless length 1).
    """
    _guard(n, ADMISSIBLE_GUARD, allow_large)
    if l is not None and not 1 <= l <= n:
        raise ValueError(f"l={l} outside 1..{n}")
    if pool is None:
        pool = build_pool(n)
    vals = pool.values
    table = _neighbor_table(vals, n)
    seq = [0] * n

    def rec(i: int, used: int, gaps: int, depth: int):
        seq[depth - 1] = i
        if l is None or depth == l:
            yield [vals[x] for x in seq[:depth]]
        if depth == n or (l is not None and depth == l):
            return
        for j, gb in table[i]:
            if not (used >> j) & 1 and not gaps & gb:
                yield from rec(j, used | (1 << j), gaps | gb, depth + 1)

    for s in range(n):
        yield from rec(s, 1 << s, 0, 1)


def enumerate_admissible(
    n: int, l: int | None = None, pool: PrimePool | None = None, allow_large: bool = False
) -> Iterator[PathState]:
    """Yield admissible paths as fresh PathStates; every length when l is None."""
    if pool is None:
        pool = build_pool(n)
    for labels in admissible_label_paths(n, l, pool, allow_large):
        ranks = [pool.rank(v) for v in labels]
        yield PathState.from_ranks(pool.values, n, ranks)


def count_admissible(
    n: int, l: int | None = None, pool: PrimePool | None = None, allow_large: bool = False
) -> int:
    """Number of admissible label sequences (all lengths when l is None)."""
    count = 0
    for _ in admissible_label_paths(n, l, pool, allow_large):
        count += 1
    return count
