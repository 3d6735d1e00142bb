"""Path state, the independent sequence verifier, and path file formats.

``PathState`` (re-exported from the active kernel backend) is the fast
mutable representation used by the search. ``check_sequence`` and
``verify_sequence`` are the trusted side: plain-Python checks over a list of
labels, sharing no bookkeeping with the kernel, so every claimed path can be
certified from scratch.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

from .backend import BACKEND, PathState, Rng
from ._kinds import LEFT, RIGHT
from .primes import PrimePool, build_pool, is_prime

__all__ = [
    "BACKEND",
    "PathState",
    "Rng",
    "LEFT",
    "RIGHT",
    "SplitView",
    "CheckResult",
    "new_path",
    "from_labels",
    "check_sequence",
    "verify_sequence",
    "is_elegant_sequence",
    "free_primes",
    "free_gaps",
    "split_view",
    "parse_path_text",
    "format_path_text",
    "load_paths",
    "dump_path_json",
    "load_path_json",
]


class SplitView(NamedTuple):
    """A cut through a path: position u (1-based) and the gap across it."""

    cut: int
    delta: int


# Reason codes for rejected sequences.
OK = "ok"
EMPTY = "empty"
NON_PRIME = "non_prime"
OUT_OF_POOL = "out_of_pool"
DUPLICATE_PRIME = "duplicate_prime"
GAP_OUT_OF_RANGE = "gap_out_of_range"
DUPLICATE_GAP = "duplicate_gap"
TOO_LONG = "too_long"


@dataclass(frozen=True)
class CheckResult:
    """Outcome of a sequence check; ``index`` locates the first offence."""

    ok: bool
    reason: str = OK
    index: int | None = None

    def __bool__(self) -> bool:
        return self.ok


def check_sequence(labels: Sequence[int], n: int, pool: PrimePool | None = None) -> CheckResult:
    """Check that ``labels`` is an admissible path for a pool of n odd primes.

    Admissible: distinct odd primes among the first n, consecutive absolute
    differences distinct, even, and at most 2n-2. Primality is re-proved here
    by trial division; nothing is trusted from the caller.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    if pool is None:
        pool = build_pool(n)
    if len(labels) == 0:
        return CheckResult(False, EMPTY, None)
    if len(labels) > n:
        return CheckResult(False, TOO_LONG, n)
    top = pool.max_value
    seen: set[int] = set()
    gaps: set[int] = set()
    for i, v in enumerate(labels):
        if v == 2 or not is_prime(v):
            return CheckResult(False, NON_PRIME, i)
        if v > top:
            return CheckResult(False, OUT_OF_POOL, i)
        if v in seen:
            return CheckResult(False, DUPLICATE_PRIME, i)
        seen.add(v)
        if i > 0:
            g = abs(v - labels[i - 1])
            # odd primes only, so g is even; asserted rather than assumed
            assert g % 2 == 0
            if g < 2 or g > 2 * n - 2:
                return CheckResult(False, GAP_OUT_OF_RANGE, i)
            if g in gaps:
                return CheckResult(False, DUPLICATE_GAP, i)
            gaps.add(g)
    return CheckResult(True)


def verify_sequence(labels: Sequence[int], n: int, pool: PrimePool | None = None) -> bool:
    """True iff ``labels`` is an admissible path for pool size n."""
    return check_sequence(labels, n, pool).ok


def is_elegant_sequence(labels: Sequence[int], n: int, pool: PrimePool | None = None) -> bool:
    """True iff ``labels`` uses all n pool primes with gaps exactly 2..2n-2."""
    return len(labels) == n and verify_sequence(labels, n, pool)


def new_path(n: int, start_rank: int, pool: PrimePool | None = None) -> PathState:
    """Length-1 path holding the start_rank-th odd prime."""
    if pool is None:
        pool = build_pool(n)
    return PathState(pool.values, n, start_rank)


def from_labels(labels: Sequence[int], n: int, pool: PrimePool | None = None) -> PathState:
    """PathState from explicit labels; raises ValueError when inadmissible."""
    if pool is None:
        pool = build_pool(n)
    ranks = []
    for v in labels:
        r = pool.rank(v)
        if r is None:
            raise ValueError(f"{v} is not among the first {n} odd primes")
        ranks.append(r)
    return PathState.from_ranks(pool.values, n, ranks)


def free_primes(state: PathState) -> set[int]:
    """Ranks of pool primes not on the path."""
    return set(state.free_prime_ranks())


def free_gaps(state: PathState) -> set[int]:
    """Even gap values not used by any path edge."""
    return set(state.free_gap_values())


def split_view(state: PathState, u: int) -> SplitView:
    """The cut at position u with its connecting gap."""
    return SplitView(u, state.gap_at(u))


# ------------------------------------------------------------------ file IO

def parse_path_text(line: str) -> list[int]:
    """One path per line, space-separated prime labels."""
    return [int(tok) for tok in line.split()]


def format_path_text(labels: Iterable[int]) -> str:
    return " ".join(str(v) for v in labels)


def load_paths(text: str) -> list[list[int]]:
    """All paths in a text block; blank lines and #-comments are skipped."""
    out = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        out.append(parse_path_text(line))
    return out


def dump_path_json(labels: Sequence[int], n: int) -> str:
    return json.dumps({"n": n, "labels": list(labels)})


def load_path_json(text: str) -> tuple[int, list[int]]:
    doc = json.loads(text)
    n = int(doc["n"])
    labels = [int(v) for v in doc["labels"]]
    return n, labels
