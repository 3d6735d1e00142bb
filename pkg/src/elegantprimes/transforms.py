"""Admissibility-preserving path rewrites, public layer.

Thin wrappers over the kernel methods: each either applies a rewrite and
returns a ``TransformOutcome`` describing what moved, or leaves the state
untouched and returns None. The gap ledger in the outcome (freed versus
consumed) is what the follow-up insertion feeds on.

The rewrite family:

- reverse a prefix or suffix (new junction gap must be free);
- rotate the two halves (new gap is end-to-end; free, or already used at
  exactly the chosen cut, which reshuffles without touching the gap sets);
- insert a free prime at a cut, in one of three shapes;
- substitute a free prime for an on-path one, recombining the remaining two
  segments in any of 12 target shapes from 3 source splits.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from . import _kinds
from ._kinds import (
    KIND_NAMES,
    SHAPE_MIDDLE,
    SHAPE_REV_PREFIX,
    SHAPE_REV_SUFFIX,
    SOURCE_NAMES,
    TARGET_NAMES,
)
from .backend import PathState
from .pathstate import SplitView

__all__ = [
    "TransformOutcome",
    "try_reverse_prefix",
    "try_reverse_suffix",
    "try_rotate",
    "try_insert",
    "try_substitute",
    "followup_insert",
    "substitution_shapes",
    "INSERT_SHAPES",
]

INSERT_SHAPES = (SHAPE_MIDDLE, SHAPE_REV_PREFIX, SHAPE_REV_SUFFIX)


@dataclass(frozen=True)
class TransformOutcome:
    """What a successful rewrite did to the path.

    ``freed_gaps`` left the path, ``consumed_gaps`` joined it; a gap in
    neither moved. ``inserted_prime`` and ``removed_prime`` are pool ranks
    (None when the rewrite moved no prime).
    """

    kind: str
    cut: Optional[SplitView]
    freed_gaps: tuple[int, ...]
    consumed_gaps: tuple[int, ...]
    inserted_prime: Optional[int] = None
    removed_prime: Optional[int] = None
    substitution: Optional[tuple[str, str]] = None


def _wrap(raw) -> Optional[TransformOutcome]:
    if raw is None:
        return None
    kind, u, delta, freed, consumed, ins, rem, detail = raw
    cut = SplitView(u, delta) if delta >= 0 else None
    sub = None
    if detail is not None:
        source, target = detail
        sub = (SOURCE_NAMES[source], TARGET_NAMES[target])
    return TransformOutcome(
        kind=KIND_NAMES[kind],
        cut=cut,
        freed_gaps=tuple(freed),
        consumed_gaps=tuple(consumed),
        inserted_prime=ins if ins else None,
        removed_prime=rem if rem else None,
        substitution=sub,
    )


def try_reverse_prefix(state: PathState, u: int) -> Optional[TransformOutcome]:
    """Reverse positions [0, u); needs |label(u) - label(0)| free."""
    return _wrap(state.try_reverse_prefix(u))


def try_reverse_suffix(state: PathState, u: int) -> Optional[TransformOutcome]:
    """Reverse positions [u, len); needs |label(-1) - label(u-1)| free."""
    return _wrap(state.try_reverse_suffix(u))


def try_rotate(state: PathState, u: int) -> Optional[TransformOutcome]:
    """Exchange the halves at cut u; both rotation flavours in one entry."""
    return _wrap(state.try_rotate(u))


def try_insert(state: PathState, u: int, r: int, shape: int) -> Optional[TransformOutcome]:
    """Splice free prime r into cut u with the given shape."""
    return _wrap(state.try_insert(u, r, shape))


def try_substitute(
    state: PathState,
    q_index: int,
    r: int,
    target: int,
    cut: Optional[int] = None,
) -> Optional[TransformOutcome]:
    """Replace the prime at q_index with free prime r, recombining.

    ``cut`` splits the leftover path when q_index is an end position; for an
    interior position it defaults to (and must equal) q_index.
    """
    if cut is None:
        cut = q_index
    return _wrap(state.try_substitute(q_index, cut, r, target))


def followup_insert(
    state: PathState, outcome: Optional[TransformOutcome]
) -> Optional[TransformOutcome]:
    """Deterministic growth attempt fed by a rewrite's gap ledger.

    Tries to re-insert the prime the rewrite freed, then primes one freed-gap
    away from a cut boundary, then plain end extensions.
    """
    freed_prime = 0
    freed_gaps: tuple[int, ...] = ()
    if outcome is not None:
        freed_gaps = outcome.freed_gaps
        if outcome.removed_prime:
            freed_prime = outcome.removed_prime
    return _wrap(state.followup_insert(freed_prime, freed_gaps))


def substitution_shapes() -> list[tuple[str, str]]:
    """The full (source, target) family, 3 x 12 = 36 members."""
    return [(s, t) for s in SOURCE_NAMES for t in TARGET_NAMES]


def all_insert_shapes() -> Iterable[int]:
    return INSERT_SHAPES


def kind_names() -> tuple[str, ...]:
    return KIND_NAMES


def _kind_constants():
    return _kinds
