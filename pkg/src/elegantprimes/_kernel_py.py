"""Hot-path state and rewrite kernel, pure-Python edition.

``PathState`` keeps a partial path of distinct pool primes whose consecutive
absolute differences are distinct even numbers below twice the pool size, plus
the bookkeeping needed to test and apply rewrites in O(1):

- a buffer with slack at both ends, so end extension never shifts the path;
- position of every on-path rank, so failed rewrites cost nothing;
- an index from each even gap to the buffer edge where it is used;
- the free (off-path) primes as a swap-remove list, giving O(1) sampling.

Successful structural rewrites rebuild the touched bookkeeping in O(length);
failed attempts leave the state bit-for-bit unchanged.

The compiled twin in ``_kernel.pyx`` mirrors this module statement for
statement. Any behavioural edit here must be replayed there; the two are held
draw-for-draw and state-for-state equal by tests/test_backends.py.

RNG draw conventions (shared contract):

- ``greedy_pass``: exactly ``len(free) - 1`` draws for the Fisher-Yates
  shuffle of a copy of the free list, then zero draws while scanning.
- ``shuffle_step``: one draw picks the case (0, 1, 2 for the three moves).
  Case 0 draws one cut per attempt plus one tie-break draw when both
  reversal conditions hold there. Case 1 draws one cut only when the
  end-to-end gap is free. Case 2 draws, per attempt, the replaced position,
  then a cut only when that position is an end, then the free-prime index,
  then the target shape.
- ``followup_insert`` draws nothing.
"""

from __future__ import annotations

from ._kinds import (
    EXTEND_LEFT,
    EXTEND_RIGHT,
    INSERT_MIDDLE,
    INSERT_REV_PREFIX,
    INSERT_REV_SUFFIX,
    LEFT,
    REVERSE_PREFIX,
    REVERSE_SUFFIX,
    RIGHT,
    ROTATE_FREE,
    ROTATE_NEUTRAL,
    SHAPE_MIDDLE,
    SHAPE_REV_PREFIX,
    SHAPE_REV_SUFFIX,
    SOURCE_INTERIOR,
    SOURCE_LEFT,
    SOURCE_RIGHT,
    SUBSTITUTE,
)

BACKEND = "py"

_MASK = (1 << 64) - 1


class Rng:
    """splitmix64 stream with multiply-shift range reduction.

    ``below(k)`` maps one 64-bit output to [0, k) as (u * k) >> 64. Both
    backends implement this bit-identically, which is what makes runs
    reproducible across them.
    """

    __slots__ = ("_state",)

    def __init__(self, seed: int):
        self._state = seed & _MASK

    def next_u64(self) -> int:
        self._state = (self._state + 0x9E3779B97F4A7C15) & _MASK
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def below(self, k: int) -> int:
        """Uniform-enough integer in [0, k) from one stream output."""
        return (self.next_u64() * k) >> 64


class PathState:
    """Mutable partial path over the first n odd primes.

    Construct via ``PathState(primes, n, start_rank)`` for a single-prime
    seed path or ``PathState.from_ranks`` for a full sequence. ``primes`` is
    the pool value tuple (index 0 is rank 1).
    """

    __slots__ = (
        "n",
        "primes",
        "_cap",
        "_buf",
        "_head",
        "_len",
        "_pos",
        "_gpos",
        "_free",
        "_fslot",
    )

    def __init__(self, primes, n: int, start_rank: int):
        if n < 2:
            raise ValueError("need a pool of at least two primes")
        if len(primes) != n:
            raise ValueError("pool size does not match n")
        self.n = n
        self.primes = (0,) + tuple(primes)  # 1-based
        self._cap = 2 * n + 1
        self._buf = [0] * self._cap
        self._pos = [-1] * (n + 1)
        self._gpos = [-1] * n  # index by gap // 2, slots 1..n-1
        self._free = []
        self._fslot = [-1] * (n + 1)
        if start_rank == 0:
            # blank state for from_ranks
            self._head = n
            self._len = 0
            for r in range(1, n + 1):
                self._fslot[r] = len(self._free)
                self._free.append(r)
            return
        if not 1 <= start_rank <= n:
            raise ValueError(f"start rank {start_rank} outside 1..{n}")
        self._head = n
        self._len = 1
        self._buf[self._head] = start_rank
        self._pos[start_rank] = self._head
        for r in range(1, n + 1):
            if r != start_rank:
                self._fslot[r] = len(self._free)
                self._free.append(r)

    @classmethod
    def from_ranks(cls, primes, n: int, ranks) -> "PathState":
        """Build from an explicit rank sequence, validating admissibility."""
        ranks = list(ranks)
        if not 1 <= len(ranks) <= n:
            raise ValueError("sequence length outside 1..n")
        state = cls(primes, n, 0)
        seen_gap = [False] * n
        seen_rank = [False] * (n + 1)
        for i, r in enumerate(ranks):
            if not 1 <= r <= n or seen_rank[r]:
                raise ValueError(f"rank {r} repeated or outside 1..{n}")
            seen_rank[r] = True
            if i > 0:
                g = abs(state.primes[r] - state.primes[ranks[i - 1]])
                k = g >> 1
                if k < 1 or k > n - 1 or seen_gap[k]:
                    raise ValueError(f"gap {g} repeated or out of range")
                seen_gap[k] = True
        for r in ranks:
            state._take_prime(r)
        state._reload(ranks)
        return state

    # ---------------------------------------------------------------- views

    @property
    def length(self) -> int:
        return self._len

    def ranks(self) -> list[int]:
        h = self._head
        return self._buf[h : h + self._len]

    def labels(self) -> list[int]:
        pr = self.primes
        h = self._head
        return [pr[r] for r in self._buf[h : h + self._len]]

    def label_at(self, i: int) -> int:
        if not 0 <= i < self._len:
            raise IndexError(i)
        return self.primes[self._buf[self._head + i]]

    def gap_at(self, u: int) -> int:
        """Gap across cut u (1-based, between positions u-1 and u)."""
        if not 1 <= u <= self._len - 1:
            raise IndexError(u)
        b = self._buf
        p = self.primes
        i = self._head + u
        return abs(p[b[i]] - p[b[i - 1]])

    def gap_cut(self, g: int) -> int:
        """Cut where even gap g is used, or 0 when free or out of range."""
        k = g >> 1
        if g & 1 or k < 1 or k > self.n - 1:
            return 0
        e = self._gpos[k]
        return 0 if e < 0 else e - self._head + 1

    def is_prime_free(self, r: int) -> bool:
        return 1 <= r <= self.n and self._fslot[r] >= 0

    def is_gap_free(self, g: int) -> bool:
        k = g >> 1
        return not g & 1 and 1 <= k <= self.n - 1 and self._gpos[k] < 0

    def free_prime_ranks(self) -> list[int]:
        return sorted(self._free)

    def free_gap_values(self) -> list[int]:
        return [2 * k for k in range(1, self.n) if self._gpos[k] < 0]

    def is_elegant(self) -> bool:
        return self._len == self.n

    def signature(self):
        """Snapshot for state-unchanged assertions, free-list order included."""
        return (tuple(self.ranks()), tuple(self._free), tuple(self._gpos))

    def clone(self) -> "PathState":
        other = PathState.__new__(PathState)
        other.n = self.n
        other.primes = self.primes
        other._cap = self._cap
        other._buf = self._buf[:]
        other._head = self._head
        other._len = self._len
        other._pos = self._pos[:]
        other._gpos = self._gpos[:]
        other._free = self._free[:]
        other._fslot = self._fslot[:]
        return other

    def check_invariants(self) -> None:
        """Cross-check every index against the path; test hook, O(n)."""
        seq = self.ranks()
        assert len(set(seq)) == self._len
        for i, r in enumerate(seq):
            assert self._pos[r] == self._head + i, (r, i)
            assert self._fslot[r] == -1
        onpath = set(seq)
        for r in range(1, self.n + 1):
            if r not in onpath:
                s = self._fslot[r]
                assert s >= 0 and self._free[s] == r, r
        assert len(self._free) == self.n - self._len
        used = {}
        for i in range(self._len - 1):
            g = abs(self.primes[seq[i + 1]] - self.primes[seq[i]])
            assert g % 2 == 0 and 2 <= g <= 2 * self.n - 2
            assert g not in used
            used[g] = i
        for k in range(1, self.n):
            e = self._gpos[k]
            if 2 * k in used:
                assert e == self._head + used[2 * k], (2 * k, e)
            else:
                assert e == -1, (2 * k, e)

    # ------------------------------------------------------------ internals

    def _label(self, i: int) -> int:
        return self.primes[self._buf[self._head + i]]

    def _edge_gap(self, e: int) -> int:
        """Gap at logical edge e (between positions e and e+1)."""
        b = self._buf
        p = self.primes
        i = self._head + e
        return abs(p[b[i + 1]] - p[b[i]])

    def _take_prime(self, r: int) -> None:
        s = self._fslot[r]
        last = self._free[-1]
        self._free[s] = last
        self._fslot[last] = s
        self._free.pop()
        self._fslot[r] = -1

    def _release_prime(self, r: int) -> None:
        self._fslot[r] = len(self._free)
        self._free.append(r)

    def _recenter(self) -> None:
        self._reload(self.ranks())

    def _reload(self, new_ranks) -> None:
        """Replace the path, rebuilding positions and the gap index."""
        b = self._buf
        p = self.primes
        h = self._head
        for i in range(self._len - 1):
            g = abs(p[b[h + i + 1]] - p[b[h + i]])
            self._gpos[g >> 1] = -1
        for i in range(self._len):
            self._pos[b[h + i]] = -1
        self._len = len(new_ranks)
        h = self._head = (self._cap - self._len) // 2
        for i, r in enumerate(new_ranks):
            b[h + i] = r
            self._pos[r] = h + i
        for i in range(self._len - 1):
            g = abs(p[b[h + i + 1]] - p[b[h + i]])
            self._gpos[g >> 1] = h + i

    # ------------------------------------------------------------- rewrites

    def try_extend(self, r: int, side: int) -> bool:
        """Append free prime r at an end when its new gap is free."""
        if not 1 <= r <= self.n or self._fslot[r] < 0:
            return False
        p = self.primes
        if side == RIGHT:
            g = abs(p[r] - self._label(self._len - 1))
        else:
            g = abs(p[r] - self._label(0))
        k = g >> 1
        if k < 1 or k > self.n - 1 or self._gpos[k] >= 0:
            return False
        if side == RIGHT:
            if self._head + self._len >= self._cap:
                self._recenter()
            i = self._head + self._len
            self._buf[i] = r
            self._pos[r] = i
            self._gpos[k] = i - 1
        else:
            if self._head == 0:
                self._recenter()
            self._head -= 1
            i = self._head
            self._buf[i] = r
            self._pos[r] = i
            self._gpos[k] = i
        self._len += 1
        self._take_prime(r)
        return True

    def _can_reverse_prefix(self, u: int) -> bool:
        g = abs(self._label(u) - self._label(0))
        k = g >> 1
        return 1 <= k <= self.n - 1 and self._gpos[k] < 0

    def _can_reverse_suffix(self, u: int) -> bool:
        g = abs(self._label(self._len - 1) - self._label(u - 1))
        k = g >> 1
        return 1 <= k <= self.n - 1 and self._gpos[k] < 0

    def try_reverse_prefix(self, u: int):
        """Reverse positions [0, u) when the new junction gap is free.

        The old connecting gap at cut u is freed; internal gaps survive the
        reversal untouched.
        """
        if not 1 <= u <= self._len - 1:
            return None
        if not self._can_reverse_prefix(u):
            return None
        g = abs(self._label(u) - self._label(0))
        delta = self._edge_gap(u - 1)
        seq = self.ranks()
        self._reload(seq[u - 1 :: -1] + seq[u:])
        return (REVERSE_PREFIX, u, delta, (delta,), (g,), 0, 0, None)

    def try_reverse_suffix(self, u: int):
        """Reverse positions [u, len) when the new junction gap is free."""
        if not 1 <= u <= self._len - 1:
            return None
        if not self._can_reverse_suffix(u):
            return None
        g = abs(self._label(self._len - 1) - self._label(u - 1))
        delta = self._edge_gap(u - 1)
        seq = self.ranks()
        self._reload(seq[:u] + seq[: u - 1 : -1])
        return (REVERSE_SUFFIX, u, delta, (delta,), (g,), 0, 0, None)

    def try_rotate(self, u: int):
        """Swap the halves at cut u, joining the old ends.

        The new junction gap is end-to-end, so it does not depend on u: the
        rotation applies at any cut when that gap is free (the old connecting
        gap is freed), and at exactly the cut carrying it when it is already
        used there (nothing freed, nothing consumed).
        """
        if not 1 <= u <= self._len - 1:
            return None
        g = abs(self._label(self._len - 1) - self._label(0))
        k = g >> 1
        if k < 1 or k > self.n - 1:
            return None
        delta = self._edge_gap(u - 1)
        if self._gpos[k] < 0:
            kind = ROTATE_FREE
            freed = (delta,)
            consumed = (g,)
        elif g == delta:
            kind = ROTATE_NEUTRAL
            freed = ()
            consumed = ()
        else:
            return None
        seq = self.ranks()
        self._reload(seq[u:] + seq[:u])
        return (kind, u, delta, freed, consumed, 0, 0, None)

    def _insert_ok(self, rp: int, p: int, q: int, delta: int) -> bool:
        """Three-way admissibility test for splicing value rp between p and q.

        Either both new gaps are free and distinct, or one is free and the
        other equals the vacated connecting gap.
        """
        g1 = abs(rp - p)
        g2 = abs(q - rp)
        f1 = self.is_gap_free(g1)
        f2 = self.is_gap_free(g2)
        if f1 and f2 and g1 != g2:
            return True
        if f1 and g2 == delta:
            return True
        if f2 and g1 == delta:
            return True
        return False

    def try_insert(self, u: int, r: int, shape: int):
        """Splice free prime r into cut u, optionally reversing one half.

        Shapes: keep both halves (r between them), reverse the prefix (r
        joins its old first element to the suffix), reverse the suffix (r
        joins the prefix to its old last element).
        """
        if not 1 <= u <= self._len - 1:
            return None
        if not 1 <= r <= self.n or self._fslot[r] < 0:
            return None
        rp = self.primes[r]
        delta = self._edge_gap(u - 1)
        if shape == SHAPE_MIDDLE:
            p, q = self._label(u - 1), self._label(u)
            kind = INSERT_MIDDLE
        elif shape == SHAPE_REV_PREFIX:
            p, q = self._label(0), self._label(u)
            kind = INSERT_REV_PREFIX
        elif shape == SHAPE_REV_SUFFIX:
            p, q = self._label(u - 1), self._label(self._len - 1)
            kind = INSERT_REV_SUFFIX
        else:
            return None
        if not self._insert_ok(rp, p, q, delta):
            return None
        g1 = abs(rp - p)
        g2 = abs(q - rp)
        seq = self.ranks()
        if shape == SHAPE_MIDDLE:
            new = seq[:u] + [r] + seq[u:]
        elif shape == SHAPE_REV_PREFIX:
            new = seq[u - 1 :: -1] + [r] + seq[u:]
        else:
            new = seq[:u] + [r] + seq[: u - 1 : -1]
        self._take_prime(r)
        self._reload(new)
        freed = () if delta in (g1, g2) else (delta,)
        consumed = tuple(g for g in (g1, g2) if g != delta)
        return (kind, u, delta, freed, consumed, r, 0, None)

    def try_substitute(self, q_index: int, cut: int, r: int, target: int):
        """Swap free prime r in for the prime at q_index, recombining.

        The path minus that prime is split into segments A (before the cut)
        and B (after it); for an interior position the split is forced at the
        removed prime, for an end position ``cut`` splits the remainder. The
        target (0..11) places r front, middle or back and reverses either
        segment. The rewrite applies when the new junction gaps are pairwise
        distinct, in range, and each either free or just vacated.
        """
        l = self._len
        n = self.n
        if l < 2 or not 0 <= q_index < l or not 0 <= target < 12:
            return None
        if not 1 <= r <= n or self._fslot[r] < 0:
            return None
        if 0 < q_index < l - 1:
            if cut != q_index:
                return None
            a0, a1, b0, b1 = 0, q_index, q_index + 1, l
            removed = [self._edge_gap(q_index - 1), self._edge_gap(q_index)]
            source = SOURCE_INTERIOR
        elif q_index == 0:
            if not 0 <= cut <= l - 1:
                return None
            a0, a1, b0, b1 = 1, 1 + cut, 1 + cut, l
            removed = [self._edge_gap(0)]
            if a1 > a0 and b1 > b0:
                removed.append(self._edge_gap(a1 - 1))
            source = SOURCE_LEFT
        else:
            if not 0 <= cut <= l - 1:
                return None
            a0, a1, b0, b1 = 0, cut, cut, l - 1
            removed = [self._edge_gap(l - 2)]
            if a1 > a0 and b1 > b0:
                removed.append(self._edge_gap(a1 - 1))
            source = SOURCE_RIGHT
        rp = self.primes[r]
        rev1 = (target & 3) >= 2
        rev2 = (target & 1) == 1
        pos_r = target >> 2
        parts = []  # (first, last) labels of the recombined pieces
        if pos_r == 0:
            parts.append((rp, rp))
        if a1 > a0:
            fa, la = self._label(a0), self._label(a1 - 1)
            parts.append((la, fa) if rev1 else (fa, la))
        if pos_r == 1:
            parts.append((rp, rp))
        if b1 > b0:
            fb, lb = self._label(b0), self._label(b1 - 1)
            parts.append((lb, fb) if rev2 else (fb, lb))
        if pos_r == 2:
            parts.append((rp, rp))
        added = []
        for i in range(len(parts) - 1):
            g = abs(parts[i + 1][0] - parts[i][1])
            k = g >> 1
            if k < 1 or k > n - 1:
                return None
            if self._gpos[k] >= 0 and g not in removed:
                return None
            if g in added:
                return None
            added.append(g)
        seq = self.ranks()
        q_rank = seq[q_index]
        seg_a = seq[a0:a1]
        seg_b = seq[b0:b1]
        if rev1:
            seg_a.reverse()
        if rev2:
            seg_b.reverse()
        if pos_r == 0:
            new = [r] + seg_a + seg_b
        elif pos_r == 1:
            new = seg_a + [r] + seg_b
        else:
            new = seg_a + seg_b + [r]
        self._take_prime(r)
        self._release_prime(q_rank)
        self._reload(new)
        freed = tuple(g for g in removed if g not in added)
        consumed = tuple(g for g in added if g not in removed)
        junction = removed[1] if source != SOURCE_INTERIOR and len(removed) > 1 else -1
        return (SUBSTITUTE, cut, junction, freed, consumed, r, q_rank, (source, target))

    def drop_last(self):
        """Remove the path's last prime, freeing it and its gap."""
        if self._len < 2:
            raise ValueError("refusing to drop from a path shorter than 2")
        i = self._head + self._len - 1
        r = self._buf[i]
        g = self._edge_gap(self._len - 2)
        self._gpos[g >> 1] = -1
        self._pos[r] = -1
        self._len -= 1
        self._release_prime(r)
        return (r, g)

    # ------------------------------------------------------- derived moves

    def _rank_of_label(self, v: int) -> int:
        """1-based rank of label v, 0 when not in the pool. Binary search."""
        p = self.primes
        lo, hi = 1, self.n
        while lo <= hi:
            mid = (lo + hi) >> 1
            if p[mid] < v:
                lo = mid + 1
            elif p[mid] > v:
                hi = mid - 1
            else:
                return mid
        return 0

    def followup_insert(self, freed_prime: int, freed_gaps):
        """Deterministic growth scan after a successful rewrite.

        Draws nothing. Phase order: (a) splice the just-freed prime in at any
        cut, (b) for each freed gap d, try primes at distance d from a cut
        boundary, (c) plain end extensions. First success wins.
        """
        if self._len >= self.n:
            return None
        shapes = (SHAPE_MIDDLE, SHAPE_REV_PREFIX, SHAPE_REV_SUFFIX)
        if freed_prime >= 1 and self._fslot[freed_prime] >= 0:
            for u in range(1, self._len):
                for shape in shapes:
                    out = self.try_insert(u, freed_prime, shape)
                    if out is not None:
                        return out
        for d in freed_gaps:
            for u in range(1, self._len):
                left = self._label(u - 1)
                right = self._label(u)
                for s in (left, right):
                    for v in (s - d, s + d):
                        r = self._rank_of_label(v)
                        if r == 0 or self._fslot[r] < 0:
                            continue
                        for shape in shapes:
                            out = self.try_insert(u, r, shape)
                            if out is not None:
                                return out
        for r in sorted(self._free):
            if self.try_extend(r, RIGHT):
                g = self._edge_gap(self._len - 2)
                return (EXTEND_RIGHT, 0, -1, (), (g,), r, 0, None)
            if self.try_extend(r, LEFT):
                g = self._edge_gap(0)
                return (EXTEND_LEFT, 0, -1, (), (g,), r, 0, None)
        return None

    def greedy_pass(self, rng) -> bool:
        """One scan over a shuffled copy of the free list, extending greedily.

        Each free prime is tried at the right end first, then the left.
        Returns whether anything was added. Always consumes exactly
        ``len(free) - 1`` draws (zero when one or no primes are free).
        """
        m = len(self._free)
        if m == 0:
            return False
        order = self._free[:]
        for i in range(m - 1, 0, -1):
            j = rng.below(i + 1)
            order[i], order[j] = order[j], order[i]
        grown = False
        for r in order:
            if self.try_extend(r, RIGHT) or self.try_extend(r, LEFT):
                grown = True
        return grown

    def shuffle_step(self, rng, max_cut_tries: int, max_subst_tries: int):
        """One randomized rewrite attempt plus its follow-up insertion.

        Returns (case, main_outcome, followup_outcome); outcomes are raw
        tuples or None. The neutral rotation skips the follow-up, matching
        its role as a pure reshuffle.
        """
        case = rng.below(3)
        l = self._len
        main = None
        if case == 0:
            if l >= 2:
                for _ in range(max_cut_tries):
                    u = 1 + rng.below(l - 1)
                    ok1 = self._can_reverse_prefix(u)
                    ok2 = self._can_reverse_suffix(u)
                    if ok1 and ok2:
                        if rng.below(2) == 0:
                            main = self.try_reverse_prefix(u)
                        else:
                            main = self.try_reverse_suffix(u)
                    elif ok1:
                        main = self.try_reverse_prefix(u)
                    elif ok2:
                        main = self.try_reverse_suffix(u)
                    if main is not None:
                        break
        elif case == 1:
            if l >= 2:
                g = abs(self._label(l - 1) - self._label(0))
                k = g >> 1
                if 1 <= k <= self.n - 1:
                    if self._gpos[k] < 0:
                        u = 1 + rng.below(l - 1)
                        main = self.try_rotate(u)
                    else:
                        u = self._gpos[k] - self._head + 1
                        main = self.try_rotate(u)
        else:
            if l >= 3 and self._free:
                for _ in range(max_subst_tries):
                    qi = rng.below(l)
                    if 0 < qi < l - 1:
                        cut = qi
                    else:
                        cut = 1 + rng.below(l - 2)
                    r = self._free[rng.below(len(self._free))]
                    t = rng.below(12)
                    main = self.try_substitute(qi, cut, r, t)
                    if main is not None:
                        break
        follow = None
        if main is not None and main[0] != ROTATE_NEUTRAL and self._len < self.n:
            follow = self.followup_insert(main[6], main[3])
        return (case, main, follow)
