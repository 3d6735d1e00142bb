# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Hot-path state and rewrite kernel, compiled edition.

Statement-for-statement twin of ``_kernel_py``; see that module's docstring
for the data layout and the RNG draw contract. tests/test_backends.py holds
the two backends draw-for-draw and state-for-state equal, so any behavioural
edit must land in both modules.
"""

from cpython.mem cimport PyMem_Free, PyMem_Malloc
from libc.stdint cimport int64_t, uint64_t
from libc.string cimport memcpy

cdef extern from *:
    ctypedef unsigned long long uint128 "__uint128_t"

BACKEND = "c"

# mirror _kinds; values are the cross-backend contract
cdef enum:
    EXTEND_LEFT = 0
    EXTEND_RIGHT = 1
    REVERSE_PREFIX = 2
    REVERSE_SUFFIX = 3
    ROTATE_FREE = 4
    ROTATE_NEUTRAL = 5
    INSERT_MIDDLE = 6
    INSERT_REV_PREFIX = 7
    INSERT_REV_SUFFIX = 8
    SUBSTITUTE = 9

cdef enum:
    LEFT = 0
    RIGHT = 1

cdef enum:
    SHAPE_MIDDLE = 0
    SHAPE_REV_PREFIX = 1
    SHAPE_REV_SUFFIX = 2

cdef enum:
    SOURCE_LEFT = 0
    SOURCE_INTERIOR = 1
    SOURCE_RIGHT = 2


cdef class Rng:
    """splitmix64 stream with multiply-shift range reduction.

    ``below(k)`` maps one 64-bit output to [0, k) as (u * k) >> 64, matching
    the pure-Python backend bit for bit.
    """

    cdef uint64_t _state

    def __init__(self, seed):
        self._state = <uint64_t> (seed & 0xFFFFFFFFFFFFFFFF)

    cdef uint64_t _next(self):
        self._state += <uint64_t> 0x9E3779B97F4A7C15
        cdef uint64_t z = self._state
        z = (z ^ (z >> 30)) * <uint64_t> 0xBF58476D1CE4E5B9
        z = (z ^ (z >> 27)) * <uint64_t> 0x94D049BB133111EB
        return z ^ (z >> 31)

    def next_u64(self):
        return self._next()

    cdef Py_ssize_t _below(self, Py_ssize_t k):
        return <Py_ssize_t> ((<uint128> self._next() * <uint128> k) >> 64)

    def below(self, k):
        """Uniform-enough integer in [0, k) from one stream output."""
        return self._below(k)


cdef inline Py_ssize_t draw(object rng, Py_ssize_t k):
    # native stream stays in C; scripted stand-ins go through .below
    if type(rng) is Rng:
        return (<Rng> rng)._below(k)
    return rng.below(k)


cdef class PathState:
    """Mutable partial path over the first n odd primes.

    Same construction surface as the pure-Python twin: n, the pool value
    tuple, and a starting rank (or ``from_ranks`` for a full sequence).
    """

    cdef readonly int n
    cdef readonly tuple primes      # 1-based, index 0 padded with 0
    cdef int _cap
    cdef int _head
    cdef int _len
    cdef int _flen
    cdef int* _buf
    cdef int* _pos
    cdef int* _gpos
    cdef int* _free
    cdef int* _fslot
    cdef int* _tmp
    cdef int64_t* _pv               # prime values, C mirror of ``primes``

    def __cinit__(self, *args, **kwargs):
        self._buf = NULL
        self._pos = NULL
        self._gpos = NULL
        self._free = NULL
        self._fslot = NULL
        self._tmp = NULL
        self._pv = NULL

    def __dealloc__(self):
        PyMem_Free(self._buf)
        PyMem_Free(self._pos)
        PyMem_Free(self._gpos)
        PyMem_Free(self._free)
        PyMem_Free(self._fslot)
        PyMem_Free(self._tmp)
        PyMem_Free(self._pv)

    cdef void _alloc(self, int n) except *:
        cdef int cap = 2 * n + 1
        self._buf = <int*> PyMem_Malloc(cap * sizeof(int))
        self._pos = <int*> PyMem_Malloc((n + 1) * sizeof(int))
        self._gpos = <int*> PyMem_Malloc(n * sizeof(int))
        self._free = <int*> PyMem_Malloc(n * sizeof(int))
        self._fslot = <int*> PyMem_Malloc((n + 1) * sizeof(int))
        self._tmp = <int*> PyMem_Malloc(cap * sizeof(int))
        self._pv = <int64_t*> PyMem_Malloc((n + 1) * sizeof(int64_t))
        if (self._buf == NULL or self._pos == NULL or self._gpos == NULL
                or self._free == NULL or self._fslot == NULL
                or self._tmp == NULL or self._pv == NULL):
            raise MemoryError

    def __init__(self, primes, n, start_rank):
        cdef int cn = n
        cdef int r
        if cn < 2:
            raise ValueError("need a pool of at least two primes")
        if len(primes) != cn:
            raise ValueError("pool size does not match n")
        self.n = cn
        self.primes = (0,) + tuple(primes)
        self._cap = 2 * cn + 1
        self._alloc(cn)
        self._pv[0] = 0
        for r in range(1, cn + 1):
            self._pv[r] = self.primes[r]
        for r in range(cn + 1):
            self._pos[r] = -1
        for r in range(cn):
            self._gpos[r] = -1
        self._flen = 0
        cdef int sr = start_rank
        if sr == 0:
            # blank state for from_ranks
            self._head = cn
            self._len = 0
            for r in range(1, cn + 1):
                self._fslot[r] = self._flen
                self._free[self._flen] = r
                self._flen += 1
            return
        if not 1 <= sr <= cn:
            raise ValueError(f"start rank {sr} outside 1..{cn}")
        self._head = cn
        self._len = 1
        self._buf[self._head] = sr
        self._pos[sr] = self._head
        self._fslot[sr] = -1
        for r in range(1, cn + 1):
            if r != sr:
                self._fslot[r] = self._flen
                self._free[self._flen] = r
                self._flen += 1

    @classmethod
    def from_ranks(cls, primes, n, ranks):
        """Build from an explicit rank sequence, validating admissibility."""
        ranks = list(ranks)
        if not 1 <= len(ranks) <= n:
            raise ValueError("sequence length outside 1..n")
        cdef PathState state = cls(primes, n, 0)
        seen_gap = [False] * n
        seen_rank = [False] * (n + 1)
        cdef Py_ssize_t i
        cdef int r
        cdef int64_t g
        cdef Py_ssize_t k
        for i in range(len(ranks)):
            r = ranks[i]
            if not 1 <= r <= n or seen_rank[r]:
                raise ValueError(f"rank {r} repeated or outside 1..{n}")
            seen_rank[r] = True
            if i > 0:
                g = state._pv[r] - state._pv[<int> ranks[i - 1]]
                if g < 0:
                    g = -g
                k = g >> 1
                if k < 1 or k > n - 1 or seen_gap[k]:
                    raise ValueError(f"gap {g} repeated or out of range")
                seen_gap[k] = True
        for i in range(len(ranks)):
            state._take_prime(<int> ranks[i])
            state._tmp[i] = ranks[i]
        state._reload_tmp(<int> len(ranks))
        return state

    # ---------------------------------------------------------------- views

    @property
    def length(self):
        return self._len

    def ranks(self):
        cdef int i
        return [self._buf[self._head + i] for i in range(self._len)]

    def labels(self):
        cdef int i
        return [self._pv[self._buf[self._head + i]] for i in range(self._len)]

    def label_at(self, i):
        cdef int ci = i
        if not 0 <= ci < self._len:
            raise IndexError(i)
        return self._pv[self._buf[self._head + ci]]

    def gap_at(self, u):
        """Gap across cut u (1-based, between positions u-1 and u)."""
        cdef int cu = u
        if not 1 <= cu <= self._len - 1:
            raise IndexError(u)
        return self._edge_gap(cu - 1)

    def gap_cut(self, g):
        """Cut where even gap g is used, or 0 when free or out of range."""
        cdef int64_t cg = g
        cdef int64_t k = cg >> 1
        if cg & 1 or k < 1 or k > self.n - 1:
            return 0
        cdef int e = self._gpos[k]
        return 0 if e < 0 else e - self._head + 1

    def is_prime_free(self, r):
        cdef Py_ssize_t cr = r
        return 1 <= cr <= self.n and self._fslot[cr] >= 0

    def is_gap_free(self, g):
        return self._gap_free(<int64_t> g)

    def free_prime_ranks(self):
        cdef int i
        return sorted([self._free[i] for i in range(self._flen)])

    def free_gap_values(self):
        cdef int k
        return [2 * k for k in range(1, self.n) if self._gpos[k] < 0]

    def is_elegant(self):
        return self._len == self.n

    def signature(self):
        """Snapshot for state-unchanged assertions, free-list order included."""
        cdef int i
        return (
            tuple(self.ranks()),
            tuple([self._free[i] for i in range(self._flen)]),
            tuple([self._gpos[i] for i in range(self.n)]),
        )

    def clone(self):
        cdef PathState other = PathState.__new__(PathState)
        other.n = self.n
        other.primes = self.primes
        other._cap = self._cap
        other._head = self._head
        other._len = self._len
        other._flen = self._flen
        other._alloc(self.n)
        memcpy(other._buf, self._buf, self._cap * sizeof(int))
        memcpy(other._pos, self._pos, (self.n + 1) * sizeof(int))
        memcpy(other._gpos, self._gpos, self.n * sizeof(int))
        memcpy(other._free, self._free, self.n * sizeof(int))
        memcpy(other._fslot, self._fslot, (self.n + 1) * sizeof(int))
        memcpy(other._pv, self._pv, (self.n + 1) * sizeof(int64_t))
        return other

    def check_invariants(self):
        """Cross-check every index against the path; test hook, O(n)."""
        seq = self.ranks()
        assert len(set(seq)) == self._len
        for i, r in enumerate(seq):
            assert self._pos[<int> r] == self._head + i, (r, i)
            assert self._fslot[<int> r] == -1
        onpath = set(seq)
        for r in range(1, self.n + 1):
            if r not in onpath:
                s = self._fslot[<int> r]
                assert s >= 0 and self._free[<int> s] == r, r
        assert self._flen == self.n - self._len
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

    cdef inline int64_t _label_c(self, int i):
        return self._pv[self._buf[self._head + i]]

    cdef inline int64_t _edge_gap(self, int e):
        cdef int i = self._head + e
        cdef int64_t g = self._pv[self._buf[i + 1]] - self._pv[self._buf[i]]
        return -g if g < 0 else g

    cdef inline bint _gap_free(self, int64_t g):
        cdef int64_t k = g >> 1
        return (not g & 1) and 1 <= k <= self.n - 1 and self._gpos[k] < 0

    cdef void _take_prime(self, int r):
        cdef int s = self._fslot[r]
        cdef int last = self._free[self._flen - 1]
        self._free[s] = last
        self._fslot[last] = s
        self._flen -= 1
        self._fslot[r] = -1

    cdef void _release_prime(self, int r):
        self._fslot[r] = self._flen
        self._free[self._flen] = r
        self._flen += 1

    cdef void _recenter(self):
        cdef int i
        for i in range(self._len):
            self._tmp[i] = self._buf[self._head + i]
        self._reload_tmp(self._len)

    cdef void _reload_tmp(self, int new_len):
        # replace the path with _tmp[:new_len], rebuilding positions and gaps
        cdef int i, h, r
        cdef int64_t g
        h = self._head
        for i in range(self._len - 1):
            g = self._pv[self._buf[h + i + 1]] - self._pv[self._buf[h + i]]
            if g < 0:
                g = -g
            self._gpos[g >> 1] = -1
        for i in range(self._len):
            self._pos[self._buf[h + i]] = -1
        self._len = new_len
        h = self._head = (self._cap - new_len) // 2
        for i in range(new_len):
            r = self._tmp[i]
            self._buf[h + i] = r
            self._pos[r] = h + i
        for i in range(new_len - 1):
            g = self._pv[self._buf[h + i + 1]] - self._pv[self._buf[h + i]]
            if g < 0:
                g = -g
            self._gpos[g >> 1] = h + i

    # ------------------------------------------------------------- rewrites

    cpdef bint try_extend(self, int r, int side):
        """Append free prime r at an end when its new gap is free."""
        if not 1 <= r <= self.n or self._fslot[r] < 0:
            return False
        cdef int64_t g
        if side == RIGHT:
            g = self._pv[r] - self._label_c(self._len - 1)
        else:
            g = self._pv[r] - self._label_c(0)
        if g < 0:
            g = -g
        cdef int64_t k = g >> 1
        if k < 1 or k > self.n - 1 or self._gpos[k] >= 0:
            return False
        cdef int i
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

    cdef bint _can_reverse_prefix(self, int u):
        cdef int64_t g = self._label_c(u) - self._label_c(0)
        if g < 0:
            g = -g
        cdef int64_t k = g >> 1
        return 1 <= k <= self.n - 1 and self._gpos[k] < 0

    cdef bint _can_reverse_suffix(self, int u):
        cdef int64_t g = self._label_c(self._len - 1) - self._label_c(u - 1)
        if g < 0:
            g = -g
        cdef int64_t k = g >> 1
        return 1 <= k <= self.n - 1 and self._gpos[k] < 0

    def try_reverse_prefix(self, u):
        """Reverse positions [0, u) when the new junction gap is free.

        The old connecting gap at cut u is freed; internal gaps survive the
        reversal untouched.
        """
        cdef int cu = u
        if not 1 <= cu <= self._len - 1:
            return None
        if not self._can_reverse_prefix(cu):
            return None
        cdef int64_t g = self._label_c(cu) - self._label_c(0)
        if g < 0:
            g = -g
        cdef int64_t delta = self._edge_gap(cu - 1)
        cdef int i, h
        h = self._head
        for i in range(cu):
            self._tmp[i] = self._buf[h + cu - 1 - i]
        for i in range(cu, self._len):
            self._tmp[i] = self._buf[h + i]
        self._reload_tmp(self._len)
        return (REVERSE_PREFIX, cu, delta, (delta,), (g,), 0, 0, None)

    def try_reverse_suffix(self, u):
        """Reverse positions [u, len) when the new junction gap is free."""
        cdef int cu = u
        if not 1 <= cu <= self._len - 1:
            return None
        if not self._can_reverse_suffix(cu):
            return None
        cdef int64_t g = self._label_c(self._len - 1) - self._label_c(cu - 1)
        if g < 0:
            g = -g
        cdef int64_t delta = self._edge_gap(cu - 1)
        cdef int i, h, l
        h = self._head
        l = self._len
        for i in range(cu):
            self._tmp[i] = self._buf[h + i]
        for i in range(cu, l):
            self._tmp[i] = self._buf[h + l - 1 + cu - i]
        self._reload_tmp(l)
        return (REVERSE_SUFFIX, cu, delta, (delta,), (g,), 0, 0, None)

    def try_rotate(self, u):
        """Swap the halves at cut u, joining the old ends.

        The new junction gap is end-to-end, so it does not depend on u: the
        rotation applies at any cut when that gap is free (the old connecting
        gap is freed), and at exactly the cut carrying it when it is already
        used there (nothing freed, nothing consumed).
        """
        cdef int cu = u
        if not 1 <= cu <= self._len - 1:
            return None
        cdef int64_t g = self._label_c(self._len - 1) - self._label_c(0)
        if g < 0:
            g = -g
        cdef int64_t k = g >> 1
        if k < 1 or k > self.n - 1:
            return None
        cdef int64_t delta = self._edge_gap(cu - 1)
        cdef int kind
        cdef tuple freed, consumed
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
        cdef int i, h, l
        h = self._head
        l = self._len
        for i in range(cu, l):
            self._tmp[i - cu] = self._buf[h + i]
        for i in range(cu):
            self._tmp[l - cu + i] = self._buf[h + i]
        self._reload_tmp(l)
        return (kind, cu, delta, freed, consumed, 0, 0, None)

    cdef bint _insert_ok(self, int64_t rp, int64_t p, int64_t q, int64_t delta):
        # both new gaps free and distinct, or one free and the other == delta
        cdef int64_t g1 = rp - p
        if g1 < 0:
            g1 = -g1
        cdef int64_t g2 = q - rp
        if g2 < 0:
            g2 = -g2
        cdef bint f1 = self._gap_free(g1)
        cdef bint f2 = self._gap_free(g2)
        if f1 and f2 and g1 != g2:
            return True
        if f1 and g2 == delta:
            return True
        if f2 and g1 == delta:
            return True
        return False

    cpdef object try_insert(self, int u, int r, int shape):
        """Splice free prime r into cut u, optionally reversing one half.

        Shapes: keep both halves (r between them), reverse the prefix (r
        joins its old first element to the suffix), reverse the suffix (r
        joins the prefix to its old last element).
        """
        if not 1 <= u <= self._len - 1:
            return None
        if not 1 <= r <= self.n or self._fslot[r] < 0:
            return None
        cdef int64_t rp = self._pv[r]
        cdef int64_t delta = self._edge_gap(u - 1)
        cdef int64_t p, q
        cdef int kind
        if shape == SHAPE_MIDDLE:
            p = self._label_c(u - 1)
            q = self._label_c(u)
            kind = INSERT_MIDDLE
        elif shape == SHAPE_REV_PREFIX:
            p = self._label_c(0)
            q = self._label_c(u)
            kind = INSERT_REV_PREFIX
        elif shape == SHAPE_REV_SUFFIX:
            p = self._label_c(u - 1)
            q = self._label_c(self._len - 1)
            kind = INSERT_REV_SUFFIX
        else:
            return None
        if not self._insert_ok(rp, p, q, delta):
            return None
        cdef int64_t g1 = rp - p
        if g1 < 0:
            g1 = -g1
        cdef int64_t g2 = q - rp
        if g2 < 0:
            g2 = -g2
        cdef int i, h, l
        h = self._head
        l = self._len
        if shape == SHAPE_MIDDLE:
            for i in range(u):
                self._tmp[i] = self._buf[h + i]
            self._tmp[u] = r
            for i in range(u, l):
                self._tmp[i + 1] = self._buf[h + i]
        elif shape == SHAPE_REV_PREFIX:
            for i in range(u):
                self._tmp[i] = self._buf[h + u - 1 - i]
            self._tmp[u] = r
            for i in range(u, l):
                self._tmp[i + 1] = self._buf[h + i]
        else:
            for i in range(u):
                self._tmp[i] = self._buf[h + i]
            self._tmp[u] = r
            for i in range(u, l):
                self._tmp[i + 1] = self._buf[h + l - 1 + u - i]
        self._take_prime(r)
        self._reload_tmp(l + 1)
        cdef tuple freed
        if delta == g1 or delta == g2:
            freed = ()
        else:
            freed = (delta,)
        cdef tuple consumed
        if g1 != delta and g2 != delta:
            consumed = (g1, g2)
        elif g1 != delta:
            consumed = (g1,)
        elif g2 != delta:
            consumed = (g2,)
        else:
            consumed = ()
        return (kind, u, delta, freed, consumed, r, 0, None)

    cpdef object try_substitute(self, int q_index, int cut, int r, int target):
        """Swap free prime r in for the prime at q_index, recombining.

        The path minus that prime is split into segments A (before the cut)
        and B (after it); for an interior position the split is forced at the
        removed prime, for an end position ``cut`` splits the remainder. The
        target (0..11) places r front, middle or back and reverses either
        segment. The rewrite applies when the new junction gaps are pairwise
        distinct, in range, and each either free or just vacated.
        """
        cdef int l = self._len
        cdef int n = self.n
        if l < 2 or not 0 <= q_index < l or not 0 <= target < 12:
            return None
        if not 1 <= r <= n or self._fslot[r] < 0:
            return None
        cdef int a0, a1, b0, b1, source, nremoved
        cdef int64_t removed0, removed1
        removed1 = -1
        nremoved = 1
        if 0 < q_index < l - 1:
            if cut != q_index:
                return None
            a0 = 0
            a1 = q_index
            b0 = q_index + 1
            b1 = l
            removed0 = self._edge_gap(q_index - 1)
            removed1 = self._edge_gap(q_index)
            nremoved = 2
            source = SOURCE_INTERIOR
        elif q_index == 0:
            if not 0 <= cut <= l - 1:
                return None
            a0 = 1
            a1 = 1 + cut
            b0 = 1 + cut
            b1 = l
            removed0 = self._edge_gap(0)
            if a1 > a0 and b1 > b0:
                removed1 = self._edge_gap(a1 - 1)
                nremoved = 2
            source = SOURCE_LEFT
        else:
            if not 0 <= cut <= l - 1:
                return None
            a0 = 0
            a1 = cut
            b0 = cut
            b1 = l - 1
            removed0 = self._edge_gap(l - 2)
            if a1 > a0 and b1 > b0:
                removed1 = self._edge_gap(a1 - 1)
                nremoved = 2
            source = SOURCE_RIGHT
        cdef int64_t rp = self._pv[r]
        cdef bint rev1 = (target & 3) >= 2
        cdef bint rev2 = (target & 1) == 1
        cdef int pos_r = target >> 2
        # (first, last) labels of the recombined pieces, in order
        cdef int64_t pf[3]
        cdef int64_t pl[3]
        cdef int pcount = 0
        cdef int64_t fa, la, fb, lb
        if pos_r == 0:
            pf[pcount] = rp
            pl[pcount] = rp
            pcount += 1
        if a1 > a0:
            fa = self._label_c(a0)
            la = self._label_c(a1 - 1)
            if rev1:
                pf[pcount] = la
                pl[pcount] = fa
            else:
                pf[pcount] = fa
                pl[pcount] = la
            pcount += 1
        if pos_r == 1:
            pf[pcount] = rp
            pl[pcount] = rp
            pcount += 1
        if b1 > b0:
            fb = self._label_c(b0)
            lb = self._label_c(b1 - 1)
            if rev2:
                pf[pcount] = lb
                pl[pcount] = fb
            else:
                pf[pcount] = fb
                pl[pcount] = lb
            pcount += 1
        if pos_r == 2:
            pf[pcount] = rp
            pl[pcount] = rp
            pcount += 1
        cdef int64_t added0, added1
        cdef int nadded = 0
        added0 = added1 = -1
        cdef int i
        cdef int64_t g, k
        for i in range(pcount - 1):
            g = pf[i + 1] - pl[i]
            if g < 0:
                g = -g
            k = g >> 1
            if k < 1 or k > n - 1:
                return None
            if self._gpos[k] >= 0 and g != removed0 and (nremoved < 2 or g != removed1):
                return None
            if nadded > 0 and g == added0:
                return None
            if nadded == 0:
                added0 = g
            else:
                added1 = g
            nadded += 1
        cdef int h = self._head
        cdef int q_rank = self._buf[h + q_index]
        cdef int w = 0
        if pos_r == 0:
            self._tmp[w] = r
            w += 1
        if rev1:
            for i in range(a1 - 1, a0 - 1, -1):
                self._tmp[w] = self._buf[h + i]
                w += 1
        else:
            for i in range(a0, a1):
                self._tmp[w] = self._buf[h + i]
                w += 1
        if pos_r == 1:
            self._tmp[w] = r
            w += 1
        if rev2:
            for i in range(b1 - 1, b0 - 1, -1):
                self._tmp[w] = self._buf[h + i]
                w += 1
        else:
            for i in range(b0, b1):
                self._tmp[w] = self._buf[h + i]
                w += 1
        if pos_r == 2:
            self._tmp[w] = r
            w += 1
        self._take_prime(r)
        self._release_prime(q_rank)
        self._reload_tmp(w)
        # freed keeps removal order, consumed keeps addition order
        freed_list = []
        if removed0 != added0 and (nadded < 2 or removed0 != added1):
            freed_list.append(removed0)
        if nremoved > 1 and removed1 != added0 and (nadded < 2 or removed1 != added1):
            freed_list.append(removed1)
        consumed_list = []
        if nadded > 0 and added0 != removed0 and (nremoved < 2 or added0 != removed1):
            consumed_list.append(added0)
        if nadded > 1 and added1 != removed0 and (nremoved < 2 or added1 != removed1):
            consumed_list.append(added1)
        cdef int64_t junction
        if source != SOURCE_INTERIOR and nremoved > 1:
            junction = removed1
        else:
            junction = -1
        return (SUBSTITUTE, cut, junction, tuple(freed_list), tuple(consumed_list),
                r, q_rank, (source, target))

    def drop_last(self):
        """Remove the path's last prime, freeing it and its gap."""
        if self._len < 2:
            raise ValueError("refusing to drop from a path shorter than 2")
        cdef int i = self._head + self._len - 1
        cdef int r = self._buf[i]
        cdef int64_t g = self._edge_gap(self._len - 2)
        self._gpos[g >> 1] = -1
        self._pos[r] = -1
        self._len -= 1
        self._release_prime(r)
        return (r, g)

    # ------------------------------------------------------- derived moves

    cdef int _rank_of_label(self, int64_t v):
        # 1-based rank of label v, 0 when not in the pool; binary search
        cdef int lo = 1
        cdef int hi = self.n
        cdef int mid
        while lo <= hi:
            mid = (lo + hi) >> 1
            if self._pv[mid] < v:
                lo = mid + 1
            elif self._pv[mid] > v:
                hi = mid - 1
            else:
                return mid
        return 0

    def followup_insert(self, freed_prime, freed_gaps):
        """Deterministic growth scan after a successful rewrite.

        Draws nothing. Phase order: (a) splice the just-freed prime in at any
        cut, (b) for each freed gap d, try primes at distance d from a cut
        boundary, (c) plain end extensions. First success wins.
        """
        return self._followup_insert(freed_prime, freed_gaps)

    cdef object _followup_insert(self, int freed_prime, tuple freed_gaps):
        if self._len >= self.n:
            return None
        cdef int u, shape, r, si, vi
        cdef int64_t d, s, v, left, right, g
        cdef object out
        if freed_prime >= 1 and self._fslot[freed_prime] >= 0:
            for u in range(1, self._len):
                for shape in range(3):
                    out = self.try_insert(u, freed_prime, shape)
                    if out is not None:
                        return out
        for dg in freed_gaps:
            d = dg
            for u in range(1, self._len):
                left = self._label_c(u - 1)
                right = self._label_c(u)
                for si in range(2):
                    s = left if si == 0 else right
                    for vi in range(2):
                        v = s - d if vi == 0 else s + d
                        r = self._rank_of_label(v)
                        if r == 0 or self._fslot[r] < 0:
                            continue
                        for shape in range(3):
                            out = self.try_insert(u, r, shape)
                            if out is not None:
                                return out
        cdef list order = sorted([self._free[u] for u in range(self._flen)])
        for ri in order:
            r = ri
            if self.try_extend(r, RIGHT):
                g = self._edge_gap(self._len - 2)
                return (EXTEND_RIGHT, 0, -1, (), (g,), r, 0, None)
            if self.try_extend(r, LEFT):
                g = self._edge_gap(0)
                return (EXTEND_LEFT, 0, -1, (), (g,), r, 0, None)
        return None

    def greedy_pass(self, rng):
        """One scan over a shuffled copy of the free list, extending greedily.

        Each free prime is tried at the right end first, then the left.
        Returns whether anything was added. Always consumes exactly
        ``len(free) - 1`` draws (zero when one or no primes are free).
        """
        cdef int m = self._flen
        if m == 0:
            return False
        cdef int i, r
        cdef Py_ssize_t j
        for i in range(m):
            self._tmp[i] = self._free[i]
        for i in range(m - 1, 0, -1):
            j = draw(rng, i + 1)
            r = self._tmp[i]
            self._tmp[i] = self._tmp[j]
            self._tmp[j] = r
        # the shuffled order survives in a Python list: try_extend recenters
        # through _tmp on buffer overflow, which would clobber it
        cdef list order = [self._tmp[i] for i in range(m)]
        cdef bint grown = False
        for ri in order:
            r = ri
            if self.try_extend(r, RIGHT) or self.try_extend(r, LEFT):
                grown = True
        return grown

    def shuffle_step(self, rng, max_cut_tries, max_subst_tries):
        """One randomized rewrite attempt plus its follow-up insertion.

        Returns (case, main_outcome, followup_outcome); outcomes are raw
        tuples or None. The neutral rotation skips the follow-up, matching
        its role as a pure reshuffle.
        """
        cdef Py_ssize_t case = draw(rng, 3)
        cdef int l = self._len
        cdef object main = None
        cdef int attempt, u, cut, qi, r, t
        cdef int64_t g, k
        cdef bint ok1, ok2
        cdef int mct = max_cut_tries
        cdef int mst = max_subst_tries
        if case == 0:
            if l >= 2:
                for attempt in range(mct):
                    u = 1 + <int> draw(rng, l - 1)
                    ok1 = self._can_reverse_prefix(u)
                    ok2 = self._can_reverse_suffix(u)
                    if ok1 and ok2:
                        if draw(rng, 2) == 0:
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
                g = self._label_c(l - 1) - self._label_c(0)
                if g < 0:
                    g = -g
                k = g >> 1
                if 1 <= k <= self.n - 1:
                    if self._gpos[k] < 0:
                        u = 1 + <int> draw(rng, l - 1)
                        main = self.try_rotate(u)
                    else:
                        u = self._gpos[k] - self._head + 1
                        main = self.try_rotate(u)
        else:
            if l >= 3 and self._flen > 0:
                for attempt in range(mst):
                    qi = <int> draw(rng, l)
                    if 0 < qi < l - 1:
                        cut = qi
                    else:
                        cut = 1 + <int> draw(rng, l - 2)
                    r = self._free[draw(rng, self._flen)]
                    t = <int> draw(rng, 12)
                    main = self.try_substitute(qi, cut, r, t)
                    if main is not None:
                        break
        cdef object follow = None
        if main is not None and <int> main[0] != ROTATE_NEUTRAL and self._len < self.n:
            follow = self._followup_insert(<int> main[6], <tuple> main[3])
        return (case, main, follow)
