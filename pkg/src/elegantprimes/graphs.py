"""Elegant labelings of small graphs: verifier plus three searchers.

A graph with r edges is elegantly labeled when distinct odd primes from the
first r+1 are assigned to vertices and the edge absolute differences hit
{2, 4, ..., 2r} exactly. The verifier re-proves primality by trial division.

Searchers:

- ``exhaustive_graph_search``: backtracking over vertex assignments with
  duplicate-gap pruning; certifies absence when it exhausts the space, and
  reports hitting its node limit distinctly.
- ``star_elegant_labeling``: specialized complete search for stars (pick the
  center, then match each gap to a leaf, largest gap first).
- ``stochastic_graph_search``: restart hill-climbing over injective
  assignments (pair swaps and free-label replacements), minimizing the
  number of missing edge-gap values; finding nothing certifies nothing.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Sequence

from .backend import Rng
from .primes import PrimePool, build_pool, is_prime

__all__ = [
    "GraphInstance",
    "GraphCheck",
    "GraphSearchResult",
    "StochasticConfig",
    "path_graph",
    "star",
    "complete",
    "petersen",
    "regular_caterpillar",
    "graph_by_name",
    "parse_edge_list",
    "format_edge_list",
    "verify_graph_labeling",
    "exhaustive_graph_search",
    "star_elegant_labeling",
    "stochastic_graph_search",
]


@dataclass(frozen=True)
class GraphInstance:
    """Simple undirected graph; vertices are 0-based, edges sorted pairs."""

    vertex_count: int
    edges: tuple[tuple[int, int], ...]
    name: str = ""

    def __post_init__(self):
        seen = set()
        for u, v in self.edges:
            if not (0 <= u < self.vertex_count and 0 <= v < self.vertex_count):
                raise ValueError(f"edge ({u},{v}) outside vertex range")
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            if u > v:
                raise ValueError(f"edge ({u},{v}) not sorted")
            if (u, v) in seen:
                raise ValueError(f"duplicate edge ({u},{v})")
            seen.add((u, v))

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def degrees(self) -> list[int]:
        deg = [0] * self.vertex_count
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg

    def incident(self) -> list[list[tuple[int, int]]]:
        """Per vertex: list of (edge index, other endpoint)."""
        inc: list[list[tuple[int, int]]] = [[] for _ in range(self.vertex_count)]
        for e, (u, v) in enumerate(self.edges):
            inc[u].append((e, v))
            inc[v].append((e, u))
        return inc


def _mk(n: int, pairs: Iterable[tuple[int, int]], name: str) -> GraphInstance:
    edges = tuple(sorted((u, v) if u < v else (v, u) for u, v in pairs))
    return GraphInstance(n, edges, name)


def path_graph(n: int) -> GraphInstance:
    if n < 2:
        raise ValueError("path needs at least 2 vertices")
    return _mk(n, [(i, i + 1) for i in range(n - 1)], f"path:{n}")


def star(n: int) -> GraphInstance:
    """Star S_n: one center (vertex 0) joined to n-1 leaves."""
    if n < 2:
        raise ValueError("star needs at least 2 vertices")
    return _mk(n, [(0, i) for i in range(1, n)], f"star:{n}")


def complete(k: int) -> GraphInstance:
    if k < 2:
        raise ValueError("complete graph needs at least 2 vertices")
    return _mk(k, [(i, j) for i in range(k) for j in range(i + 1, k)], f"complete:{k}")


def petersen() -> GraphInstance:
    """Outer 5-cycle, spokes, inner pentagram; 10 vertices, 15 edges."""
    pairs = []
    for i in range(5):
        pairs.append((i, (i + 1) % 5))
        pairs.append((i, i + 5))
        pairs.append((i + 5, 5 + (i + 2) % 5))
    return _mk(10, pairs, "petersen")


def regular_caterpillar(spine: int) -> GraphInstance:
    """Caterpillar whose spine vertices all have degree 3.

    ``spine`` vertices 0..spine-1 in a path; each end grows two leaves, each
    interior vertex one, so there are spine+2 leaves and 2*spine+1 edges.
    """
    if spine < 2:
        raise ValueError("caterpillar spine needs at least 2 vertices")
    pairs = [(i, i + 1) for i in range(spine - 1)]
    nxt = spine
    for v in range(spine):
        want = 3 - (2 if 0 < v < spine - 1 else 1)
        for _ in range(want):
            pairs.append((v, nxt))
            nxt += 1
    return _mk(nxt, pairs, f"caterpillar:{spine}")


def graph_by_name(spec: str) -> GraphInstance:
    """Build a named graph: petersen, path:N, star:N, complete:K, caterpillar:N."""
    kind, _, arg = spec.partition(":")
    kind = kind.strip().lower()
    if kind == "petersen":
        if arg:
            raise ValueError("petersen takes no parameter")
        return petersen()
    builders = {
        "path": path_graph,
        "star": star,
        "complete": complete,
        "caterpillar": regular_caterpillar,
    }
    if kind not in builders:
        raise ValueError(f"unknown graph {spec!r}")
    if not arg:
        raise ValueError(f"{kind} needs a size, e.g. {kind}:5")
    return builders[kind](int(arg))


def parse_edge_list(text: str, name: str = "edge-list") -> GraphInstance:
    """One 'u v' pair per line, 0-based; blanks and #-comments skipped."""
    pairs = []
    top = -1
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"line {lineno}: expected 'u v', got {line!r}")
        u, v = int(parts[0]), int(parts[1])
        pairs.append((u, v))
        top = max(top, u, v)
    if not pairs:
        raise ValueError("edge list holds no edges")
    return _mk(top + 1, pairs, name)


def format_edge_list(g: GraphInstance) -> str:
    return "\n".join(f"{u} {v}" for u, v in g.edges) + "\n"


# ------------------------------------------------------------------ checking

@dataclass(frozen=True)
class GraphCheck:
    """Labeling verdict; ``detail`` points at the offending vertex or edge."""

    ok: bool
    reason: str = "ok"
    detail: Optional[int] = None

    def __bool__(self) -> bool:
        return self.ok


def _as_label_list(g: GraphInstance, labeling) -> Optional[list[int]]:
    if isinstance(labeling, Mapping):
        try:
            return [labeling[v] for v in range(g.vertex_count)]
        except KeyError:
            return None
    labels = list(labeling)
    if len(labels) != g.vertex_count:
        return None
    return labels


def verify_graph_labeling(g: GraphInstance, labeling) -> GraphCheck:
    """Full re-check of an elegant labeling claim.

    ``labeling`` is a vertex->prime map or a list indexed by vertex. Labels
    must be distinct odd primes among the first edge_count+1; edge
    differences must cover {2, 4, ..., 2*edge_count} exactly.
    """
    labels = _as_label_list(g, labeling)
    if labels is None:
        return GraphCheck(False, "label_count", None)
    r = g.edge_count
    pool = build_pool(r + 1)
    top = pool.max_value
    seen: set[int] = set()
    for v, lab in enumerate(labels):
        if lab == 2 or not is_prime(lab):
            return GraphCheck(False, "non_prime", v)
        if lab > top:
            return GraphCheck(False, "out_of_pool", v)
        if lab in seen:
            return GraphCheck(False, "duplicate_prime", v)
        seen.add(lab)
    gaps: set[int] = set()
    for e, (u, v) in enumerate(g.edges):
        d = abs(labels[u] - labels[v])
        if d < 2 or d > 2 * r:
            return GraphCheck(False, "gap_out_of_range", e)
        if d in gaps:
            return GraphCheck(False, "duplicate_gap", e)
        gaps.add(d)
    return GraphCheck(True)


# ---------------------------------------------------------------- exhaustive

@dataclass(frozen=True)
class GraphSearchResult:
    """status: found | none | limit. ``none`` certifies absence."""

    status: str
    labeling: Optional[list[int]]
    nodes: int


def _search_order(g: GraphInstance) -> list[int]:
    """Most-constrained-first static order: each next vertex maximizes
    (placed neighbors, degree)."""
    deg = g.degrees()
    inc = g.incident()
    placed: list[int] = []
    in_placed = [False] * g.vertex_count
    while len(placed) < g.vertex_count:
        best, best_key = -1, (-1, -1)
        for v in range(g.vertex_count):
            if in_placed[v]:
                continue
            k = (sum(1 for _, w in inc[v] if in_placed[w]), deg[v])
            if k > best_key:
                best, best_key = v, k
        placed.append(best)
        in_placed[best] = True
    return placed


def exhaustive_graph_search(g: GraphInstance, limit: int = 5_000_000) -> GraphSearchResult:
    """Backtracking over labelings with duplicate-gap pruning.

    Counts every candidate assignment examined; past ``limit`` the search
    stops with status "limit", which certifies nothing.
    """
    r = g.edge_count
    pool = build_pool(r + 1)
    vals = pool.values
    order = _search_order(g)
    inc = g.incident()
    pos_in_order = {v: i for i, v in enumerate(order)}
    # neighbors of order[d] already placed when depth d is reached
    back_nb = [
        [w for _, w in inc[v] if pos_in_order[w] < d] for d, v in enumerate(order)
    ]
    labels = [0] * g.vertex_count
    used_prime = [False] * len(vals)
    used_gap = [False] * (2 * r + 1)
    nodes = 0
    nv = g.vertex_count

    def rec(d: int) -> Optional[bool]:
        """True found, False exhausted, None limit tripped."""
        nonlocal nodes
        if d == nv:
            return True
        v = order[d]
        for i, cand in enumerate(vals):
            if used_prime[i]:
                continue
            nodes += 1
            if nodes > limit:
                return None
            new_gaps = []
            ok = True
            for w in back_nb[d]:
                gap = abs(cand - labels[w])
                if gap < 2 or gap > 2 * r or used_gap[gap] or gap in new_gaps:
                    ok = False
                    break
                new_gaps.append(gap)
            if not ok:
                continue
            labels[v] = cand
            used_prime[i] = True
            for gap in new_gaps:
                used_gap[gap] = True
            sub = rec(d + 1)
            if sub:
                return True
            used_prime[i] = False
            for gap in new_gaps:
                used_gap[gap] = False
            if sub is None:
                return None
        return False

    verdict = rec(0)
    if verdict:
        assert verify_graph_labeling(g, labels)
        return GraphSearchResult("found", labels[:], nodes)
    if verdict is None:
        return GraphSearchResult("limit", None, nodes)
    return GraphSearchResult("none", None, nodes)


def star_elegant_labeling(n: int) -> Optional[list[int]]:
    """Complete search for an elegant star on n vertices.

    Fix the center c; every gap 2..2(n-1) must reach a distinct leaf at
    c-gap or c+gap inside the pool. Largest gaps first, since they have the
    fewest placements. None certifies no elegant labeling exists.
    """
    if n < 2:
        raise ValueError("star needs at least 2 vertices")
    pool = build_pool(n)
    in_pool = set(pool.values)
    gaps = [2 * k for k in range(n - 1, 0, -1)]

    def rec(c: int, gi: int, used: set[int], leaves: list[int]) -> bool:
        if gi == len(gaps):
            return True
        for cand in (c + gaps[gi], c - gaps[gi]):
            if cand in in_pool and cand not in used:
                used.add(cand)
                leaves.append(cand)
                if rec(c, gi + 1, used, leaves):
                    return True
                used.remove(cand)
                leaves.pop()
        return False

    for c in pool.values:
        leaves: list[int] = []
        if rec(c, 0, {c}, leaves):
            labels = [c] + leaves
            assert verify_graph_labeling(star(n), labels)
            return labels
    return None


# ---------------------------------------------------------------- stochastic

@dataclass(frozen=True)
class StochasticConfig:
    """Budget for the hill climber; defaults suit graphs up to ~60 edges."""

    seed: int = 0
    restarts: int = 60
    iters: int = 30_000
    stall_limit: int = 3_000


def stochastic_graph_search(
    g: GraphInstance, config: StochasticConfig | None = None
) -> Optional[list[int]]:
    """Restart hill-climbing toward zero missing edge-gap values.

    Moves: swap two vertex labels, or replace one with an unused pool prime.
    Strictly worsening moves are rejected, sideways moves accepted; a stretch
    of ``stall_limit`` iterations without strict improvement restarts. The
    returned labeling (if any) passes verify_graph_labeling; None only means
    the budget ran out.
    """
    if config is None:
        config = StochasticConfig()
    r = g.edge_count
    nv = g.vertex_count
    pool = build_pool(r + 1)
    vals = pool.values
    pool_size = len(vals)
    edges = g.edges
    inc = g.incident()
    incident_edges = [[e for e, _ in inc[v]] for v in range(nv)]
    rng = Rng(config.seed)
    max_diff = vals[-1] - vals[0]

    for _ in range(config.restarts):
        # random injective assignment: partial Fisher-Yates over pool indices
        idx = list(range(pool_size))
        for i in range(nv):
            j = i + rng.below(pool_size - i)
            idx[i], idx[j] = idx[j], idx[i]
        assign = idx[:nv]  # pool index per vertex
        spare = idx[nv:]  # unused pool indices
        labels = [vals[i] for i in assign]
        count = [0] * (max_diff + 1)
        missing = r
        for u, v in edges:
            d = abs(labels[u] - labels[v])
            if d <= 2 * r and count[d] == 0:
                missing -= 1
            count[d] += 1

        def diff_of(e: int) -> int:
            u, v = edges[e]
            return abs(labels[u] - labels[v])

        def shift(touched: list[int], old: list[int]) -> int:
            """Swap old edge diffs for current ones; returns missing delta."""
            dm = 0
            for d in old:
                count[d] -= 1
                if d <= 2 * r and count[d] == 0:
                    dm += 1
            for e in touched:
                d = diff_of(e)
                if d <= 2 * r and count[d] == 0:
                    dm -= 1
                count[d] += 1
            return dm

        stall = 0
        it = 0
        while it < config.iters and missing > 0 and stall < config.stall_limit:
            it += 1
            if spare and rng.below(2) == 1:
                v = rng.below(nv)
                s = rng.below(len(spare))
                touched = incident_edges[v]
                old = [diff_of(e) for e in touched]
                av, sp = assign[v], spare[s]
                labels[v] = vals[sp]
                delta = shift(touched, old)
                if delta <= 0:
                    assign[v], spare[s] = sp, av
                    missing += delta
                    stall = 0 if delta < 0 else stall + 1
                else:
                    rejected = [diff_of(e) for e in touched]
                    labels[v] = vals[av]
                    shift(touched, rejected)
                    stall += 1
            else:
                a = rng.below(nv)
                b = rng.below(nv - 1)
                if b >= a:
                    b += 1
                touched = list(incident_edges[a])
                for e in incident_edges[b]:
                    if e not in touched:
                        touched.append(e)
                old = [diff_of(e) for e in touched]
                labels[a], labels[b] = labels[b], labels[a]
                delta = shift(touched, old)
                if delta <= 0:
                    assign[a], assign[b] = assign[b], assign[a]
                    missing += delta
                    stall = 0 if delta < 0 else stall + 1
                else:
                    rejected = [diff_of(e) for e in touched]
                    labels[a], labels[b] = labels[b], labels[a]
                    shift(touched, rejected)
                    stall += 1
        if missing == 0:
            check = verify_graph_labeling(g, labels)
            assert check, check
            return labels
    return None
