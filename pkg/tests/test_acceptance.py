"""Top-level acceptance gate: eight numbered criteria, one test each.

Every test records PASS or FAIL with the summary hook in conftest.py, so a
full run ends with one line per criterion. Failures still fail pytest the
usual way; the recorded block is the at-a-glance verdict.
"""

import json
import os
import time
from collections import Counter
from contextlib import contextmanager

import conftest
import pytest

from elegantprimes.backend import Rng
from elegantprimes.graphs import (
    StochasticConfig,
    complete,
    petersen,
    regular_caterpillar,
    star_elegant_labeling,
    stochastic_graph_search,
    verify_graph_labeling,
)
from elegantprimes.oracle import (
    count_elegant_gap_first,
    elegant_paths,
    enumerate_admissible,
)
from elegantprimes.pathstate import check_sequence, from_labels, verify_sequence
from elegantprimes.primes import build_pool
from elegantprimes.search import SearchConfig, algorithm1, algorithm2, shuffle_step
from elegantprimes.transforms import (
    INSERT_SHAPES,
    followup_insert,
    try_insert,
    try_reverse_prefix,
    try_reverse_suffix,
    try_rotate,
    try_substitute,
)

KNOWN_PATHS = {
    2: [3, 5],
    3: [5, 3, 7],
    4: [11, 5, 3, 7],
    5: [13, 7, 11, 3, 5],
    6: [7, 5, 11, 3, 13, 17],
    7: [13, 17, 7, 19, 11, 5, 3],
    8: [13, 3, 7, 5, 19, 11, 23, 17],
    9: [11, 13, 5, 19, 29, 17, 23, 7, 3],
    10: [19, 31, 17, 23, 13, 29, 11, 3, 7, 5],
}


@contextmanager
def criterion(num: int, label: str):
    try:
        yield
    except BaseException:
        conftest.record_criterion(num, label, "FAIL")
        raise
    conftest.record_criterion(num, label, "PASS")


class ScriptedRng:
    """Replays a fixed draw list; any mismatch or leftover is an error."""

    def __init__(self, values):
        self.values = list(values)

    def below(self, k):
        v = self.values.pop(0)
        assert 0 <= v < k, (v, k)
        return v


def free_values(state, pool):
    return {pool.value(r) for r in state.free_prime_ranks()}


def report_key(report) -> str:
    doc = report.to_dict()
    doc.pop("elapsed")
    return json.dumps(doc, sort_keys=True)


# --------------------------------------------------------------- criterion 1


def test_criterion_1_path_catalogue():
    with criterion(1, "known paths and perturbations"):
        for n, labels in KNOWN_PATHS.items():
            assert verify_sequence(labels, n), (n, labels)
            pool = build_pool(n)
            # every single-label rewrite must break the labeling
            alternates = list(pool.values) + [2, 9, pool.max_value + 2]
            for i in range(n):
                for v in alternates:
                    if v == labels[i]:
                        continue
                    mutated = labels[:i] + [v] + labels[i + 1 :]
                    assert not verify_sequence(mutated, n), (n, i, v)


# --------------------------------------------------------------- criterion 2


def test_criterion_2_scripted_trace_replay(pool11):
    with criterion(2, "scripted shuffle trace"):
        state = from_labels([5, 7, 3, 19, 31, 11, 29, 37, 23, 17], 11, pool11)
        assert free_values(state, pool11) == {13}
        assert set(state.free_gap_values()) == {10}

        # reversal: suffix behind cut 2 flips, consuming the free gap 10
        out = shuffle_step(state, ScriptedRng([0, 1]))
        assert out.applied is not None and out.applied.kind == "reverse_suffix"
        assert state.labels() == [5, 7, 17, 23, 37, 29, 11, 31, 19, 3]
        assert set(state.free_gap_values()) == {4}
        assert free_values(state, pool11) == {13}

        # substitution: free 13 replaces the right-end 3, suffix reversed
        out = shuffle_step(state, ScriptedRng([2, 9, 2, 0, 5]))
        assert out.applied is not None and out.applied.kind == "substitute"
        assert state.labels() == [5, 7, 17, 13, 19, 31, 11, 29, 37, 23]
        assert free_values(state, pool11) == {3}
        assert set(state.free_gap_values()) == {16}

        # rotation: end-to-end gap 18 already used, so the cut is forced
        out = shuffle_step(state, ScriptedRng([1]))
        assert out.applied is not None and out.applied.kind == "rotate_neutral"
        assert state.labels() == [29, 37, 23, 5, 7, 17, 13, 19, 31, 11]
        assert free_values(state, pool11) == {3}
        assert set(state.free_gap_values()) == {16}

        # the reversal alone, replayed on a clone: gap 16 in, gap 4 out
        probe = state.clone()
        mid = try_reverse_prefix(probe, 6)
        assert mid is not None
        assert probe.labels() == [17, 7, 5, 23, 37, 29, 13, 19, 31, 11]
        assert set(probe.free_gap_values()) == {4}

        # full step: same reversal, then the follow-up places 3 beside 5
        out = shuffle_step(state, ScriptedRng([0, 5]))
        assert out.applied is not None and out.applied.kind == "reverse_prefix"
        assert out.applied.freed_gaps == (4,)
        assert out.applied.consumed_gaps == (16,)
        assert out.followup is not None and out.followup.kind == "insert_middle"
        assert out.followup.inserted_prime == pool11.rank(3)
        assert state.labels() == [17, 7, 3, 5, 23, 37, 29, 13, 19, 31, 11]
        assert state.is_elegant()
        assert verify_sequence(state.labels(), 11, pool11)


# --------------------------------------------------------------- criterion 3


def test_criterion_3_reverse_then_insert_chain():
    with criterion(3, "reversal-insertion chain"):
        pool = build_pool(7)
        state = from_labels([7, 19, 17, 11, 3, 13], 7, pool)
        assert set(state.free_gap_values()) == {4}
        assert free_values(state, pool) == {5}

        out = try_reverse_prefix(state, 3)
        assert out is not None
        assert state.labels() == [17, 19, 7, 11, 3, 13]
        assert set(state.free_gap_values()) == {6}

        follow = followup_insert(state, out)
        assert follow is not None
        assert follow.inserted_prime == pool.rank(5)
        assert state.labels() == [17, 19, 7, 11, 5, 13, 3]
        assert state.is_elegant()


# --------------------------------------------------------------- criterion 4


def _gap_multiset(labels) -> Counter:
    return Counter(abs(a - b) for a, b in zip(labels, labels[1:]))


def _sweep_rewrites(base, n, pool) -> tuple[int, int]:
    """Attempt every rewrite on one path; re-verify each accepted outcome.

    The outcome's freed/consumed ledger must equal the difference of the
    before/after gap multisets recomputed from raw labels.
    """
    l = base.length
    before_labels = base.labels()
    before = _gap_multiset(before_labels)
    free = base.free_prime_ranks()
    work = base.clone()
    attempted = accepted = 0

    def check(out):
        nonlocal work, accepted
        if out is None:
            return
        accepted += 1
        labels = work.labels()
        res = check_sequence(labels, n, pool)
        assert res.ok, (before_labels, out, labels, res)
        after = _gap_multiset(labels)
        assert sorted(out.freed_gaps) == sorted((before - after).elements()), (
            before_labels,
            out,
            labels,
        )
        assert sorted(out.consumed_gaps) == sorted((after - before).elements()), (
            before_labels,
            out,
            labels,
        )
        work = base.clone()

    for u in range(1, l):
        attempted += 3
        check(try_reverse_prefix(work, u))
        check(try_reverse_suffix(work, u))
        check(try_rotate(work, u))
    for r in free:
        for u in range(l + 1):
            for shape in INSERT_SHAPES:
                attempted += 1
                check(try_insert(work, u, r, shape))
    for qi in range(l):
        cuts = range(1, l - 1) if qi in (0, l - 1) else (qi,)
        for cut in cuts:
            for r in free:
                for target in range(12):
                    attempted += 1
                    check(try_substitute(work, qi, r, target, cut=cut))
    return attempted, accepted


def test_criterion_4_exhaustive_rewrite_soundness():
    with criterion(4, "exhaustive rewrite soundness"):
        attempted = accepted = paths = 0
        for n in range(2, 9):
            pool = build_pool(n)
            for base in enumerate_admissible(n, pool=pool):
                paths += 1
                a, s = _sweep_rewrites(base, n, pool)
                attempted += a
                accepted += s
        # sweep totals are pinned so a silently shrunken space cannot pass
        assert paths == 6663
        assert attempted == 1966182
        assert accepted == 568558


# --------------------------------------------------------------- criterion 5


def test_criterion_5_oracle_equivalence(oracle_counts):
    with criterion(5, "enumeration strategies agree"):
        for n in range(2, 10):
            paths = list(elegant_paths(n))
            assert count_elegant_gap_first(n) == len(paths)
            assert oracle_counts["elegant"][str(n)]["total"] == len(paths)
            elegant_set = {tuple(p) for p in paths}
            hits = 0
            for seed in range(20):
                report = algorithm1(SearchConfig(n=n, seed=seed))
                if report.found:
                    hits += 1
                    assert tuple(report.path) in elegant_set, (n, seed)
            assert hits > 0, n


# --------------------------------------------------------------- criterion 6


def test_criterion_6_search_coverage(algo1_seeds):
    with criterion(6, "search coverage to n=1000"):
        t0 = time.perf_counter()
        for n in range(2, 201):
            report = algorithm1(SearchConfig(n=n, seed=algo1_seeds[n]))
            assert report.found, (n, algo1_seeds[n])
            assert verify_sequence(report.path, n)
        sweep_elapsed = time.perf_counter() - t0
        assert sweep_elapsed < 60.0, sweep_elapsed

        t1 = time.perf_counter()
        report = None
        for seed in (0, 1, 2):
            report = algorithm2(
                SearchConfig(n=1000, seed=seed, tail_delta=5, time_limit=199.0)
            )
            if report.found:
                break
        large_elapsed = time.perf_counter() - t1
        assert report is not None and report.found
        assert verify_sequence(report.path, 1000)
        assert large_elapsed < 600.0, large_elapsed


LONG_RUNS = os.environ.get("ELEGANTPRIMES_LONG") == "1"


@pytest.mark.slow
@pytest.mark.skipif(not LONG_RUNS, reason="set ELEGANTPRIMES_LONG=1 to enable")
def test_long_run_n3500():
    """Optional extra-large search; informational, not part of the gate."""
    report = None
    for seed in (0, 1, 2):
        report = algorithm2(
            SearchConfig(n=3500, seed=seed, tail_delta=5, time_limit=3600.0)
        )
        if report.found:
            break
    assert report is not None and report.found
    assert verify_sequence(report.path, 3500)


# --------------------------------------------------------------- criterion 7


def test_criterion_7_graph_catalogue():
    with criterion(7, "graph catalogue claims"):
        for k, labels in {2: [3, 5], 3: [5, 7, 11], 4: [7, 11, 17, 19]}.items():
            assert verify_graph_labeling(complete(k), labels), k

        found = {n for n in range(2, 13) if star_elegant_labeling(n) is not None}
        assert found == {2, 3, 5, 6, 9}

        labels = stochastic_graph_search(
            petersen(), StochasticConfig(seed=0, restarts=40, iters=20_000)
        )
        assert labels is not None
        assert verify_graph_labeling(petersen(), labels)

    # caterpillar outcomes are reported, not gated: the climber's failures
    # certify nothing, so only the soundness of found labelings is asserted
    budget = StochasticConfig(seed=0, restarts=30, iters=20_000)
    report = []
    for spine in (3, 4, 5, 6):
        g = regular_caterpillar(spine)
        labeling = stochastic_graph_search(g, budget)
        if labeling is not None:
            assert verify_graph_labeling(g, labeling)
        report.append(f"{g.name}={'found' if labeling else 'budget-exhausted'}")
    print("caterpillar search report:", ", ".join(report))


# --------------------------------------------------------------- criterion 8


def test_criterion_8_run_determinism():
    with criterion(8, "seeded runs reproduce"):
        for config in (
            SearchConfig(n=60, seed=11),
            SearchConfig(n=120, seed=7),
            SearchConfig(n=30, seed=13),  # budget exhaustion path
        ):
            first, second = algorithm1(config), algorithm1(config)
            assert report_key(first) == report_key(second)
            assert first.transform_counts == second.transform_counts

        config = SearchConfig(n=30, seed=2, max_restarts=50)
        first, second = algorithm2(config), algorithm2(config)
        assert report_key(first) == report_key(second)

        # the raw stream itself replays
        a, b = Rng(321), Rng(321)
        assert [a.next_u64() for _ in range(64)] == [b.next_u64() for _ in range(64)]
