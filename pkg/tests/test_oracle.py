"""Exhaustive enumeration: strategy agreement and pinned regression counts.

The two enumerators walk different trees (prime placements vs gap choices),
so agreement between them is the package's strongest anti-bug evidence. The
pinned counts in tests/data/oracle_counts.json come from
scripts/regen_fixtures.py.
"""

import pytest

from elegantprimes import oracle
from elegantprimes.oracle import (
    count_admissible,
    count_elegant_gap_first,
    elegant_paths,
    enumerate_admissible,
    enumerate_elegant,
)
from elegantprimes.pathstate import is_elegant_sequence, verify_sequence
from elegantprimes.primes import build_pool


def test_n2_unique_path():
    res = enumerate_elegant(2, sample_cap=4)
    assert res.total_elegant == 2
    assert res.distinct_up_to_reversal == 1
    assert set(res.sample_paths) == {(3, 5), (5, 3)}


def test_total_is_twice_distinct():
    for n in range(2, 9):
        res = enumerate_elegant(n)
        assert res.total_elegant == 2 * res.distinct_up_to_reversal


@pytest.mark.parametrize("n", range(2, 10))
def test_strategies_agree(n):
    assert enumerate_elegant(n).total_elegant == count_elegant_gap_first(n)


def test_counts_match_pinned_fixture(oracle_counts):
    for n_str, want in oracle_counts["elegant"].items():
        n = int(n_str)
        res = enumerate_elegant(n, allow_large=True)
        assert res.total_elegant == want["total"], n
        assert res.distinct_up_to_reversal == want["distinct"], n


def test_admissible_counts_match_pinned_fixture(oracle_counts):
    for n_str, want in oracle_counts["admissible_all_lengths"].items():
        assert count_admissible(int(n_str)) == want, n_str


def test_every_enumerated_path_verifies():
    n = 7
    pool = build_pool(n)
    count = 0
    for labels in elegant_paths(n, pool):
        assert is_elegant_sequence(labels, n, pool)
        count += 1
    assert count == enumerate_elegant(n).total_elegant


def test_known_n5_path_enumerated():
    paths = {tuple(p) for p in elegant_paths(5)}
    assert (13, 7, 11, 3, 5) in paths
    assert (5, 3, 11, 7, 13) in paths  # reversal counted separately


def test_admissible_stream_yields_valid_states():
    n = 6
    pool = build_pool(n)
    lengths = {}
    for state in enumerate_admissible(n):
        state.check_invariants()
        assert verify_sequence(state.labels(), n, pool)
        lengths[state.length] = lengths.get(state.length, 0) + 1
    assert lengths[1] == n
    # full-length admissible paths are exactly the elegant ones
    assert lengths[n] == enumerate_elegant(n).total_elegant


def test_admissible_fixed_length_subset():
    n, l = 6, 3
    fixed = sum(1 for _ in enumerate_admissible(n, l))
    assert fixed == sum(
        1 for s in enumerate_admissible(n) if s.length == l
    )


def test_admissible_length_two_by_hand():
    # n=3: pool {3,5,7}, gaps <= 4: ordered pairs with distinct even gap
    pairs = [tuple(s.labels()) for s in enumerate_admissible(3, 2)]
    want = {(3, 5), (5, 3), (3, 7), (7, 3), (5, 7), (7, 5)}
    assert set(pairs) == want
    assert len(pairs) == len(want)


def test_guard_rejects_large_n():
    with pytest.raises(ValueError):
        enumerate_elegant(oracle.ELEGANT_GUARD + 1)
    with pytest.raises(ValueError):
        count_admissible(oracle.ADMISSIBLE_GUARD + 1)


def test_guard_override():
    res = enumerate_elegant(oracle.ELEGANT_GUARD, allow_large=True)
    assert res.total_elegant > 0


def test_result_serialization():
    d = enumerate_elegant(4, sample_cap=2).to_dict()
    assert d["n"] == 4
    assert d["total_elegant"] == 6
    assert len(d["sample_paths"]) == 2
