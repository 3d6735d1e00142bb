"""Search drivers: determinism, budgets, tails, auditing, parallel racing."""

import pytest

from elegantprimes.pathstate import from_labels, verify_sequence
from elegantprimes.primes import build_pool
from elegantprimes.search import (
    AuditError,
    RunReport,
    SearchConfig,
    algorithm1,
    algorithm2,
    greedy_extend,
    run_parallel,
    shuffle_step,
)
from elegantprimes.backend import Rng


class ScriptedRng:
    """Replays a fixed list of bounded draws; fails on exhaustion."""

    def __init__(self, values):
        self.values = list(values)

    def below(self, k):
        v = self.values.pop(0)
        assert 0 <= v < k, (v, k)
        return v


def strip_timing(report: RunReport) -> dict:
    d = report.to_dict()
    d.pop("elapsed")
    return d


# ------------------------------------------------------------- config rules


def test_config_rejects_bad_values():
    with pytest.raises(ValueError):
        SearchConfig(n=1)
    with pytest.raises(ValueError):
        SearchConfig(n=5, budget_mult=0)
    with pytest.raises(ValueError):
        SearchConfig(n=5, tail_delta=5)
    with pytest.raises(ValueError):
        SearchConfig(n=5, c0=-1)
    with pytest.raises(ValueError):
        SearchConfig(n=5, max_cut_tries=0)


def test_budget_and_tail_defaults():
    cfg = SearchConfig(n=100)
    assert cfg.resolved_budget(1) == 4000
    assert cfg.resolved_budget(2) == 2000
    assert cfg.resolved_tail_delta() == 1
    assert SearchConfig(n=1000).resolved_tail_delta() == 5
    assert SearchConfig(n=100, budget_mult=7).resolved_budget(1) == 700
    assert SearchConfig(n=100, tail_delta=3).resolved_tail_delta() == 3


# ------------------------------------------------------------ scripted step


def test_scripted_step_reverse_then_followup(pool11):
    """One full shuffle step driven by a hand-written draw list."""
    state = from_labels([5, 7, 3, 19, 31, 11, 29, 37, 23, 17], 11, pool11)
    # case 0 (reversals), first sampled cut u = 2: only the suffix flavour
    # applies there, so exactly two draws are consumed
    out = shuffle_step(state, ScriptedRng([0, 1]))
    assert out.case == 1
    assert out.applied is not None and out.applied.kind == "reverse_suffix"
    assert out.followup is None
    assert state.labels() == [5, 7, 17, 23, 37, 29, 11, 31, 19, 3]


def test_scripted_step_neutral_rotation_skips_followup(pool11):
    state = from_labels([5, 7, 17, 13, 19, 31, 11, 29, 37, 23], 11, pool11)
    # case 1: end-to-end gap |23-5| = 18 is used, cut forced, zero cut draws
    out = shuffle_step(state, ScriptedRng([1]))
    assert out.case == 2
    assert out.applied is not None and out.applied.kind == "rotate_neutral"
    assert out.followup is None
    assert state.labels() == [29, 37, 23, 5, 7, 17, 13, 19, 31, 11]


def test_scripted_step_substitution(pool11):
    state = from_labels([5, 7, 17, 23, 37, 29, 11, 31, 19, 3], 11, pool11)
    # case 2 draws: position 9 (right end), cut 3, free-prime index 0,
    # target 5 = keep A, insert r, reverse B
    out = shuffle_step(state, ScriptedRng([2, 9, 2, 0, 5]))
    assert out.case == 3
    assert out.applied is not None and out.applied.kind == "substitute"
    assert state.labels() == [5, 7, 17, 13, 19, 31, 11, 29, 37, 23]


# ---------------------------------------------------------------- greedy


def test_greedy_extends_until_stuck():
    pool = build_pool(12)
    state = from_labels([3], 12, pool)
    added = greedy_extend(state, Rng(7))
    assert added == state.length - 1
    assert verify_sequence(state.labels(), 12, pool)
    # stuck means no free prime extends either end
    for r in state.free_prime_ranks():
        assert not state.clone().try_extend(r, 0)
        assert not state.clone().try_extend(r, 1)


# ------------------------------------------------------------- algorithm 1


def test_algorithm1_small_n_finds_and_verifies():
    report = algorithm1(SearchConfig(n=12, seed=3))
    assert report.algo == 1 and report.n == 12 and report.seed == 3
    assert report.found
    assert report.path is not None
    assert verify_sequence(report.path, 12)
    assert len(report.path) == 12
    assert report.final_length == 12
    assert report.restarts == 0 and report.tail_rounds == 0


def test_algorithm1_deterministic_replay():
    a = algorithm1(SearchConfig(n=40, seed=99))
    b = algorithm1(SearchConfig(n=40, seed=99))
    assert strip_timing(a) == strip_timing(b)


def test_algorithm1_distinct_seeds_diverge():
    a = algorithm1(SearchConfig(n=40, seed=0))
    b = algorithm1(SearchConfig(n=40, seed=1))
    assert strip_timing(a) != strip_timing(b)


def test_algorithm1_budget_exhaustion():
    report = algorithm1(SearchConfig(n=30, seed=0, budget_mult=1))
    assert not report.found
    assert report.path is None
    assert report.steps_used == 30  # exactly N = budget_mult * n
    assert report.final_length < 30


def test_algorithm1_fresh_seed_when_none():
    report = algorithm1(SearchConfig(n=10))
    assert isinstance(report.seed, int)
    replay = algorithm1(SearchConfig(n=10, seed=report.seed))
    assert strip_timing(replay) == strip_timing(report)


def test_algorithm1_audit_mode_clean():
    audited = algorithm1(SearchConfig(n=25, seed=5, audit_every=1))
    plain = algorithm1(SearchConfig(n=25, seed=5))
    assert strip_timing(audited) == strip_timing(plain)


def test_audit_error_is_assertion():
    assert issubclass(AuditError, AssertionError)


def test_algorithm1_transform_counts_complete():
    report = algorithm1(SearchConfig(n=30, seed=13))
    counts = report.transform_counts
    assert set(counts) == {
        "extend_left",
        "extend_right",
        "reverse_prefix",
        "reverse_suffix",
        "rotate_free",
        "rotate_neutral",
        "insert_middle",
        "insert_rev_prefix",
        "insert_rev_suffix",
        "substitute",
    }
    assert all(v >= 0 for v in counts.values())
    assert sum(counts.values()) > 0


def test_algorithm1_time_limit_stops_early():
    report = algorithm1(SearchConfig(n=500, seed=13, time_limit=0.0))
    assert report.stopped
    assert report.steps_used <= 512


# ------------------------------------------------------------- algorithm 2


def test_algorithm2_rescues_with_tail():
    report = algorithm2(SearchConfig(n=30, seed=2, max_restarts=50))
    assert report.found
    assert report.tail_rounds > 0
    assert verify_sequence(report.path, 30)


def test_algorithm2_deterministic_replay():
    a = algorithm2(SearchConfig(n=30, seed=2, max_restarts=50))
    b = algorithm2(SearchConfig(n=30, seed=2, max_restarts=50))
    assert strip_timing(a) == strip_timing(b)


def test_algorithm2_max_restarts_exhaustion():
    cfg = SearchConfig(n=30, seed=0, budget_mult=1, c0=0, max_restarts=3)
    report = algorithm2(cfg)
    assert not report.found
    assert report.restarts == 3
    assert report.tail_rounds == 0  # c0 = 0 disables the tail


def test_algorithm2_tail_delta_zero_means_pure_restarts():
    report = algorithm2(SearchConfig(n=20, seed=4, tail_delta=0, max_restarts=80))
    assert report.tail_rounds == 0
    assert report.found


def test_algorithm2_stop_callback():
    report = algorithm2(SearchConfig(n=400, seed=1), stop=lambda: True)
    assert report.stopped
    assert not report.found


# ---------------------------------------------------------------- parallel


def test_run_parallel_single_worker_passthrough():
    a = run_parallel(SearchConfig(n=15, seed=8), workers=1)
    b = algorithm1(SearchConfig(n=15, seed=8))
    assert strip_timing(a) == strip_timing(b)


def test_run_parallel_races_to_success():
    report = run_parallel(SearchConfig(n=20, seed=5), workers=2)
    assert report.found
    assert verify_sequence(report.path, 20)
    # workers run on derived seeds, not the master seed itself
    assert report.seed != 5


def test_run_parallel_rejects_zero_workers():
    with pytest.raises(ValueError):
        run_parallel(SearchConfig(n=10, seed=1), workers=0)
