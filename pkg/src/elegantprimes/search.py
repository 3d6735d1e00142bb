"""Randomized construction of elegant paths.

Two drivers share one step primitive:

- ``algorithm1``: seed a random single-prime path, extend greedily until a
  full scan adds nothing, then run up to N randomized rewrite steps, each a
  uniformly chosen case (reversals, rotation, substitution) followed by a
  deterministic insertion attempt.
- ``algorithm2``: restart algorithm1 until the path gets within
  ``tail_delta`` of full, then alternate dropping the last prime with fresh
  step budgets, up to ``c0`` rounds per restart.

All randomness flows through the kernel Rng (splitmix64), so a (seed,
config) pair fixes the entire run, identically on both backends.
"""

from __future__ import annotations

import os
import time
from dataclasses import dataclass, field
from typing import Callable, Optional

from . import backend as _ambient
from ._kinds import KIND_NAMES
from .backend import PathState, Rng
from .primes import PrimePool, build_pool
from .pathstate import check_sequence
from .transforms import TransformOutcome, _wrap

__all__ = [
    "SearchConfig",
    "RunReport",
    "StepOutcome",
    "AuditError",
    "greedy_extend",
    "shuffle_step",
    "algorithm1",
    "algorithm2",
    "run_parallel",
]


class AuditError(AssertionError):
    """An audited intermediate state failed the independent verifier."""


@dataclass
class SearchConfig:
    """Knobs for the randomized search.

    ``budget_mult`` scales the per-run rewrite budget N = budget_mult * n
    (default 40 for algorithm1, 20 for algorithm2). ``tail_delta`` is how
    close a run must get before the drop-and-retry tail kicks in; None picks
    1 below n=1000 and 5 from there up. ``audit_every`` > 0 re-verifies the
    state every that many steps through the independent checker.
    """

    n: int
    seed: Optional[int] = None
    budget_mult: Optional[int] = None
    c0: int = 20
    tail_delta: Optional[int] = None
    max_cut_tries: int = 48
    max_subst_tries: int = 48
    max_restarts: Optional[int] = None
    time_limit: Optional[float] = None
    audit_every: int = 0

    def __post_init__(self) -> None:
        if self.n < 2:
            raise ValueError("n must be at least 2")
        if self.budget_mult is not None and self.budget_mult < 1:
            raise ValueError("budget_mult must be positive")
        if self.c0 < 0:
            raise ValueError("c0 must be non-negative")
        if self.tail_delta is not None and not 0 <= self.tail_delta < self.n:
            raise ValueError("tail_delta must lie in [0, n)")
        if self.max_cut_tries < 1 or self.max_subst_tries < 1:
            raise ValueError("retry caps must be positive")

    def resolved_tail_delta(self) -> int:
        if self.tail_delta is not None:
            return self.tail_delta
        return 5 if self.n >= 1000 else 1

    def resolved_budget(self, algo: int) -> int:
        mult = self.budget_mult
        if mult is None:
            mult = 40 if algo == 1 else 20
        return mult * self.n


@dataclass
class RunReport:
    """What a search run did; ``elapsed`` is the only non-reproducible field."""

    algo: int
    n: int
    seed: int
    found: bool
    final_length: int
    steps_used: int
    restarts: int
    tail_rounds: int
    transform_counts: dict[str, int]
    elapsed: float
    backend: str
    path: Optional[list[int]]
    stopped: bool = False

    def to_dict(self) -> dict:
        return {
            "algo": self.algo,
            "n": self.n,
            "seed": self.seed,
            "found": self.found,
            "final_length": self.final_length,
            "steps_used": self.steps_used,
            "restarts": self.restarts,
            "tail_rounds": self.tail_rounds,
            "transform_counts": dict(self.transform_counts),
            "elapsed": self.elapsed,
            "backend": self.backend,
            "path": self.path,
            "stopped": self.stopped,
        }


@dataclass(frozen=True)
class StepOutcome:
    """One randomized step: the sampled case and what it applied."""

    case: int
    applied: Optional[TransformOutcome]
    followup: Optional[TransformOutcome]


def _fresh_seed() -> int:
    return int.from_bytes(os.urandom(8), "little") >> 1


def greedy_extend(state: PathState, rng: Rng) -> int:
    """Repeat shuffled extension scans until one adds nothing.

    Returns the number of primes added.
    """
    before = state.length
    while state.greedy_pass(rng):
        pass
    return state.length - before


def shuffle_step(
    state: PathState,
    rng: Rng,
    max_cut_tries: int = 48,
    max_subst_tries: int = 48,
) -> StepOutcome:
    """One randomized rewrite step plus follow-up, with wrapped outcomes."""
    case, main, follow = state.shuffle_step(rng, max_cut_tries, max_subst_tries)
    return StepOutcome(case + 1, _wrap(main), _wrap(follow))


def _tally(counts: dict[str, int], raw) -> None:
    if raw is not None:
        counts[KIND_NAMES[raw[0]]] += 1


def _step_loop(
    state: PathState,
    rng: Rng,
    budget: int,
    config: SearchConfig,
    counts: dict[str, int],
    pool: PrimePool,
    deadline: Optional[float],
    stop: Optional[Callable[[], bool]],
) -> tuple[int, bool]:
    """Run rewrite steps until full, budget, deadline, or stop. -> (steps, cut short)"""
    n = config.n
    audit = config.audit_every
    m = 0
    while state.length < n and m < budget:
        if (m & 255) == 0 and m:
            if deadline is not None and time.perf_counter() >= deadline:
                return m, True
            if stop is not None and stop():
                return m, True
        case, main, follow = state.shuffle_step(
            rng, config.max_cut_tries, config.max_subst_tries
        )
        _tally(counts, main)
        _tally(counts, follow)
        m += 1
        if audit and m % audit == 0:
            result = check_sequence(state.labels(), n, pool)
            if not result.ok:
                raise AuditError(f"state failed audit at step {m}: {result}")
    return m, False


def _new_counts() -> dict[str, int]:
    return {name: 0 for name in KIND_NAMES}


def _single_run(
    kernel,
    rng,
    config: SearchConfig,
    pool: PrimePool,
    budget: int,
    counts: dict[str, int],
    deadline: Optional[float],
    stop: Optional[Callable[[], bool]],
):
    """Random seed prime, greedy phase, one step loop."""
    n = config.n
    start = 1 + rng.below(n)
    state = kernel.PathState(pool.values, n, start)
    greedy_extend(state, rng)
    steps, cut_short = _step_loop(state, rng, budget, config, counts, pool, deadline, stop)
    return state, steps, cut_short


def _deadline_from(config: SearchConfig) -> Optional[float]:
    if config.time_limit is None:
        return None
    return time.perf_counter() + config.time_limit


def algorithm1(
    config: SearchConfig,
    pool: PrimePool | None = None,
    stop: Optional[Callable[[], bool]] = None,
    kernel=None,
) -> RunReport:
    """One randomized construction run; no restarts."""
    if kernel is None:
        kernel = _ambient
    if pool is None:
        pool = build_pool(config.n)
    seed = config.seed if config.seed is not None else _fresh_seed()
    rng = kernel.Rng(seed)
    counts = _new_counts()
    t0 = time.perf_counter()
    deadline = _deadline_from(config)
    state, steps, cut_short = _single_run(
        kernel, rng, config, pool, config.resolved_budget(1), counts, deadline, stop
    )
    found = state.is_elegant()
    return RunReport(
        algo=1,
        n=config.n,
        seed=seed,
        found=found,
        final_length=state.length,
        steps_used=steps,
        restarts=0,
        tail_rounds=0,
        transform_counts=counts,
        elapsed=time.perf_counter() - t0,
        backend=kernel.BACKEND,
        path=state.labels() if found else None,
        stopped=cut_short,
    )


def algorithm2(
    config: SearchConfig,
    pool: PrimePool | None = None,
    stop: Optional[Callable[[], bool]] = None,
    kernel=None,
) -> RunReport:
    """Restarted search with a drop-and-retry tail near full length.

    Each restart draws a fresh run seed from a master stream seeded by
    ``config.seed``, runs algorithm1's phases, and, once the path is within
    ``tail_delta`` of full, up to ``c0`` rounds of dropping the last prime
    and re-running the step loop with a fresh budget.
    """
    if kernel is None:
        kernel = _ambient
    if pool is None:
        pool = build_pool(config.n)
    seed = config.seed if config.seed is not None else _fresh_seed()
    master = kernel.Rng(seed)
    counts = _new_counts()
    n = config.n
    budget = config.resolved_budget(2)
    delta = config.resolved_tail_delta()
    t0 = time.perf_counter()
    deadline = _deadline_from(config)
    restarts = 0
    tail_rounds = 0
    total_steps = 0
    state = None
    stopped = False
    while True:
        rng = kernel.Rng(master.next_u64())
        state, steps, stopped = _single_run(
            kernel, rng, config, pool, budget, counts, deadline, stop
        )
        total_steps += steps
        if not stopped and n - delta <= state.length < n:
            c = 0
            while state.length < n and c < config.c0:
                state.drop_last()
                steps, stopped = _step_loop(
                    state, rng, budget, config, counts, pool, deadline, stop
                )
                total_steps += steps
                c += 1
                tail_rounds += 1
                if stopped:
                    break
        if state.is_elegant():
            break
        restarts += 1
        if stopped:
            break
        if config.max_restarts is not None and restarts >= config.max_restarts:
            break
        if deadline is not None and time.perf_counter() >= deadline:
            stopped = True
            break
        if stop is not None and stop():
            stopped = True
            break
    found = state.is_elegant()
    return RunReport(
        algo=2,
        n=n,
        seed=seed,
        found=found,
        final_length=state.length,
        steps_used=total_steps,
        restarts=restarts,
        tail_rounds=tail_rounds,
        transform_counts=counts,
        elapsed=time.perf_counter() - t0,
        backend=kernel.BACKEND,
        path=state.labels() if found else None,
        stopped=stopped,
    )


# ------------------------------------------------------------- parallel runs

def _parallel_worker(args) -> None:
    (config_kwargs, algo, stop_event, queue, index) = args
    config = SearchConfig(**config_kwargs)
    runner = algorithm1 if algo == 1 else algorithm2
    try:
        report = runner(config, stop=stop_event.is_set)
    except Exception as exc:  # surfaced by the parent
        queue.put((index, None, repr(exc)))
        return
    queue.put((index, report.to_dict(), None))


def run_parallel(config: SearchConfig, workers: int, algo: int = 1) -> RunReport:
    """Race identical searches on derived seeds; first success stops the rest.

    Worker k gets the k-th output of the master stream as its seed. The
    winning worker's report is returned (steps and counts are its own, not
    sums); when nobody succeeds the longest final path wins the report.
    """
    import multiprocessing as mp

    if workers < 1:
        raise ValueError("workers must be positive")
    if workers == 1:
        return algorithm1(config) if algo == 1 else algorithm2(config)
    seed = config.seed if config.seed is not None else _fresh_seed()
    master = Rng(seed)
    ctx = mp.get_context()
    stop_event = ctx.Event()
    queue: mp.Queue = ctx.Queue()
    procs = []
    for k in range(workers):
        kwargs = {
            "n": config.n,
            "seed": master.next_u64(),
            "budget_mult": config.budget_mult,
            "c0": config.c0,
            "tail_delta": config.tail_delta,
            "max_cut_tries": config.max_cut_tries,
            "max_subst_tries": config.max_subst_tries,
            "max_restarts": config.max_restarts,
            "time_limit": config.time_limit,
            "audit_every": config.audit_every,
        }
        p = ctx.Process(
            target=_parallel_worker,
            args=((kwargs, algo, stop_event, queue, k),),
        )
        p.start()
        procs.append(p)
    results = []
    failure: Optional[str] = None
    for _ in range(workers):
        index, report_dict, err = queue.get()
        if err is not None:
            failure = err
            stop_event.set()
            continue
        results.append((index, report_dict))
        if report_dict["found"]:
            stop_event.set()
    for p in procs:
        p.join()
    if failure is not None and not any(r["found"] for _, r in results):
        raise RuntimeError(f"parallel worker failed: {failure}")
    found = [r for r in results if r[1]["found"]]
    chosen = found[0] if found else max(results, key=lambda r: r[1]["final_length"])
    report = RunReport(**chosen[1])
    return report
