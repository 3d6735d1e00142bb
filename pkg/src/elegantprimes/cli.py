"""Command-line surface.

Subcommands: search, verify, enumerate, graph, bench. Exit codes are part of
the contract: 0 found/verified, 1 verification or existence failed, 3 budget
exhausted; argparse's native exit 2 covers usage errors.

Every randomized command echoes the seed it ran with, so any output can be
reproduced by passing that seed back in.
"""

from __future__ import annotations

import argparse
import json
import statistics
import sys
import time
from pathlib import Path
from typing import Optional

from .backend import BACKEND, load_backend
from .graphs import (
    StochasticConfig,
    exhaustive_graph_search,
    graph_by_name,
    parse_edge_list,
    star_elegant_labeling,
    stochastic_graph_search,
    verify_graph_labeling,
)
from .oracle import ADMISSIBLE_GUARD, ELEGANT_GUARD, elegant_paths, enumerate_elegant
from .pathstate import (
    check_sequence,
    format_path_text,
    load_path_json,
    load_paths,
)
from .primes import build_pool
from .search import SearchConfig, algorithm1, algorithm2, run_parallel

SCHEMA = 1

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_EXHAUSTED = 3


def _emit(doc: dict, out: Optional[str]) -> None:
    text = json.dumps(doc, indent=2, sort_keys=True)
    if out:
        Path(out).write_text(text + "\n")
    else:
        print(text)


# ------------------------------------------------------------------- search

def _add_search_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--n", type=int, required=True, help="pool size (primes on the path)")
    p.add_argument("--algo", type=int, choices=(1, 2), default=1)
    p.add_argument("--seed", type=int, default=None, help="64-bit run seed (default random)")
    p.add_argument("--budget-mult", type=int, default=None, help="steps per run = mult * n")
    p.add_argument("--c0", type=int, default=20, help="tail rounds per restart (algo 2)")
    p.add_argument("--tail-delta", type=int, default=None, help="tail window (algo 2)")
    p.add_argument("--max-cut-tries", type=int, default=48)
    p.add_argument("--max-subst-tries", type=int, default=48)
    p.add_argument("--max-restarts", type=int, default=None, help="restart cap (algo 2)")
    p.add_argument("--time-limit", type=float, default=None, help="soft wall-clock cap, seconds")
    p.add_argument("--audit-every", type=int, default=0, help="re-verify state every K steps")
    p.add_argument("--parallel", type=int, default=1, metavar="K", help="race K seeded runs")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--out", default=None, help="write the report/path here instead of stdout")


def _config_from(args: argparse.Namespace, parser: argparse.ArgumentParser) -> SearchConfig:
    try:
        return SearchConfig(
            n=args.n,
            seed=args.seed,
            budget_mult=args.budget_mult,
            c0=args.c0,
            tail_delta=args.tail_delta,
            max_cut_tries=args.max_cut_tries,
            max_subst_tries=args.max_subst_tries,
            max_restarts=args.max_restarts,
            time_limit=args.time_limit,
            audit_every=args.audit_every,
        )
    except ValueError as exc:
        parser.error(str(exc))
        raise AssertionError  # unreachable; parser.error exits


def cmd_search(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    config = _config_from(args, parser)
    if args.parallel < 1:
        parser.error("--parallel must be positive")
    if args.parallel > 1:
        report = run_parallel(config, args.parallel, algo=args.algo)
    elif args.algo == 1:
        report = algorithm1(config)
    else:
        report = algorithm2(config)
    if args.format == "json":
        _emit({"schema": SCHEMA, "command": "search", "report": report.to_dict()}, args.out)
    else:
        lines = [
            f"search n={report.n} algo={report.algo} seed={report.seed} "
            f"backend={report.backend}",
            f"found={report.found} length={report.final_length}/{report.n} "
            f"steps={report.steps_used} restarts={report.restarts} "
            f"elapsed={report.elapsed:.3f}s",
        ]
        if report.path is not None:
            lines.append(format_path_text(report.path))
        text = "\n".join(lines)
        if args.out:
            Path(args.out).write_text(text + "\n")
            print(f"search n={report.n} seed={report.seed} found={report.found} -> {args.out}")
        else:
            print(text)
    return EXIT_OK if report.found else EXIT_EXHAUSTED


# ------------------------------------------------------------------- verify

def cmd_verify(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    try:
        text = Path(args.file).read_text()
    except OSError as exc:
        parser.error(f"cannot read {args.file}: {exc}")
    results = []
    ok_all = True
    if args.graph:
        try:
            graph = parse_edge_list(Path(args.graph).read_text(), name=args.graph)
        except (OSError, ValueError) as exc:
            parser.error(f"bad edge list {args.graph}: {exc}")
        try:
            labelings = load_paths(text)
        except ValueError as exc:
            parser.error(f"bad labels file {args.file}: {exc}")
        for i, labels in enumerate(labelings, 1):
            check = verify_graph_labeling(graph, labels)
            results.append(
                {"line": i, "ok": check.ok, "reason": check.reason, "detail": check.detail}
            )
            ok_all &= check.ok
    else:
        try:
            if args.file.endswith(".json"):
                n, labels = load_path_json(text)
                entries = [(n, labels)]
            else:
                entries = [(args.n or len(p), p) for p in load_paths(text)]
        except (ValueError, KeyError) as exc:
            parser.error(f"bad path file {args.file}: {exc}")
        for i, (n, labels) in enumerate(entries, 1):
            if args.n:
                n = args.n
            if n < 2:
                parser.error(f"line {i}: n={n} is below 2")
            check = check_sequence(labels, n)
            full = check.ok and len(labels) == n
            results.append(
                {
                    "line": i,
                    "n": n,
                    "ok": check.ok,
                    "elegant": full,
                    "reason": check.reason,
                    "index": check.index,
                }
            )
            ok_all &= check.ok
    if args.format == "json":
        _emit(
            {"schema": SCHEMA, "command": "verify", "ok": ok_all, "results": results},
            args.out,
        )
    else:
        for row in results:
            if row["ok"]:
                extra = ""
                if "elegant" in row:
                    extra = " (elegant)" if row["elegant"] else " (admissible)"
                print(f"line {row['line']}: ok{extra}")
            else:
                where = row.get("index", row.get("detail"))
                print(f"line {row['line']}: FAIL reason={row['reason']} at={where}")
    return EXIT_OK if ok_all else EXIT_FAILED


# ---------------------------------------------------------------- enumerate

def cmd_enumerate(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    try:
        result = enumerate_elegant(args.n, allow_large=args.allow_large)
    except ValueError as exc:
        parser.error(str(exc))
    doc = result.to_dict()
    if args.format == "json":
        payload = {"schema": SCHEMA, "command": "enumerate", "result": doc}
        if not args.count_only:
            payload["paths"] = _listed_paths(args)
        _emit(payload, args.out)
    else:
        print(
            f"n={result.n} total={result.total_elegant} "
            f"distinct_up_to_reversal={result.distinct_up_to_reversal}"
        )
        if not args.count_only:
            for p in _listed_paths(args):
                print(format_path_text(p))
    return EXIT_OK


def _listed_paths(args: argparse.Namespace) -> list[list[int]]:
    paths = []
    for p in elegant_paths(args.n, allow_large=args.allow_large):
        if args.up_to_reversal and p[0] > p[-1]:
            continue
        paths.append(p)
    return paths


# -------------------------------------------------------------------- graph

def cmd_graph(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    if bool(args.name) == bool(args.edge_list):
        parser.error("give exactly one of --name or --edge-list")
    try:
        if args.name:
            graph = graph_by_name(args.name)
        else:
            graph = parse_edge_list(Path(args.edge_list).read_text(), name=args.edge_list)
    except (OSError, ValueError) as exc:
        parser.error(str(exc))
    method = args.method
    if method == "auto":
        if graph.name.startswith("star:"):
            method = "star"
        elif graph.edge_count <= 12:
            method = "exhaustive"
        else:
            method = "stochastic"
    status = "none"
    labeling = None
    nodes = None
    if method == "star":
        if not graph.name.startswith("star:"):
            parser.error("--method star only applies to --name star:N")
        labeling = star_elegant_labeling(graph.vertex_count)
        status = "found" if labeling else "none"
    elif method == "exhaustive":
        res = exhaustive_graph_search(graph, limit=args.node_limit)
        status, labeling, nodes = res.status, res.labeling, res.nodes
    else:
        cfg = StochasticConfig(
            seed=args.seed, restarts=args.restarts, iters=args.iters
        )
        labeling = stochastic_graph_search(graph, cfg)
        status = "found" if labeling else "budget"
    verified = bool(labeling and verify_graph_labeling(graph, labeling))
    doc = {
        "schema": SCHEMA,
        "command": "graph",
        "graph": graph.name or "edge-list",
        "vertices": graph.vertex_count,
        "edges": graph.edge_count,
        "method": method,
        "seed": args.seed,
        "status": status,
        "labeling": labeling,
        "verified": verified,
    }
    if nodes is not None:
        doc["nodes"] = nodes
    if args.format == "json":
        _emit(doc, args.out)
    else:
        print(
            f"graph {doc['graph']} vertices={graph.vertex_count} "
            f"edges={graph.edge_count} method={method} seed={args.seed}"
        )
        if labeling:
            print(f"status=found verified={verified}")
            print(format_path_text(labeling))
        else:
            print(f"status={status}")
    if labeling and verified:
        return EXIT_OK
    if status == "none":
        return EXIT_FAILED
    return EXIT_EXHAUSTED


# -------------------------------------------------------------------- bench

def _parse_range(spec: str, parser: argparse.ArgumentParser) -> range:
    try:
        if ".." in spec:
            a, b = spec.split("..", 1)
            lo, hi = int(a), int(b)
        else:
            lo = hi = int(spec)
    except ValueError:
        parser.error(f"bad --n-range {spec!r}; use A..B or N")
    return range(lo, hi + 1)


def cmd_bench(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    ns = _parse_range(args.n_range, parser)
    if args.backend == "both":
        backends = ["py", "c"]
    elif args.backend == "auto":
        backends = [BACKEND]
    else:
        backends = [args.backend]
    kernels = {}
    for name in backends:
        try:
            kernels[name] = load_backend(name)
        except ImportError:
            parser.error(f"backend {name!r} is not available in this install")
    out = open(args.out, "w") if args.out else sys.stdout
    try:
        print("n,seed,backend,found,steps,millis", file=out)
        stats: dict[str, list[float]] = {name: [] for name in backends}
        found_count = {name: 0 for name in backends}
        rows = 0
        for name in backends:
            kernel = kernels[name]
            for n in ns:
                if n < 2:
                    parser.error("--n-range values must be at least 2")
                pool = build_pool(n)
                for s in range(args.seeds):
                    seed = args.seed_base + s
                    config = SearchConfig(
                        n=n,
                        seed=seed,
                        budget_mult=args.budget_mult,
                        time_limit=args.timeout,
                    )
                    t0 = time.perf_counter()
                    if args.algo == 1:
                        report = algorithm1(config, pool=pool, kernel=kernel)
                    else:
                        report = algorithm2(config, pool=pool, kernel=kernel)
                    millis = (time.perf_counter() - t0) * 1000.0
                    stats[name].append(millis)
                    found_count[name] += report.found
                    rows += 1
                    print(
                        f"{n},{seed},{name},{int(report.found)},"
                        f"{report.steps_used},{millis:.3f}",
                        file=out,
                    )
        for name in backends:
            if stats[name]:
                print(
                    f"# backend={name} rows={len(stats[name])} "
                    f"found={found_count[name]} "
                    f"median_millis={statistics.median(stats[name]):.3f}",
                    file=sys.stderr,
                )
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_OK


# --------------------------------------------------------------------- main

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="elegantprimes",
        description="Search for and verify elegant prime labelings of paths and small graphs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("search", help="randomized elegant-path construction")
    _add_search_flags(p)

    p = sub.add_parser("verify", help="check paths (or graph labelings) from a file")
    p.add_argument("file", help="text: one path per line; .json: single path document")
    p.add_argument("--n", type=int, default=None, help="pool size (default: line length)")
    p.add_argument("--graph", default=None, help="edge-list file; verify labelings instead")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--out", default=None)

    p = sub.add_parser("enumerate", help="exhaustive elegant-path listing for small n")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--count-only", action="store_true")
    p.add_argument("--up-to-reversal", action="store_true")
    p.add_argument(
        "--allow-large",
        action="store_true",
        help=f"lift the n<={ELEGANT_GUARD} guard (may take very long)",
    )
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--out", default=None)

    p = sub.add_parser("graph", help="search a small graph for an elegant labeling")
    p.add_argument("--name", default=None, help="petersen | path:N | star:N | complete:K | caterpillar:N")
    p.add_argument("--edge-list", default=None, help="file with one 'u v' edge per line")
    p.add_argument(
        "--method",
        choices=("auto", "exhaustive", "stochastic", "star"),
        default="auto",
    )
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--restarts", type=int, default=60)
    p.add_argument("--iters", type=int, default=30_000)
    p.add_argument("--node-limit", type=int, default=5_000_000)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--out", default=None)

    p = sub.add_parser("bench", help="CSV timing rows over an n range")
    p.add_argument("--n-range", required=True, help="A..B or a single N")
    p.add_argument("--seeds", type=int, default=1, help="seeds per n (seed_base..)")
    p.add_argument("--seed-base", type=int, default=0)
    p.add_argument("--algo", type=int, choices=(1, 2), default=1)
    p.add_argument("--budget-mult", type=int, default=None)
    p.add_argument("--timeout", type=float, default=None, help="per-run soft cap, seconds")
    p.add_argument(
        "--backend",
        choices=("auto", "py", "c", "both"),
        default="auto",
        help="kernel(s) to time; 'both' compares compiled and pure Python",
    )
    p.add_argument("--out", default=None, help="CSV file (default stdout)")

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "search": cmd_search,
        "verify": cmd_verify,
        "enumerate": cmd_enumerate,
        "graph": cmd_graph,
        "bench": cmd_bench,
    }
    return handlers[args.command](args, parser)


if __name__ == "__main__":
    sys.exit(main())
