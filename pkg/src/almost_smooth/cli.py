"""Command line: generate streams, replay them through an algorithm, check the records.

Exit codes: 0 all bounds hold, 1 a bound was violated, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import Iterable, Iterator, Sequence

from . import oracles
from .algorithms import ALGORITHMS, TARGET, WindowAlgorithm, WindowAlgorithmSpec, ratio_bounds
from .graph_streams import CapacityError
from .histogram import ConfigError
from .streams import (
    GenerationError,
    StreamFormatError,
    gen_alpha_union,
    gen_forest,
    gen_gnp,
    gen_three_paths,
    read_stream,
    write_stream,
)

log = logging.getLogger("almost_smooth")

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE = 0, 1, 2

RECORD_FIELDS = (
    "t", "estimate", "truth", "ratio", "bucket_count", "footprint",
    "algorithm", "epsilon", "alpha", "w",
)

# float slack when comparing a ratio against its closed-form bound
RATIO_RTOL = 1e-12


def _truth(target: str, window: list, alpha: int):
    if target == "m":
        return oracles.matching_size(window)
    if target == "vc":
        return oracles.cover_size(window)
    return len(window)


def run_records(spec: WindowAlgorithmSpec, edges: Sequence, oracle: bool = False,
                every: int = 1, doubling: bool = False) -> Iterator[dict]:
    """Replay ``edges`` and yield one record per ``every`` updates."""
    if every < 1:
        raise ConfigError("--every must be >= 1")
    alg = WindowAlgorithm(spec, doubling=doubling)
    target = TARGET[spec.name]
    for t, e in enumerate(edges, start=1):
        alg.update(e)
        if t % every:
            continue
        rec = {
            "t": t,
            "estimate": alg.query(),
            "truth": None,
            "ratio": None,
            "bucket_count": alg.bucket_count(),
            "footprint": alg.footprint(),
            "algorithm": spec.name,
            "epsilon": spec.epsilon,
            "alpha": spec.alpha,
            "w": spec.window,
        }
        window = None
        if oracle:
            window = oracles.window_items(edges, spec.window, t)
            try:
                truth = _truth(target, window, spec.alpha)
            except CapacityError as exc:
                rec["error"] = str(exc)
            else:
                rec["truth"] = truth
                if truth > 0:
                    rec["ratio"] = rec["estimate"] / truth
        if spec.name == "vc_approx":
            cover, _ = alg.query_cover()
            if window is not None:
                rec["cover_valid"] = oracles.covers(cover, window)
        yield rec


class RecordError(ValueError):
    pass


def summarize(records: Iterable[dict]) -> dict:
    """Aggregate records and count bound violations."""
    n = 0
    ratios = []
    violations = 0
    errors = 0
    max_buckets = 0
    max_fp = 0
    for rec in records:
        missing = [f for f in RECORD_FIELDS if f not in rec]
        if missing:
            raise RecordError(f"record {n + 1} lacks fields {missing}")
        n += 1
        try:
            spec = WindowAlgorithmSpec(rec["algorithm"], rec["epsilon"], rec["w"], rec["alpha"])
        except (ConfigError, TypeError) as exc:
            raise RecordError(f"record {n}: {exc}") from None
        max_buckets = max(max_buckets, rec["bucket_count"])
        max_fp = max(max_fp, rec["footprint"])
        if rec.get("error"):
            errors += 1
        bad = rec.get("cover_valid") is False
        ratio = rec["ratio"]
        if ratio is not None:
            ratios.append(ratio)
            lo, hi = ratio_bounds(spec)
            if ratio < lo * (1 - RATIO_RTOL) or ratio > hi * (1 + RATIO_RTOL):
                bad = True
        elif rec["truth"] == 0 and rec["estimate"] != 0:
            bad = True
        violations += bad
    return {
        "records": n,
        "checked": len(ratios),
        "max_ratio": max(ratios) if ratios else None,
        "mean_ratio": math.fsum(ratios) / len(ratios) if ratios else None,
        "violations": violations,
        "errors": errors,
        "max_bucket_count": max_buckets,
        "max_footprint": max_fp,
    }


def read_records(fh) -> Iterator[dict]:
    for lineno, line in enumerate(fh, start=1):
        if not line.strip():
            continue
        try:
            rec = json.loads(line)
        except json.JSONDecodeError as exc:
            raise RecordError(f"line {lineno}: {exc}") from None
        if not isinstance(rec, dict):
            raise RecordError(f"line {lineno}: record is not an object")
        yield rec


# --------------------------------------------------------------------------
# subcommands


def cmd_gen(args) -> int:
    if args.kind == "forest":
        edges, n = gen_forest(args.n, args.edges, args.seed), args.n
    elif args.kind == "alpha_union":
        edges, n = gen_alpha_union(args.n, args.alpha, args.edges, args.seed), args.n
    elif args.kind == "gnp":
        edges, n = gen_gnp(args.n, args.p, args.seed), args.n
    else:
        edges, _, n = gen_three_paths(args.copies)
    write_stream(args.out or sys.stdout, edges, n)
    return EXIT_OK


def _spec(args) -> WindowAlgorithmSpec:
    return WindowAlgorithmSpec(args.alg, args.epsilon, args.window, args.alpha)


def cmd_run(args) -> int:
    spec = _spec(args)
    _, edges = read_stream(args.stream)
    out = open(args.out, "w", encoding="utf-8") if args.out else sys.stdout
    try:
        for rec in run_records(spec, edges, args.oracle, args.every, args.doubling):
            out.write(json.dumps(rec) + "\n")
    finally:
        if args.out:
            out.close()
    return EXIT_OK


def cmd_oracle(args) -> int:
    _, edges = read_stream(args.stream)
    t = args.t if args.t is not None else len(edges)
    w = args.window if args.window is not None else max(len(edges), 1)
    if not edges:
        value = 0
    else:
        value = oracles.window_truth(edges, w, t, args.problem, args.alpha)
    print(json.dumps({"problem": args.problem, "t": t, "w": w, "alpha": args.alpha, "value": value}))
    return EXIT_OK


def cmd_eval(args) -> int:
    if args.records == "-":
        summary = summarize(read_records(sys.stdin))
    else:
        with open(args.records, encoding="utf-8") as fh:
            summary = summarize(read_records(fh))
    print(json.dumps(summary))
    return EXIT_VIOLATION if summary["violations"] else EXIT_OK


SELFTEST_SCENARIOS = (
    ("vc_approx on three paths", "vc_approx", 1, 0.1, 40, ("three_paths", 20)),
    ("mm_via_goodedges forest", "mm_via_goodedges", 1, 0.1, 50, ("forest", 60, 59, 1)),
    ("mm_via_goodedges alpha=2", "mm_via_goodedges", 2, 0.1, 60, ("alpha_union", 40, 2, 70, 2)),
    ("mm_squared alpha=2", "mm_squared", 2, 0.25, 60, ("alpha_union", 40, 2, 70, 3)),
    ("vc_forest", "vc_forest", 1, 0.1, 40, ("forest", 50, 49, 4)),
    ("vc_approx gnp", "vc_approx", 1, 0.05, 60, ("gnp", 30, 0.12, 5)),
    ("generic count", "generic", 1, 0.5, 16, ("forest", 65, 64, 6)),
)


def _scenario_stream(gen):
    kind = gen[0]
    if kind == "three_paths":
        return gen_three_paths(gen[1]).stream
    if kind == "forest":
        return gen_forest(*gen[1:])
    if kind == "alpha_union":
        return gen_alpha_union(*gen[1:])
    return gen_gnp(*gen[1:])


def _selftest_one(scenario) -> tuple[str, dict]:
    label, alg, alpha, eps, w, gen = scenario
    spec = WindowAlgorithmSpec(alg, eps, w, alpha)
    edges = _scenario_stream(gen)
    return label, summarize(run_records(spec, edges, oracle=True))


def cmd_selftest(args) -> int:
    failed = 0
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_selftest_one, SELFTEST_SCENARIOS))
    else:
        results = [_selftest_one(s) for s in SELFTEST_SCENARIOS]
    for label, summary in results:
        ok = summary["violations"] == 0 and summary["errors"] == 0
        failed += not ok
        print(f"{'PASS' if ok else 'FAIL'}  {label}: {summary['checked']} queries, "
              f"max ratio {summary['max_ratio']:.3f}, max buckets {summary['max_bucket_count']}")
    return EXIT_VIOLATION if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="almost-smooth", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="write a generated edge stream")
    g.add_argument("--kind", choices=("forest", "alpha_union", "gnp", "three_paths"), required=True)
    g.add_argument("--n", type=int, default=30)
    g.add_argument("--edges", type=int, default=29)
    g.add_argument("--alpha", type=int, default=1)
    g.add_argument("--p", type=float, default=0.1)
    g.add_argument("--copies", type=int, default=10)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("-o", "--out")
    g.set_defaults(func=cmd_gen)

    r = sub.add_parser("run", help="replay a stream file, one JSON record per query")
    r.add_argument("stream")
    r.add_argument("--alg", choices=ALGORITHMS, required=True)
    r.add_argument("--alpha", type=int, default=1)
    r.add_argument("--epsilon", type=float, default=0.1)
    r.add_argument("--window", type=int, required=True)
    r.add_argument("--seed", type=int, default=0, help="accepted for symmetry; all estimators are deterministic")
    r.add_argument("--oracle", action="store_true", help="fill truth and ratio with exact window values")
    r.add_argument("--every", type=int, default=1)
    r.add_argument("--doubling", action="store_true", help="restart instances every w items")
    r.add_argument("-o", "--out")
    r.set_defaults(func=cmd_run)

    o = sub.add_parser("oracle", help="exact value on a window of a stream file")
    o.add_argument("stream")
    o.add_argument("--problem", choices=oracles.PROBLEMS, default="m")
    o.add_argument("--alpha", type=int, default=1)
    o.add_argument("--window", type=int)
    o.add_argument("--t", type=int)
    o.set_defaults(func=cmd_oracle)

    e = sub.add_parser("eval", help="summarise a record file; exit 1 on any bound violation")
    e.add_argument("records", help="record file, or - for stdin")
    e.set_defaults(func=cmd_eval)

    s = sub.add_parser("selftest", help="run the built-in oracle-checked scenarios")
    s.add_argument("--jobs", type=int, default=1)
    s.set_defaults(func=cmd_selftest)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (StreamFormatError, RecordError, ConfigError, GenerationError, IndexError, OSError) as exc:
        log.error("%s", exc)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
