"""Command line interface: generate universes and streams, run, compare.

Exit codes: 0 success, 1 input or usage errors, 2 verification failure.
"""
from __future__ import annotations

import argparse
import sys

from . import harness, streams
from .baselines import BruteForceBudgetError
from .core import StreamError
from .oracles import OracleError, Universe


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dynmatroid",
        description="Fully dynamic submodular maximization benchmark harness")
    sub = parser.add_subparsers(dest="command", required=True)

    gu = sub.add_parser("gen-universe", help="write a random universe JSON")
    gu.add_argument("--elements", type=int, required=True)
    gu.add_argument("--function", choices=("modular", "coverage", "facility-location"),
                    default="coverage")
    gu.add_argument("--matroid", choices=("uniform", "partition", "graphic"),
                    default="uniform")
    gu.add_argument("--rank", type=int, default=2, help="k for the uniform matroid")
    gu.add_argument("--items", type=int, default=8, help="coverage item count")
    gu.add_argument("--clients", type=int, default=4, help="facility-location clients")
    gu.add_argument("--parts", type=int, default=2, help="partition part count")
    gu.add_argument("--vertices", type=int, default=5, help="graphic vertex count")
    gu.add_argument("--seed", type=int, default=0)
    gu.add_argument("--out", required=True)

    gen = sub.add_parser("gen", help="write a stream file")
    gen.add_argument("--generator", choices=("lifo-geometric", "random", "sliding-window"),
                     required=True)
    gen.add_argument("--n", type=int, required=True,
                     help="element count (lifo-geometric, sliding-window) or "
                          "operation count (random)")
    gen.add_argument("--universe", help="universe JSON (random, sliding-window)")
    gen.add_argument("--universe-out", help="where lifo-geometric writes its universe")
    gen.add_argument("--delete-prob", type=float, default=0.3)
    gen.add_argument("--window", type=int, default=4)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", required=True)

    run = sub.add_parser("run", help="replay a stream through one algorithm")
    run.add_argument("--universe", required=True)
    run.add_argument("--stream", required=True)
    run.add_argument("--algorithm", choices=harness.ALGORITHMS, required=True)
    run.add_argument("--epsilon", type=float, default=None)
    run.add_argument("--seed", type=int, default=0)
    run.add_argument("--verify", action="store_true",
                     help="brute-force the optimum after every operation")
    run.add_argument("--out", required=True, help="per-operation report CSV")

    cmp_ = sub.add_parser("compare", help="run several algorithms on one stream")
    cmp_.add_argument("--universe", required=True)
    cmp_.add_argument("--stream", required=True)
    cmp_.add_argument("--algorithms", required=True, help="comma-separated names")
    cmp_.add_argument("--epsilon", type=float, default=None)
    cmp_.add_argument("--seed", type=int, default=0)
    cmp_.add_argument("--out", required=True, help="per-algorithm totals CSV")
    return parser


def _cmd_gen_universe(args) -> int:
    universe = streams.random_universe(
        args.elements, function_kind=args.function, matroid_kind=args.matroid,
        seed=args.seed, rank=args.rank, num_items=args.items,
        num_clients=args.clients, num_parts=args.parts, num_vertices=args.vertices)
    universe.save(args.out)
    print(f"wrote universe with {len(universe)} elements to {args.out}")
    return 0


def _cmd_gen(args) -> int:
    if args.generator == "lifo-geometric":
        if not args.universe_out:
            raise ValueError("lifo-geometric needs --universe-out")
        universe, ops = streams.lifo_geometric(args.n)
        universe.save(args.universe_out)
    else:
        if not args.universe:
            raise ValueError(f"{args.generator} needs --universe")
        universe = Universe.load(args.universe)
        if args.generator == "random":
            ops = streams.random_stream(universe, args.n, delete_prob=args.delete_prob,
                                        seed=args.seed)
        else:
            ops = streams.sliding_window(universe, args.n, args.window)
    streams.validate_stream(ops, universe)
    streams.write_stream(ops, args.out)
    print(f"wrote {len(ops)} operations to {args.out}")
    return 0


def _cmd_run(args) -> int:
    universe = Universe.load(args.universe)
    ops = streams.parse_stream(args.stream, universe)
    report = harness.run(universe, ops, args.algorithm, epsilon=args.epsilon,
                         seed=args.seed, verify=args.verify)
    harness.write_report_csv(report, args.out)
    print(f"{args.algorithm}: {len(report.rows)} ops, "
          f"{report.total_calls} oracle calls "
          f"(amortized {report.amortized_calls:.2f}/op)")
    if args.verify:
        worst = report.min_margin
        print(f"verification: min margin {worst}")
        if not report.verified_ok:
            print("verification FAILED: guarantee margin dropped below 1", file=sys.stderr)
            return 2
    return 0


def _cmd_compare(args) -> int:
    universe = Universe.load(args.universe)
    ops = streams.parse_stream(args.stream, universe)
    names = [n.strip() for n in args.algorithms.split(",") if n.strip()]
    if not names:
        raise ValueError("no algorithms given")
    summaries = harness.compare(universe, ops, names, epsilon=args.epsilon,
                                seed=args.seed)
    harness.write_compare_csv(summaries, args.out)
    for s in summaries:
        print(f"{s['algorithm']}: {s['total_calls']} total calls, "
              f"f_final={s['f_final']}")
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "gen-universe": _cmd_gen_universe,
        "gen": _cmd_gen,
        "run": _cmd_run,
        "compare": _cmd_compare,
    }
    try:
        return handlers[args.command](args)
    except (StreamError, OracleError, BruteForceBudgetError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
