"""Load experiments against a running hub.

Usage:
    cair-load baseline --payload all --iterations 30 --spacing 5 \
        --target http://127.0.0.1:8000 --tree-stats stats.json --out results/
    cair-load scale --threads 250 --ramp-up 10 --iterations 30 \
        --target URL --tree-stats stats.json --out results/
    cair-load sweep --threads-list 1,5,10,20,50,100,250 --ramp-up 0 \
        --target URL --tree-stats stats.json --out results/
    cair-load size --n 40 --r 0.2

``--tree-stats`` is the JSON written by ``cair-knowledge stats --json``; it
describes the tree the target server is running so coverage payloads can be
synthesized locally.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from cair.loadgen.report import emit_report, report_summary
from cair.loadgen.runner import LoadScenario, run_baseline, run_scalability
from cair.loadgen.sizing import size_deployment

_ALL_PAYLOADS = ["0", "1/3", "2/3", "1"]


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="cair-load", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_base = sub.add_parser("baseline", help="single user, evenly spaced requests")
    _common_args(p_base)
    p_base.add_argument(
        "--payload",
        default="all",
        help="coverage fraction(s): 0, 1/3, 2/3, 1, a comma list, or 'all'",
    )
    p_base.add_argument("--spacing", type=float, default=5.0, help="seconds between requests")

    p_scale = sub.add_parser("scale", help="N users across a ramp-up window")
    _common_args(p_scale)
    p_scale.add_argument("--threads", type=int, required=True)
    p_scale.add_argument("--ramp-up", type=float, default=0.0)

    p_sweep = sub.add_parser("sweep", help="scalability over several thread counts")
    _common_args(p_sweep)
    p_sweep.add_argument("--threads-list", required=True, help="comma-separated thread counts")
    p_sweep.add_argument("--ramp-up", type=float, default=0.0)

    p_size = sub.add_parser("size", help="sizing calculator M = N / R")
    p_size.add_argument("--n", type=int, required=True, help="concurrent user capacity")
    p_size.add_argument("--r", required=True, help="concurrency ratio in (0, 1], e.g. 0.2")

    args = parser.parse_args(argv)

    if args.command == "size":
        try:
            m = size_deployment(args.n, args.r)
        except (ValueError, ZeroDivisionError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 1
        print(f"M = {m} subscribed users (N={args.n}, R={args.r})")
        return 0

    stats = json.loads(Path(args.tree_stats).read_text(encoding="utf-8"))
    if args.command == "baseline":
        payloads = _ALL_PAYLOADS if args.payload == "all" else args.payload.split(",")
        scenario = LoadScenario(
            kind="baseline",
            target=args.target,
            payloads=[Fraction(p) for p in payloads],
            iterations=args.iterations,
            spacing_s=args.spacing,
            seed=args.seed,
            sentence=args.sentence,
            keep_alive=args.keep_alive,
            timeout_s=args.timeout,
            threshold_ms=args.threshold_ms,
            group_gap_s=args.group_gap,
        )
        report = run_baseline(scenario, stats)
    else:
        if args.command == "scale":
            thread_counts = [args.threads]
        else:
            thread_counts = [int(n) for n in args.threads_list.split(",")]
        scenario = LoadScenario(
            kind="scalability",
            target=args.target,
            payloads=[Fraction(1)],
            thread_counts=thread_counts,
            ramp_up_s=args.ramp_up,
            iterations=args.iterations,
            seed=args.seed,
            sentence=args.sentence,
            keep_alive=args.keep_alive,
            timeout_s=args.timeout,
            threshold_ms=args.threshold_ms,
            group_gap_s=args.group_gap,
        )
        report = run_scalability(scenario, stats)

    paths = emit_report(report, args.out)
    summary = report_summary(report)
    for group in summary["groups"]:
        mean = group["response_ms_mean"]
        proc = group["processing_ms_mean"]
        if group["valid"]:
            print(
                f"{group['label']:>14}: response {mean:8.1f} ms  processing {proc:8.1f} ms  "
                f"({group['requests']} requests, {group['failed']} failed)"
            )
        else:
            print(f"{group['label']:>14}: no successful requests")
    if "breakpoint_n" in summary:
        print(f"breakpoint N (mean response > {summary['threshold_ms']:.0f} ms): {summary['breakpoint_n']}")
    print(f"report written to {paths['summary'].parent}")
    return 0 if summary["valid"] and not report.partial else 1


def _common_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--target", required=True, help="hub base URL")
    parser.add_argument("--tree-stats", required=True, help="stats JSON of the server's tree")
    parser.add_argument("--out", required=True, help="output directory")
    parser.add_argument("--iterations", type=int, default=30)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--sentence", default="tell me something interesting")
    parser.add_argument("--keep-alive", action="store_true", help="reuse connections (default: fresh per request)")
    parser.add_argument("--timeout", type=float, default=120.0)
    parser.add_argument("--threshold-ms", type=float, default=1000.0)
    parser.add_argument("--group-gap", type=float, default=5.0, help="seconds between repeated groups")


if __name__ == "__main__":
    raise SystemExit(main())
