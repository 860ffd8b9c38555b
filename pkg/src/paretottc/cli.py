"""Command-line entry point.

Exit codes: 0 success, 1 domain error (bad instance, non-PO allocation, failed
check), 2 usage error. Output never uses colour, so NO_COLOR needs no handling.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from pathlib import Path

from . import bench as bench_mod
from .enumerator import brute_force_frontier, itea, verify_partition
from .errors import ParetoTTCError
from .instances import (
    format_allocation,
    parse_allocation,
    parse_instance,
    random_profile,
    serialize_frontier,
    serialize_profile,
)
from .inverse import invttc
from .selection import Criterion, score, select_best
from .ttc import BRUTE_PO_CAP, forward_ttc, is_po_bruteforce, is_po_fixedpoint, ttc_outcome


def _add_format(p):
    p.add_argument("--format", choices=("text", "structured"), default="text")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="paretottc", description="Pareto frontier enumeration by inverse TTC")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="write a random preference profile")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out")
    _add_format(p)

    p = sub.add_parser("ttc", help="run TTC from an endowment")
    p.add_argument("--profile", required=True)
    p.add_argument("--endowment", required=True, help='one-based rooms in agent order, e.g. "3 4 2 1 5"')
    _add_format(p)

    p = sub.add_parser("invttc", help="list every endowment that TTC maps to a PO allocation")
    p.add_argument("--profile", required=True)
    p.add_argument("--allocation", required=True)
    _add_format(p)

    for name, text in (("itea", "enumerate the frontier by inverse TTC"), ("brute", "enumerate by brute force")):
        p = sub.add_parser(name, help=text)
        p.add_argument("--profile", required=True)
        p.add_argument("--classes", action="store_true", help="also list each preimage class")
        _add_format(p)

    p = sub.add_parser("select", help="best frontier member under a criterion")
    p.add_argument("--profile", required=True)
    p.add_argument("--criterion", required=True, choices=Criterion.names())
    _add_format(p)

    p = sub.add_parser("bench", help="time itea against brute force on random profiles")
    p.add_argument("--n-min", type=int, default=3)
    p.add_argument("--n-max", type=int, default=9)
    p.add_argument("--instances", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="bench.csv")
    p.add_argument("--methods", default="itea,brute")
    p.add_argument("--workers", type=int)
    p.add_argument("--time-limit", type=float, default=600.0, help="seconds per instance and method")
    p.add_argument("--summary-csv")
    p.add_argument("--chart", help="write an SVG line chart of mean times")

    p = sub.add_parser("verify", help="cross-check itea against the brute-force oracles")
    p.add_argument("--profile", required=True)
    _add_format(p)
    return parser


def _load(path):
    return parse_instance(Path(path).read_text())


def _cmd_gen(args):
    profile = random_profile(args.n, args.seed)
    text = serialize_profile(profile, args.format, seed=args.seed)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _cmd_ttc(args):
    profile = _load(args.profile).profile
    endowment = parse_allocation(args.endowment, profile.n)
    outcome, trace = forward_ttc(profile, endowment)
    rounds = [[[(a + 1, r + 1) for a, r in cycle] for cycle in rnd] for rnd in trace.rounds]
    if args.format == "structured":
        print(json.dumps({"allocation": outcome.one_based(), "rounds": rounds}))
        return
    print("allocation", format_allocation(outcome))
    for k, rnd in enumerate(rounds, start=1):
        cycles = " ".join("(" + " ".join(f"{a}:{r}" for a, r in c) + ")" for c in rnd)
        print(f"round {k}: {cycles}")


def _cmd_invttc(args):
    profile = _load(args.profile).profile
    pre = invttc(profile, parse_allocation(args.allocation, profile.n))
    members = sorted(pre.members)
    if args.format == "structured":
        print(
            json.dumps(
                {
                    "source": pre.source.one_based(),
                    "size": len(members),
                    "states_visited": pre.states_visited,
                    "members": [[r + 1 for r in m] for m in members],
                }
            )
        )
        return
    print("source", format_allocation(pre.source))
    print("preimage", len(members))
    print("states_visited", pre.states_visited)
    for m in members:
        print(format_allocation(m))


def _cmd_enumerate(args):
    profile = _load(args.profile).profile
    frontier = (itea if args.command == "itea" else brute_force_frontier)(profile)
    sys.stdout.write(serialize_frontier(frontier, with_classes=args.classes, fmt=args.format))


def _cmd_select(args):
    profile = _load(args.profile).profile
    criterion = Criterion(args.criterion)
    frontier = itea(profile, classes=False)
    best = select_best(profile, frontier, criterion)
    value = score(profile, best, criterion)
    if args.format == "structured":
        print(json.dumps({"criterion": criterion.value, "allocation": [r + 1 for r in best], "score": value}))
    else:
        print("allocation", format_allocation(best))
        print(f"{criterion.value} {value}")


def _cmd_bench(args):
    config = bench_mod.BenchConfig(
        n_min=args.n_min,
        n_max=args.n_max,
        instances_per_n=args.instances,
        base_seed=args.seed,
        methods=tuple(m.strip() for m in args.methods.split(",") if m.strip()),
        output=args.out,
        time_limit=args.time_limit,
        workers=args.workers,
    )
    records = bench_mod.run_benchmark(config)
    rows = bench_mod.summarize(records)
    sys.stdout.write(bench_mod.render_summary(rows, workers=config.worker_count()))
    if args.summary_csv:
        Path(args.summary_csv).write_text(bench_mod.summary_csv(rows))
    if args.chart:
        bench_mod.write_chart(rows, args.chart, workers=config.worker_count())


def verify_profile(profile) -> dict[str, bool]:
    """Every oracle check on one profile, by name."""
    n = profile.n
    fast = itea(profile)
    slow = brute_force_frontier(profile)
    checks = {
        "frontier_equal": fast.members == slow.members,
        "partition": verify_partition(fast, n),
        "ttc_calls_equal_frontier": fast.stats.ttc_calls == len(fast.members),
        "brute_ttc_calls": slow.stats.ttc_calls == math.factorial(n),
        "soundness": all(ttc_outcome(profile, e) == c.source for c in fast.classes for e in c.members),
        "classes_equal": [c.members for c in fast.classes] == [c.members for c in slow.classes],
        "po_fixedpoint": all(is_po_fixedpoint(profile, m) for m in fast.members),
    }
    if n <= BRUTE_PO_CAP:
        checks["po_bruteforce"] = all(is_po_bruteforce(profile, m) for m in fast.members)
    return checks


def _cmd_verify(args):
    checks = verify_profile(_load(args.profile).profile)
    if args.format == "structured":
        print(json.dumps({k: "PASS" if v else "FAIL" for k, v in checks.items()}))
    else:
        for name, ok in checks.items():
            print(f"{'PASS' if ok else 'FAIL'} {name}")
    return 0 if all(checks.values()) else 1


COMMANDS = {
    "gen": _cmd_gen,
    "ttc": _cmd_ttc,
    "invttc": _cmd_invttc,
    "itea": _cmd_enumerate,
    "brute": _cmd_enumerate,
    "select": _cmd_select,
    "bench": _cmd_bench,
    "verify": _cmd_verify,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return COMMANDS[args.command](args) or 0
    except (ParetoTTCError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
