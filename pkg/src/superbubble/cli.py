"""Command-line front end.

Exit codes: 0 ok, 2 parse/IO error, 3 cyclic input, 4 oracle cap exceeded,
5 detector/oracle mismatch.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from . import __version__
from ._accel import BACKEND
from .bench import per_doubling_ratios, run_bench, to_csv
from .detector import detect, trace_detect
from .errors import InfeasibleSpecError, SuperbubbleError
from .generate import GenSpec, generate
from .graph import Graph, augment, export_dot, load_edge_list, write_edge_list
from .oracle import DEFAULT_CAP
from .topo import check_ordering_properties, topological_sort
from .verify import run_campaign, verify_graph

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_CYCLE = 3
EXIT_CAP = 4
EXIT_MISMATCH = 5

U64_MAX = 2**64 - 1


def _u64(text: str) -> int:
    try:
        value = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if not 0 <= value <= U64_MAX:
        raise argparse.ArgumentTypeError(f"seed must be in 0..2^64-1, got {value}")
    return value


def _nonneg(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {value}")
    return value


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def _sizes(text: str) -> list[int]:
    try:
        sizes = [int(float(s)) for s in text.split(",") if s.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad size list: {text!r}")
    if not sizes or any(s < 2 for s in sizes):
        raise argparse.ArgumentTypeError("sizes must be integers >= 2")
    return sizes


def _read_graph(path: str) -> Graph:
    if path == "-":
        data = sys.stdin.buffer.read()
    else:
        with open(path, "rb") as fh:
            data = fh.read()
    g, _ = load_edge_list(data)
    return g


def _spec_from(args, seed: Optional[int] = None) -> GenSpec:
    return GenSpec(
        n=args.n,
        extra_edges=args.extra_edges,
        planted=args.planted,
        seed=args.seed if seed is None else seed,
        max_outdeg=args.max_outdeg,
        roots=args.roots,
        span=args.span,
    )


def _add_input(p: argparse.ArgumentParser, required: bool = True) -> None:
    p.add_argument("input_pos", nargs="?", metavar="INPUT", help="edge-list file ('-' for stdin)")
    p.add_argument("--input", "-i", dest="input", metavar="PATH", help="edge-list file ('-' for stdin)")
    p.set_defaults(_input_required=required)


def _add_gen(p: argparse.ArgumentParser, n_default: Optional[int]) -> None:
    p.add_argument("--seed", type=_u64, default=0, help="64-bit generator seed (default 0)")
    p.add_argument("--n", type=_positive, default=n_default, help="vertex count")
    p.add_argument("--extra-edges", type=_nonneg, default=0, help="edges beyond the spanning forest")
    p.add_argument("--planted", type=_nonneg, default=0, help="planted diamond superbubbles")
    p.add_argument("--max-outdeg", type=_positive, default=None, help="cap on out-degree, e.g. 4 for DNA-like graphs")
    p.add_argument("--roots", type=_positive, default=1, help="spanning-forest roots (sources)")
    p.add_argument("--span", type=_positive, default=None, help="max topological distance of extra edges")


def _input_path(args) -> Optional[str]:
    if args.input and args.input_pos:
        raise SystemExit("superbubble: error: give the input either positionally or with --input, not both")
    return args.input or args.input_pos


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="superbubble", description="Linear-time superbubble detection in DAGs.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__} ({BACKEND})")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("detect", help="report all superbubbles of an edge-list graph")
    _add_input(p)
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="fmt", action="store_const", const="json", help="JSON report (default)")
    fmt.add_argument("--dot", dest="fmt", action="store_const", const="dot", help="Graphviz DOT with superbubbles marked")
    p.set_defaults(fmt="json", func=cmd_detect)

    p = sub.add_parser("verify", help="compare the detector against the brute-force oracle")
    _add_input(p, required=False)
    _add_gen(p, n_default=None)
    p.add_argument("--count", type=_positive, default=1,
                   help="number of consecutive seeds starting at --seed")
    p.add_argument("--jobs", type=_positive, default=1, help="worker processes")
    p.add_argument("--oracle-cap", type=_positive, default=DEFAULT_CAP, help=f"max n for the oracle (default {DEFAULT_CAP})")
    p.add_argument("--quiet", "-q", action="store_true", help="only print mismatches and the summary")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("generate", help="write a seeded random DAG as an edge list")
    _add_gen(p, n_default=None)
    p.add_argument("--output", "-o", metavar="PATH", help="output file (default stdout)")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("bench", help="time the three phases on growing generated graphs")
    p.add_argument("--sizes", type=_sizes, default=[100_000, 200_000, 400_000], help="comma-separated n values")
    p.add_argument("--edge-factor", type=float, default=2.0, help="target m/n (default 2)")
    p.add_argument("--repeats", type=_positive, default=3, help="best-of repeats per size")
    p.add_argument("--seed", type=_u64, default=0)
    p.add_argument("--planted", type=_nonneg, default=0)
    p.add_argument("--max-outdeg", type=_positive, default=None)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("trace", help="JSON event log of the scan plus an ordering diagnostic")
    _add_input(p)
    p.set_defaults(func=cmd_trace)

    p = sub.add_parser("dot", help="Graphviz DOT export with superbubbles as clusters")
    _add_input(p)
    p.set_defaults(func=cmd_dot)
    return parser


def cmd_detect(args) -> int:
    g = _read_graph(_input_path(args))
    report = detect(g)
    if args.fmt == "dot":
        sys.stdout.write(export_dot(g, report))
    else:
        print(report.to_json())
    return EXIT_OK


def cmd_dot(args) -> int:
    g = _read_graph(_input_path(args))
    sys.stdout.write(export_dot(g, detect(g)))
    return EXIT_OK


def cmd_trace(args) -> int:
    g = _read_graph(_input_path(args))
    report, events = trace_detect(g)
    aug = augment(g)
    ordering = check_ordering_properties(aug, topological_sort(aug))
    out = {
        "report": report.to_dict(),
        "validateCalls": report.validate_calls,
        "events": events,
        "ordering": {
            "ok": ordering.ok,
            "bijection": ordering.bijection_ok,
            "spanningTree": ordering.tree_ok,
            "edgeViolations": [list(e) for e in ordering.edge_violations],
            "intervalSourcesChecked": ordering.interval_sources_checked,
            "intervalCounterexample": ordering.interval_counterexample,
        },
    }
    print(json.dumps(out, indent=2))
    return EXIT_OK


def cmd_verify(args) -> int:
    path = _input_path(args)
    if path is not None:
        res = verify_graph(_read_graph(path), cap=args.oracle_cap)
        print(res.describe())
        return EXIT_OK if res.ok else EXIT_MISMATCH

    seeds = range(args.seed, min(args.seed + args.count, U64_MAX + 1))
    spec = _spec_from(args) if args.n is not None else None
    results = run_campaign(seeds, cap=args.oracle_cap, jobs=args.jobs, spec=spec)
    bad = [r for r in results if not r.ok]
    for r in results:
        if not (args.quiet and r.ok):
            print(r.describe())
    over = sum(not r.work_bound_ok for r in results)
    print(f"# verified {len(results)} graphs: {len(results) - len(bad)} ok, {len(bad)} mismatched, "
          f"{over} over the 4(n+m) validate-call bound")
    if bad:
        print("# mismatched seeds: " + " ".join(str(r.seed) for r in bad))
    return EXIT_MISMATCH if bad else EXIT_OK


def cmd_generate(args) -> int:
    if args.n is None:
        raise SystemExit("superbubble generate: error: --n is required")
    spec = _spec_from(args)
    text = write_edge_list(generate(spec), header=spec.header())
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_bench(args) -> int:
    records = run_bench(args.sizes, edge_factor=args.edge_factor, seed=args.seed, planted=args.planted,
                        max_outdeg=args.max_outdeg, repeats=args.repeats)
    sys.stdout.write(to_csv(records))
    for (a, b), ratio in zip(zip(records, records[1:]), per_doubling_ratios(records)):
        print(f"# per-doubling ratio n={a.n}->{b.n}: {ratio:.3f}")
    bound_ok = all(r.validate_calls <= 4 * (r.n + r.m) for r in records)
    print(f"# validate calls within 4(n+m): {'yes' if bound_ok else 'NO'}")
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "_input_required", False) and _input_path(args) is None:
        parser.error(f"{args.command}: an input edge-list file is required")
    try:
        return args.func(args)
    except InfeasibleSpecError as exc:
        print(f"superbubble: error: infeasible spec: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except SuperbubbleError as exc:
        print(f"superbubble: error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"superbubble: error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
