"""Command line entry point.

Exit codes: 0 success, 1 configuration error, 2 data error, 3 method failure.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .datasets import DATASETS
from .estimators import METHODS
from .experiment import ConfigError, DataError, ExperimentConfig, bounds_report, run_experiment
from .fixtures import FixtureMissingError, run_fixture_suite

EXIT_OK, EXIT_CONFIG, EXIT_DATA, EXIT_METHOD = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _method_list(text: str) -> tuple[str, ...]:
    return tuple(t.strip() for t in text.split(",") if t.strip())


def _add_graph_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--graph", required=True, metavar="PATH",
                   help=f"edge-list file, or a bundled dataset name ({', '.join(DATASETS)})")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--grounded", type=_int_list, metavar="IDS", help='grounded node labels, e.g. "1,5,9"')
    g.add_argument("--random-grounded", type=int, metavar="N", help="sample N grounded nodes uniformly")
    p.add_argument("--seed", type=int, default=0, metavar="S", help="seed for grounded sampling (default 0)")
    p.add_argument("--epsilon", type=float, default=1e-3, metavar="F", help="eigensolver tolerance (default 1e-3)")
    p.add_argument("--dense-threshold", type=int, default=2048, metavar="N",
                   help="largest system solved densely (default 2048)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="groundedge",
                     description="Add edges to a graph to maximise the smallest grounded Laplacian eigenvalue.")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    run = sub.add_parser("run", help="run selection methods and write a CSV trace")
    _add_graph_args(run)
    run.add_argument("--k", type=int, required=True, metavar="K", help="number of edges to add")
    run.add_argument("--methods", type=_method_list, default=("greedy", "fast"), metavar="LIST",
                     help=f"comma-separated subset of {','.join(METHODS)} (default greedy,fast)")
    run.add_argument("--exhaustive-cap", type=int, default=10**6, metavar="N",
                     help="largest number of subsets exhaustive search may enumerate (default 1000000)")
    run.add_argument("--out", metavar="PATH", help="CSV output path (default: stdout)")
    run.add_argument("--no-timing", action="store_true", help="write elapsed_ms as 0 for byte-reproducible output")

    b = sub.add_parser("bounds", help="print approximation-ratio bounds")
    _add_graph_args(b)

    fx = sub.add_parser("fixtures", help="run the worked-example regression checks")
    fx.add_argument("--json", metavar="PATH", help="also write the machine-readable report here")

    sub.add_parser("datasets", help="list bundled datasets")
    return parser


def _config(args, k=1, methods=("fast",), cap=10**6, out=None, timing=True) -> ExperimentConfig:
    return ExperimentConfig(
        graph_path=args.graph, k=k, methods=methods, grounded=args.grounded,
        random_grounded=args.random_grounded, seed=args.seed, epsilon=args.epsilon,
        dense_threshold=args.dense_threshold, exhaustive_cap=cap, output_path=out, timing=timing)


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:  # usage errors exit 1, --help exits 0
        return int(exc.code or 0)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2),
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "datasets":
            for name, desc in DATASETS.items():
                print(f"{name:<16} {desc}")
            return EXIT_OK
        if args.command == "fixtures":
            report = run_fixture_suite()
            print(report.table())
            print(f"{len(report.checks) - len(report.failed)}/{len(report.checks)} checks passed")
            if args.json:
                Path(args.json).write_text(report.to_json() + "\n", encoding="utf-8")
            return EXIT_OK if report.passed else EXIT_METHOD
        if args.command == "bounds":
            sys.stdout.write(bounds_report(_config(args)))
            return EXIT_OK
        cfg = _config(args, k=args.k, methods=args.methods, cap=args.exhaustive_cap,
                      out=args.out, timing=not args.no_timing)
        outcome = run_experiment(cfg, stream=sys.stderr if args.out is None else sys.stdout)
        if args.out is None:
            sys.stdout.write(outcome.csv_text)
        return EXIT_OK if outcome.ok else EXIT_METHOD
    except ConfigError as exc:
        print(f"groundedge: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (DataError, FixtureMissingError) as exc:
        print(f"groundedge: data error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
