"""Command-line entry point.

    batchplate pack INSTANCE [--iterations N] [--seed S] [--ordering ...]
    batchplate oracle INSTANCE [--limit N] [--full-rotation]
    batchplate space N
    batchplate experiment INSTANCE --mode ordering|height|filling|case-study
    batchplate convert TABLE --platform L W H [--name A1] [--out PATH]

INSTANCE is a JSON file or one of the bundled names (``case-study``,
``synthetic-15``, ``equal-height``, ``equal-filling``).
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from importlib import resources
from pathlib import Path

from . import __version__
from .bench import (DEFAULT_ITERATIONS, DEFAULT_SEED, run_attribute_experiment,
                    run_case_study, run_ordering_experiment)
from .formats import (dump_json, instance_from_table, instance_to_dict, layout_report,
                      parse_instance)
from .model import Instance, InstanceError, Platform, search_space_size
from .oracle import DEFAULT_LIMIT, OracleLimitExceeded, enumerate_optimal
from .packer import SearchConfig, multi_start
from .svg import render_svg

log = logging.getLogger("batchplate")

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_INVALID = 4
EXIT_LIMIT = 5

BUNDLED = {
    "case-study": "case_study.json",
    "synthetic-15": "synthetic_15.json",
    "equal-height": "equal_height.json",
    "equal-filling": "equal_filling.json",
}

_ORDERING_FLAGS = {"random": "random", "largest": "largest",
                   "smallest": "smallest", "as-given": "as-given"}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise _UsageError(message)


class _UsageError(Exception):
    pass


def read_instance(ref: str) -> Instance:
    path = Path(ref)
    if not path.exists() and ref in BUNDLED:
        text = resources.files("batchplate").joinpath("data", BUNDLED[ref]).read_text()
    else:
        try:
            text = path.read_text()
        except FileNotFoundError:
            raise FileNotFoundError(f"{ref}: file not found") from None
    return parse_instance(text)


def _threads(n: int) -> int:
    return n if n > 0 else (os.cpu_count() or 1)


def _write(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _summary(layout) -> dict:
    return {"parts": layout.part_names(), "covered_area_mm2": layout.covered_area,
            "coverage_pct": 100.0 * layout.coverage,
            "total_mass_mm3": layout.total_mass, "part_count": layout.part_count}


def cmd_pack(args) -> int:
    instance = read_instance(args.instance)
    config = SearchConfig(iterations=args.iterations, seed=args.seed,
                          ordering=_ORDERING_FLAGS[args.ordering], keep_top=args.top,
                          strict=args.strict,
                          insertion="append" if args.append else "in-place")
    result = multi_start(instance, config, workers=_threads(args.threads))
    winner = result.winner
    report = layout_report(
        winner.layout, economics=instance.economics,
        provenance={"seed": config.seed, "iterations": config.iterations,
                    "ordering": config.ordering, "candidate_rank": 0,
                    "iteration": winner.iteration})
    report["candidates"] = [dict(rank=i, iteration=c.iteration, **_summary(c.layout))
                            for i, c in enumerate(result.candidates)]
    best = result.best_coverage
    report["max_coverage"] = dict(iteration=best.iteration, **_summary(best.layout))
    _write(dump_json(report), args.out)
    if args.svg:
        Path(args.svg).write_text(render_svg(winner.layout))
    if args.out:
        print(f"winner: {winner.layout.part_count} parts, "
              f"{100 * winner.layout.coverage:.2f}% covered, "
              f"{winner.layout.total_mass:.2f} mm3 (iteration {winner.iteration})")
    return EXIT_OK


def cmd_oracle(args) -> int:
    instance = read_instance(args.instance)
    res = enumerate_optimal(instance, args.limit, full_rotation=args.full_rotation,
                            workers=_threads(args.threads))
    doc = {
        "canonical_sequences": res.canonical_sequences,
        "sequences_evaluated": res.sequences_evaluated,
        "best_by_mass": layout_report(res.best_by_mass, economics=instance.economics),
        "best_by_coverage": layout_report(res.best_by_coverage, economics=instance.economics),
    }
    _write(dump_json(doc), args.out)
    return EXIT_OK


def cmd_space(args) -> int:
    print(search_space_size(args.n))
    return EXIT_OK


def cmd_experiment(args) -> int:
    if args.mode == "case-study":
        report = run_case_study(seed=args.seed, iterations=args.iterations,
                                instance=read_instance(args.instance or "case-study"))
    else:
        if not args.instance:
            raise _UsageError("experiment needs an instance for this mode")
        instance = read_instance(args.instance)
        if args.mode == "ordering":
            report = run_ordering_experiment(instance, args.iterations, args.seed)
        else:
            report = run_attribute_experiment(instance, args.mode, args.iterations,
                                              args.seed, keep_top=args.top)
    _write(report.to_csv() if args.format == "csv" else dump_json(report.to_dict()), args.out)
    return EXIT_OK


def cmd_convert(args) -> int:
    length, width, height = args.platform
    try:
        text = Path(args.table).read_text()
    except FileNotFoundError:
        raise FileNotFoundError(f"{args.table}: file not found") from None
    instance = instance_from_table(text, Platform(args.name, length, width, height))
    _write(dump_json(instance_to_dict(instance)), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="batchplate", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("pack", help="multi-start packing plus winner selection")
    p.add_argument("instance")
    p.add_argument("--iterations", type=int, default=DEFAULT_ITERATIONS)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--ordering", choices=sorted(_ORDERING_FLAGS), default="random")
    p.add_argument("--top", type=int, default=8)
    p.add_argument("--strict", action="store_true",
                   help="use strict < comparisons when fitting parts")
    p.add_argument("--append", action="store_true",
                   help="append new free areas to the list instead of replacing in place")
    p.add_argument("--svg")
    p.add_argument("--out")
    p.add_argument("--threads", type=int, default=1, help="0 = one per CPU")
    p.set_defaults(func=cmd_pack)

    p = sub.add_parser("oracle", help="exhaustive enumeration of orderings")
    p.add_argument("instance")
    p.add_argument("--limit", type=int, default=DEFAULT_LIMIT)
    p.add_argument("--full-rotation", action="store_true")
    p.add_argument("--out")
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("space", help="print 2^n * n! exactly")
    p.add_argument("n", type=int)
    p.set_defaults(func=cmd_space)

    p = sub.add_parser("experiment", help="run a bench experiment")
    p.add_argument("instance", nargs="?")
    p.add_argument("--mode", required=True,
                   choices=["ordering", "height", "filling", "case-study"])
    p.add_argument("--iterations", type=int, default=DEFAULT_ITERATIONS)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--top", type=int, default=8)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--out")
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("convert", help="turn a delimited part table into an instance file")
    p.add_argument("table")
    p.add_argument("--platform", nargs=3, type=float, required=True,
                   metavar=("LENGTH", "WIDTH", "HEIGHT"))
    p.add_argument("--name", default="A1")
    p.add_argument("--out")
    p.set_defaults(func=cmd_convert)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError:
        return EXIT_USAGE
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except _UsageError as exc:
        print(f"batchplate: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OracleLimitExceeded as exc:
        print(f"batchplate: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    except (InstanceError, ValueError, json.JSONDecodeError) as exc:
        print(f"batchplate: invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"batchplate: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
