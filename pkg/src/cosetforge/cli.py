"""Command-line entry point: ``cosetforge <mode> [flags]``.

Exit codes: 0 success, 2 bad configuration, 3 verification failure,
4 sampling or retry cap exceeded. Errors go to stderr as a JSON object.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys

from .errors import CosetForgeError
from .experiments import CSV_COLUMNS, DEFAULT_BENCH_SIZES, MODES, ExperimentConfig, run_experiment


def _common() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("--p", type=int, help="field characteristic")
    parent.add_argument("--m", type=int, default=1, help="field extension degree")
    parent.add_argument("--n", type=int, help="odd modulus for Z/n")
    parent.add_argument("--char", help="character index; comma list for Z/n (one per prime factor)")
    parent.add_argument("--shift", default="random", help="integer shift or 'random'")
    parent.add_argument("--trials", type=int, default=1000)
    parent.add_argument("--seed", type=int, default=int(os.environ.get("COSETFORGE_SEED", "0")))
    parent.add_argument("--quantize-bits", type=int, default=None)
    parent.add_argument("--confidence", type=int, default=10)
    parent.add_argument("--sizes", default=",".join(map(str, DEFAULT_BENCH_SIZES)), help="bench sizes")
    parent.add_argument("--format", choices=("json", "csv"), default="json")
    parent.add_argument("--out", default=None, help="write the report here instead of stdout")
    return parent


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cosetforge", description="Shifted multiplicative character experiments")
    sub = parser.add_subparsers(dest="mode", required=True)
    parent = _common()
    for mode in MODES:
        sub.add_parser(mode, parents=[parent])
    return parser


def config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    return ExperimentConfig(
        mode=args.mode,
        p=args.p,
        m=args.m,
        n=args.n,
        char=args.char,
        shift=args.shift,
        trials=args.trials,
        seed=args.seed,
        quantize_bits=args.quantize_bits,
        confidence=args.confidence,
        sizes=tuple(int(s) for s in args.sizes.split(",") if s),
        output=args.out,
        format=args.format,
    )


def _csv_rows(report: dict) -> list[dict]:
    if "rows" in report:
        return report["rows"]
    if report.get("mode") == "dump-spectrum":
        return [{"y": y, "re": re, "im": im} for y, (re, im) in enumerate(report["spectrum"]["values"])]
    return [report]


def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, sort_keys=True, indent=2) + "\n"
    columns = CSV_COLUMNS[report["mode"]]
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=columns, extrasaction="ignore", lineterminator="\n")
    writer.writeheader()
    for row in _csv_rows(report):
        writer.writerow({k: json.dumps(v) if isinstance(v, (list, dict)) else v for k, v in row.items()})
    return buf.getvalue()


def _fail(code: int, kind: str, message: str) -> int:
    sys.stderr.write(json.dumps({"error": kind, "message": message, "exitCode": code}, sort_keys=True) + "\n")
    return code


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        config = config_from_args(args)
        report = run_experiment(config)
    except CosetForgeError as exc:
        return _fail(exc.exit_code, type(exc).__name__, str(exc))
    except (ValueError, TypeError) as exc:
        return _fail(2, type(exc).__name__, str(exc))
    text = render(report, config.format)
    if config.output:
        with open(config.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if config.mode == "verify" and not report["passed"]:
        return _fail(3, "VerificationError", "invariant suite reported failures")
    return 0


if __name__ == "__main__":
    sys.exit(main())
