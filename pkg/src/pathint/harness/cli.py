"""Command line entry point: ``pathint run | schemes | check | schema``."""

from __future__ import annotations

import argparse
import json
import sys

from ..errors import ConfigError
from .config import load_config

EXIT_OK, EXIT_NUMERIC, EXIT_CONFIG = 0, 1, 2


def _u64(text):
    v = int(text, 0)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def _positive_int(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="pathint", description="Lattice path-integral experiments.")
    sub = ap.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run one experiment from a config file")
    run.add_argument("--config", required=True, help="INI-style experiment file")
    run.add_argument("--seed", type=_u64, help="u64 seed, overrides numerics.seed")
    run.add_argument("--out", help="output directory (default: experiment.output or .)")
    run.add_argument("--threads", type=_positive_int, help="worker threads (fallback: PATHINT_THREADS)")
    run.add_argument("--timing", action="store_true", help="add a runtime_s column (breaks bitwise reruns)")
    sub.add_parser("schemes", help="list schemes and their fields")
    chk = sub.add_parser("check", help="run the acceptance suite")
    chk.add_argument("--only", type=int, action="append", help="criterion number (repeatable)")
    sub.add_parser("schema", help="print the CSV column schema as JSON")
    return ap


def _cmd_run(args) -> int:
    from .runner import run_experiment

    try:
        cfg = load_config(args.config)
        res = run_experiment(cfg, seed=args.seed, out_dir=args.out, threads=args.threads, timing=args.timing)
    except ConfigError as exc:
        for m in exc.messages:
            print(f"config error: {m}", file=sys.stderr)
        return EXIT_CONFIG
    print(f"wrote {res.csv_path} and {res.json_path} ({len(res.rows)} rows)")
    for f in res.failures:
        print(f"FAIL {f}", file=sys.stderr)
    return EXIT_OK if res.passed else EXIT_NUMERIC


def _cmd_check(args) -> int:
    from ..acceptance import run_criteria

    results = run_criteria(args.only)
    for r in results:
        print(r.line())
    return EXIT_OK if all(r.passed for r in results) else EXIT_NUMERIC


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "run":
        return _cmd_run(args)
    if args.command == "schemes":
        from .schemes import describe_schemes

        print(describe_schemes())
        return EXIT_OK
    if args.command == "schema":
        from .schemes import schema_document

        print(json.dumps(schema_document(), indent=2, sort_keys=True))
        return EXIT_OK
    return _cmd_check(args)


if __name__ == "__main__":
    sys.exit(main())
