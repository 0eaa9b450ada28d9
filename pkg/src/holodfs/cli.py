"""``holodfs`` command line.

    holodfs <subcommand> --config <path> [--out <path>] [--seed <u64>] [--tolerance <real>]

Exit codes: 0 all checks pass, 1 a numerical check failed, 2 bad config.
"""
from __future__ import annotations

import argparse
import sys
import time
from dataclasses import replace
from pathlib import Path

from .config import ConfigError, ExperimentConfig, load_config, parse_config
from .experiments import emit_csv, run

SUBCOMMANDS = {
    "verify-1q": "verify_1q",
    "verify-2q": "verify_2q",
    "synthesize-1q": "synthesize_1q",
    "synthesize-2q": "synthesize_2q",
    "noise-sweep": "noise_sweep",
    "robustness-sweep": "robustness_sweep",
    "selftest": "selftest",
}

EXIT_OK, EXIT_CHECK_FAILED, EXIT_CONFIG = 0, 1, 2


def _u64(text: str) -> int:
    value = int(text)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


def _tolerance(text: str) -> float:
    value = float(text)
    if not value >= 0:
        raise argparse.ArgumentTypeError("tolerance must be a non-negative number")
    return value


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="holodfs",
                                description="Holonomic gates in decoherence-free subspaces")
    sub = p.add_subparsers(dest="command", required=True)
    for name in SUBCOMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--config", required=name != "selftest", help="JSON experiment config")
        sp.add_argument("--out", help="report path (overrides output.report)")
        sp.add_argument("--seed", type=_u64, help="master seed (overrides the config)")
        sp.add_argument("--tolerance", type=_tolerance,
                        help="condition-check tolerance (overrides tolerances.condition)")
    return p


def _load(args) -> ExperimentConfig:
    experiment = SUBCOMMANDS[args.command]
    if args.config:
        cfg = load_config(args.config, experiment)
    else:
        cfg = parse_config({}, experiment)
    if args.seed is not None:
        cfg = replace(cfg, seed=args.seed)
    if args.tolerance is not None:
        cfg = replace(cfg, tolerances={**cfg.tolerances, "condition": args.tolerance})
    if args.out:
        cfg = replace(cfg, output={**cfg.output, "report": args.out})
    return cfg


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _load(args)
    except ConfigError as exc:
        print(f"holodfs: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    start = time.perf_counter()
    report = run(cfg)
    elapsed = time.perf_counter() - start

    text = report.dumps()
    report_path = cfg.output.get("report")
    try:
        if report_path:
            Path(report_path).write_text(text, encoding="utf-8", newline="\n")
        csv_path = cfg.output.get("csv") or (str(Path(report_path).with_suffix(".csv"))
                                             if report_path and report.csv_header else None)
        if csv_path and report.csv_header:
            emit_csv(csv_path, report.csv_header, report.csv_rows)
    except OSError as exc:
        print(f"holodfs: cannot write output: {exc}", file=sys.stderr)
        return EXIT_CHECK_FAILED

    # the summary moves to stderr when stdout carries the report itself
    summary = sys.stdout if report_path else sys.stderr
    if not report_path:
        sys.stdout.write(text)
    for check in report.checks:
        print(check.line(), file=summary)
    status = "PASS" if report.passed else "FAIL"
    n = len(report.checks)
    print(f"{cfg.experiment}: {status} ({n} check{'' if n == 1 else 's'}, {elapsed:.2f} s)", file=summary)
    worst = report.worst_failure()
    if worst is not None:
        detail = f" at {worst.witness}" if worst.witness is not None else ""
        print(f"holodfs: worst violation: {worst.name} = {worst.value!r} > {worst.tolerance!r}{detail}",
              file=sys.stderr)
        return EXIT_CHECK_FAILED
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
