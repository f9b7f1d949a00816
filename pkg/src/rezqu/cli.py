"""Command line entry point: ``rezqu <experiment> --config cfg.json``.

Exit codes: 0 success, 2 configuration error, 3 numerical failure,
4 optimizer stagnation (only with ``--strict``; otherwise a warning).
"""

from __future__ import annotations

import argparse
import datetime as _dt
import json
import logging
import sys
from dataclasses import replace
from pathlib import Path

from . import __version__
from .config import (
    EXPERIMENTS,
    ConfigError,
    ExperimentConfig,
    load_config,
    parse_config,
)
from .dynamics import StepSizeError
from .experiments import metadata, render_csv, render_json, run, workers_for
from .measurement import ExceptionalPointError
from .move import DesignFailure, InvalidPulse
from .spectra import LabelingError

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_STAGNATION = 4

NUMERICAL_ERRORS = (DesignFailure, InvalidPulse, StepSizeError, LabelingError, ExceptionalPointError, RuntimeError)

log = logging.getLogger("rezqu")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="rezqu", description="Qubit-memory-bus simulations and MOVE pulse design.")
    ap.add_argument("--version", action="version", version=f"rezqu {__version__}")
    sub = ap.add_subparsers(dest="experiment", required=True)
    for name in EXPERIMENTS:
        p = sub.add_parser(name)
        p.add_argument("--config", type=Path, help="JSON config; defaults are used when omitted")
        p.add_argument("--out", type=Path, help="output file (stdout if omitted)")
        p.add_argument("--format", choices=("csv", "json"))
        p.add_argument("--seed", type=int)
        p.add_argument("--workers", type=int)
        p.add_argument("--reproducible", action="store_true", help="omit the timestamp so output is byte-stable")
        p.add_argument("--strict", action="store_true", help="treat optimizer stagnation as failure")
        p.add_argument("-v", "--verbose", action="store_true")
    return ap


def resolve_config(args) -> ExperimentConfig:
    if args.config is not None:
        cfg = load_config(args.config)
        if cfg.experiment != args.experiment:
            raise ConfigError("experiment", f"config is for {cfg.experiment!r}, not {args.experiment!r}")
    else:
        cfg = parse_config({"experiment": args.experiment})
    out = cfg.output
    if args.out is not None:
        out = replace(out, path=str(args.out))
    if args.format is not None:
        out = replace(out, format=args.format)
    if args.workers is not None and args.workers < 1:
        raise ConfigError("workers", "must be at least 1")
    return replace(cfg, output=out, seed=cfg.seed if args.seed is None else args.seed)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        cfg = resolve_config(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        result = run(cfg, workers_for(cfg, args.workers))
    except NUMERICAL_ERRORS as exc:
        print(f"numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    stamp = None if args.reproducible else _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")
    meta = metadata(cfg, stamp)
    text = render_json(result, meta) if cfg.output.format == "json" else render_csv(result, meta)
    if cfg.output.path:
        path = Path(cfg.output.path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
        for name, rec in result.records.items():
            path.with_name(f"{path.stem}.{name}.json").write_text(json.dumps(rec, indent=2) + "\n")
    else:
        sys.stdout.write(text)

    for msg in result.warnings:
        print(f"warning: {msg}", file=sys.stderr)
    if result.warnings and args.strict:
        return EXIT_STAGNATION
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
