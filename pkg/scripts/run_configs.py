"""Run every shipped config through the CLI and report exit codes and timings.

usage: python scripts/run_configs.py [--out-dir results] [--only piecewise ...]
"""

import argparse
import json
import sys
import time
from pathlib import Path

from rezqu.cli import main

ROOT = Path(__file__).resolve().parent.parent


def parse_args():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out-dir", type=Path, default=ROOT / "results")
    ap.add_argument("--only", nargs="*", help="substrings of config names to run")
    ap.add_argument("--format", choices=("csv", "json"), default="csv")
    ap.add_argument("--strict", action="store_true")
    return ap.parse_args()


def run_all(args) -> int:
    worst = 0
    for cfg in sorted((ROOT / "configs").glob("*.json")):
        if args.only and not any(s in cfg.stem for s in args.only):
            continue
        experiment = json.loads(cfg.read_text())["experiment"]
        out = args.out_dir / f"{cfg.stem}.{args.format}"
        argv = [experiment, "--config", str(cfg), "--out", str(out), "--format", args.format, "--reproducible"]
        if args.strict:
            argv.append("--strict")
        t0 = time.perf_counter()
        code = main(argv)
        print(f"{cfg.stem:24s} exit {code}  {time.perf_counter() - t0:6.1f} s  -> {out}")
        worst = max(worst, code)
    return worst


if __name__ == "__main__":
    sys.exit(run_all(parse_args()))
