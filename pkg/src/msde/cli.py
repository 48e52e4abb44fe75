"""Command line entry point.

Subcommands:
    simulate     run a simulation config and write a binary trajectory
    estimate     evaluate estimators at base points from a stored trajectory
    experiment   run a full experiment config (tables, ladders, replicates)
    report       render figures from a finished experiment directory
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import experiments


def _load_config(path) -> dict:
    with open(path) as fh:
        return json.load(fh)


def _apply_overrides(doc: dict, args) -> dict:
    if args.seed is not None:
        doc["seed"] = args.seed
    if args.threads is not None:
        doc["workers"] = args.threads
    return doc


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="msde", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("simulate", "estimate", "experiment"):
        cmd = sub.add_parser(name)
        cmd.add_argument("--config", required=True, help="path to a JSON config document")
        cmd.add_argument("--out", required=True, help="output directory")
        cmd.add_argument("--seed", type=int, default=None, help="override the config seed")
        cmd.add_argument("--threads", type=int, default=None, help="worker count (never changes values)")
    rep = sub.add_parser("report")
    rep.add_argument("--out", required=True, help="experiment directory to render figures into")

    args = parser.parse_args(argv)
    out = Path(args.out)

    if args.command == "report":
        from .report import render_report

        figures = render_report(out)
        for fig in figures:
            print(fig)
        return 0

    doc = _apply_overrides(_load_config(args.config), args)
    if args.command == "simulate":
        doc.setdefault("experiment", "simulate")
        if doc["experiment"] != "simulate":
            raise SystemExit("simulate subcommand requires a simulate config")
        cfg = experiments.parse_config(doc)
        summary = experiments.run_simulate(cfg, out)
    elif args.command == "estimate":
        summary = experiments.run_estimate(doc, out)
    else:
        cfg = experiments.parse_config(doc)
        summary = experiments.run_experiment(cfg, out)
    print(json.dumps({"out": str(out), "experiment": summary.get("config", {}).get("experiment", args.command)}))
    return 0


if __name__ == "__main__":
    sys.exit(main())
