"""Command-line entry point: ``run``, ``sweep`` and ``check``."""

import argparse
import json
import logging
import sys

from .errors import DistNesterovError
from .harness.checks import run_checks
from .harness.config import load_config, load_schema
from .harness.scenarios import run_scenario, sweep


def _cmd_run(args):
    cfg = load_config(args.config)
    if args.seed is not None:
        cfg = cfg.with_seed(args.seed)
    outcomes = run_scenario(cfg, args.out)
    for po in outcomes:
        head = f"[{po.tag}] " if po.tag else ""
        for a in po.algorithms:
            last = a.trace.records[-1]
            print(f"{head}{a.label}: step={a.step:.4g} momentum={a.momentum.label()} "
                  f"residual={last.residual:.3e} gap={last.gap:.3e}")
        if po.central is not None:
            print(f"{head}{po.central.label}: residual={po.central.records[-1].residual:.3e}")
    print(f"outputs written to {args.out}")
    return 0


def _cmd_sweep(args):
    cfg = load_config(args.config)
    report = sweep(cfg, args.out, workers=args.workers)
    for entry in report["problems"]:
        head = f"[{entry['tag']}] " if entry["tag"] else ""
        for label, sel in entry["selected"].items():
            if "error" in sel:
                print(f"{head}{label}: {sel['error']}")
            else:
                print(f"{head}{label}: step={sel['step']:.4g} momentum={sel['momentum']} "
                      f"iters={sel['iters_to_target']}")
    return 0


def _cmd_check(args):
    failed = 0
    for name, ok, detail in run_checks(quick=args.quick):
        print(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
        failed += not ok
    return 0 if failed == 0 else 3


def _cmd_schema(args):
    json.dump(load_schema(), sys.stdout, indent=2)
    print()
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="distnesterov",
        description="Distributed Nesterov methods over directed graphs: experiments and checks.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log tuning progress")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run one scenario from a JSON config")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--seed", type=int, default=None, help="override the config seed")
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("sweep", help="evaluate full tuning grids")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("check", help="invariant suite on small instances")
    p.add_argument("--quick", action="store_true")
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("schema", help="print the config JSON schema")
    p.set_defaults(func=_cmd_schema)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except DistNesterovError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
