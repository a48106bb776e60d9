"""Command-line front end.

    schwarzlab simulate --config run.yaml [--mode ...] [--out traj.csv]
    schwarzlab verify --suite all [--nu 1] [--out report.json]
    schwarzlab charges traj.csv [--lambda 2] [--nu 0]

Exit codes: 0 success, 1 numerical or check failure, 2 usage/config error.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import __version__, runs, verify
from .config import ConfigError, load

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _dump(obj, path=None):
    text = json.dumps(obj, indent=2) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def cmd_simulate(args) -> int:
    overrides = {
        "mode": args.mode,
        "lambda": args.lam,
        "nu": args.nu,
        "seed": args.seed,
        "t_end": args.t_end,
        "step": args.step,
        "out": args.out,
    }
    try:
        cfg = load(args.config, overrides)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    table, err = runs.simulate(cfg)
    if cfg.out is None:
        runs.write_rows(sys.stdout, table)
    else:
        runs.write_csv(cfg.out, table)
    summary = {
        "status": "ok" if err is None else "failed",
        "csv": cfg.out,
        "config": cfg.echo(),
        "charges": runs.charge_summary(cfg.mode, table, cfg.lam, cfg.nu),
    }
    if err is not None:
        t_fail = getattr(err, "time", None)
        summary["failure"] = {
            "type": type(err).__name__,
            "message": str(err),
            "time": None if t_fail is None else float(t_fail),
        }
    if args.report:
        with open(args.report, "a") as fh:
            fh.write(json.dumps(summary, sort_keys=True) + "\n")
    if cfg.out is None:
        print(json.dumps(summary, indent=2), file=sys.stderr)
    else:
        _dump(summary)
    return EXIT_OK if err is None else EXIT_FAIL


def cmd_verify(args) -> int:
    report = verify.run_suite(args.suite, args.nu)
    _dump(report.to_json(), args.out)
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_charges(args) -> int:
    try:
        mode, table = runs.read_csv(args.path)
    except OSError as exc:
        print(f"cannot read {args.path}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except runs.SchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    nu = args.nu
    if mode != "schwarz" and nu is None:
        print(f"schema {mode} needs --nu", file=sys.stderr)
        return EXIT_USAGE
    nu = 0.0 if nu is None else nu
    lam = args.lam
    if lam is None:
        if mode == "schwarz":
            # fall back to the coupling recorded in the S(rho) column
            lam = float(np.nanmedian(table["S_of_rho"]))
        elif mode == "lagrange":
            lam = 2.0 * (float(table["H"][0]) - nu * nu)
        else:
            lam = 0.0
    summary = runs.charge_summary(mode, table, lam, nu)
    status = EXIT_OK
    if args.tol is not None:
        summary["tolerance"] = args.tol
        summary["pass"] = bool(runs.max_drift(summary) <= args.tol)
        status = EXIT_OK if summary["pass"] else EXIT_FAIL
    _dump(summary, args.out)
    return status


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="schwarzlab", description="Schwarzian mechanics laboratory")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("simulate", help="integrate one formulation and write a CSV trajectory")
    s.add_argument("--config", help="YAML run configuration")
    s.add_argument("--mode", help="schwarz | lagrange | hamilton | geodesic")
    s.add_argument("--lambda", dest="lam", type=float)
    s.add_argument("--nu", type=float)
    s.add_argument("--seed", help="exact | line | tan | exp | state")
    s.add_argument("--t-end", dest="t_end", type=float)
    s.add_argument("--step", type=float)
    s.add_argument("--out", help="CSV path (default: stdout, summary to stderr)")
    s.add_argument("--report", help="append a JSON summary line to this file")
    s.set_defaults(func=cmd_simulate)

    v = sub.add_parser("verify", help="run a verification suite and write a JSON report")
    v.add_argument("--suite", default="all", choices=verify.SUITES + ("all",))
    v.add_argument("--nu", type=float, help="restrict the geometry suite to one nu")
    v.add_argument("--out", help="JSON path (default: stdout)")
    v.set_defaults(func=cmd_verify)

    c = sub.add_parser("charges", help="recompute conserved quantities from a trajectory CSV")
    c.add_argument("path")
    c.add_argument("--lambda", dest="lam", type=float)
    c.add_argument("--nu", type=float)
    c.add_argument("--tol", type=float, help="exit 1 if any drift or residual exceeds this")
    c.add_argument("--out", help="JSON path (default: stdout)")
    c.set_defaults(func=cmd_charges)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
