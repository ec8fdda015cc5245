"""Command line front end.

    ratph run <config.json | builtin-name> [--out DIR] [--tol X]
              [--bernstein-degree N] [--relax-cusp BOUND] [--seed N]
    ratph batch <dir> [--out DIR] [...same flags...]
    ratph list-builtin

Exit codes: 0 solved and verified, 2 infeasible constraints, 3 numeric
failure (quadrature/solver/verification), 4 configuration error.
"""

from __future__ import annotations

import argparse
import glob
import os
import sys
from dataclasses import replace

from .builtin_jobs import BUILTIN_JOBS, get_builtin
from .constraints import ConstraintError
from .hodograph import FieldError
from .jobs import ConfigError, JobConfig, JobError, JobReport, load_config, run_job
from .qpsolve import QpError
from .spaces import SpaceError

EXIT_OK = 0
EXIT_INFEASIBLE = 2
EXIT_NUMERIC = 3
EXIT_CONFIG = 4

_CONFIG_ERRORS = (ConfigError, SpaceError, FieldError, ConstraintError, KeyError)


def _apply_overrides(cfg: JobConfig, args) -> JobConfig:
    if args.tol is not None:
        cfg = replace(cfg, tol=float(args.tol))
    if args.bernstein_degree is not None:
        cfg = replace(cfg, cusp=replace(cfg.cusp, bernstein_degree=int(args.bernstein_degree)))
    if args.relax_cusp is not None:
        cfg = replace(cfg, cusp=replace(cfg.cusp, bound=float(args.relax_cusp)))
    if args.seed is not None:
        cfg = replace(cfg, seed=int(args.seed))
    cfg.validate()
    return cfg


def _exit_code(report: JobReport) -> int:
    if report.status == "infeasible":
        return EXIT_INFEASIBLE
    if report.status != "optimal":
        return EXIT_NUMERIC
    if report.verified is False:
        return EXIT_NUMERIC
    return EXIT_OK


def _summarize(report: JobReport) -> str:
    bits = ["%s: %s" % (report.name, report.status)]
    if report.value is not None:
        bits.append("value=%.6g" % report.value)
    if report.energy is not None:
        bits.append("energy=%.6g" % report.energy)
    if report.arclength is not None:
        bits.append("arclength=%.6g" % report.arclength)
    if report.status == "infeasible" and report.infeasibility is not None:
        bits.append("violation=%.3g" % report.infeasibility)
    if report.verified is not None:
        bits.append("verified" if report.verified else "NOT-verified")
    if report.near_degenerate:
        bits.append("near-degenerate")
    return "  ".join(bits)


def _run_one(cfg: JobConfig, args) -> int:
    cfg = _apply_overrides(cfg, args)
    outdir = args.out or os.path.join("out", cfg.name)
    report = run_job(cfg, outdir=outdir)
    print(_summarize(report))
    if report.files.get("report"):
        print("  report: %s" % report.files["report"])
    return _exit_code(report)


def _cmd_run(args) -> int:
    target = args.target
    try:
        if os.path.exists(target):
            cfg = load_config(target)
        elif target in BUILTIN_JOBS:
            cfg = get_builtin(target)
        else:
            raise ConfigError(
                "%r is neither a config file nor a built-in job name" % target
            )
    except _CONFIG_ERRORS as exc:
        print("config error: %s" % exc, file=sys.stderr)
        return EXIT_CONFIG
    return _dispatch(cfg, args)


def _dispatch(cfg: JobConfig, args) -> int:
    try:
        return _run_one(cfg, args)
    except JobError as exc:
        if isinstance(exc.cause, _CONFIG_ERRORS):
            print("config error (%s): %s" % (exc.stage, exc.cause), file=sys.stderr)
            return EXIT_CONFIG
        print("error in %s" % exc, file=sys.stderr)
        return EXIT_NUMERIC
    except _CONFIG_ERRORS as exc:
        print("config error: %s" % exc, file=sys.stderr)
        return EXIT_CONFIG
    except QpError as exc:
        print("solver error: %s" % exc, file=sys.stderr)
        return EXIT_NUMERIC


def _cmd_batch(args) -> int:
    paths = sorted(glob.glob(os.path.join(args.target, "*.json")))
    if not paths:
        print("config error: no *.json jobs under %s" % args.target, file=sys.stderr)
        return EXIT_CONFIG
    worst = EXIT_OK
    for path in paths:
        try:
            cfg = load_config(path)
        except _CONFIG_ERRORS as exc:
            print("config error in %s: %s" % (path, exc), file=sys.stderr)
            worst = max(worst, EXIT_CONFIG)
            continue
        sub = argparse.Namespace(**vars(args))
        sub.out = os.path.join(args.out, cfg.name) if args.out else None
        code = _dispatch(cfg, sub)
        worst = max(worst, code)
    return worst


def _cmd_list_builtin(_args) -> int:
    for name in sorted(BUILTIN_JOBS):
        doc = (BUILTIN_JOBS[name].__doc__ or "").strip().split("\n")[0]
        if not doc:
            try:
                cfg = BUILTIN_JOBS[name]()
                doc = "%s %s objective, dim %d basis" % (
                    cfg.data.mode,
                    cfg.objective.kind,
                    len(cfg.initial) if cfg.initial else 0,
                )
            except Exception:
                doc = ""
        print("%-26s %s" % (name, doc))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ratph", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--out", default=None, help="output directory")
        p.add_argument("--tol", type=float, default=None, help="quadrature tolerance override")
        p.add_argument(
            "--bernstein-degree", type=int, default=None,
            help="elevate the cusp-constraint Bernstein degree",
        )
        p.add_argument(
            "--relax-cusp", type=float, default=None, metavar="BOUND",
            help="lower bound for the mu Bernstein coefficients (default 0)",
        )
        p.add_argument("--seed", type=int, default=None, help="seed echo for randomized tests")

    runp = sub.add_parser("run", help="run one job (config path or built-in name)")
    runp.add_argument("target")
    common(runp)
    runp.set_defaults(func=_cmd_run)

    batchp = sub.add_parser("batch", help="run every *.json job in a directory")
    batchp.add_argument("target")
    common(batchp)
    batchp.set_defaults(func=_cmd_batch)

    listp = sub.add_parser("list-builtin", help="list built-in job names")
    listp.set_defaults(func=_cmd_list_builtin)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


def app():
    sys.exit(main())


if __name__ == "__main__":
    app()
