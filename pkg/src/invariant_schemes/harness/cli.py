"""
Command-line front end.

    invariant-schemes run      --model heat --scheme full [--config PATH] [--out DIR] ...
    invariant-schemes compare  --model burgers [--config PATH] ...
    invariant-schemes converge --model heat --scheme standard --levels 2
    invariant-schemes audit    --model heat --samples 100 --seed 0

Exit codes: 0 success, 2 configuration error, 3 numerical-domain error,
4 mesh collapse, 1 I/O failure.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from invariant_schemes.errors import ConfigError, MeshCollapseError, SchemeError
from invariant_schemes.harness.audit import DEFAULT_TOL, invariance_audit, mesh_incompatibility
from invariant_schemes.harness.config import ALL_KINDS, load_config
from invariant_schemes.harness.experiments import compare, convergence_study, run_experiment
from invariant_schemes.harness.reports import emit_reports
from invariant_schemes.models import SchemeKind

EXIT_OK, EXIT_IO, EXIT_CONFIG, EXIT_DOMAIN, EXIT_COLLAPSE = 0, 1, 2, 3, 4

log = logging.getLogger("invariant_schemes")


def _add_problem_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--model", choices=["heat", "burgers"], help="PDE model")
    p.add_argument("--config", type=Path, help="key = value config file")
    p.add_argument("--h", type=float, help="initial spatial step")
    p.add_argument("--k", type=float, help="time step")
    p.add_argument("--x-min", type=float, dest="x_min")
    p.add_argument("--x-max", type=float, dest="x_max")
    p.add_argument("--t0", type=float)
    p.add_argument("--t-final", type=float, dest="t_final")
    p.add_argument("--c", type=float, help="heat solution parameter")
    p.add_argument("--c1", type=float, help="Burgers solution parameter c1")
    p.add_argument("--c2", type=float, help="Burgers solution parameter c2")
    p.add_argument("--constant", type=float, help="use the constant field u = CONSTANT instead")
    p.add_argument("--out", dest="out_dir", help="output directory")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="invariant-schemes", description=__doc__.split("\n\n")[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run one scheme and write solution/mesh/summary CSVs")
    _add_problem_args(run)
    run.add_argument("--scheme", choices=[k.value for k in SchemeKind])
    run.add_argument("--forward-laplacian", action="store_true",
                     help="standard heat scheme: forward-biased second difference")

    cmp_ = sub.add_parser("compare", help="run all three schemes on the same problem")
    _add_problem_args(cmp_)

    conv = sub.add_parser("converge", help="refinement study with observed orders")
    _add_problem_args(conv)
    conv.add_argument("--scheme", choices=[k.value for k in SchemeKind])
    conv.add_argument("--levels", type=int, required=True, help="number of resolutions (>= 2)")
    conv.add_argument("--vary", choices=["h", "k"], help="refined step (default: h for heat, k for Burgers)")

    audit = sub.add_parser("audit", help="random-stencil invariance audit")
    audit.add_argument("--model", choices=["heat", "burgers"], required=True)
    audit.add_argument("--scheme", action="append", choices=[k.value for k in SchemeKind],
                       help="scheme to audit (repeatable; default all)")
    audit.add_argument("--samples", type=int, default=100)
    audit.add_argument("--seed", type=int, default=0)
    audit.add_argument("--tol", type=float, default=DEFAULT_TOL)
    audit.add_argument("--out", dest="out_dir", default=None)
    return parser


def _config(args, **extra):
    keys = ("h", "k", "x_min", "x_max", "t0", "t_final", "c", "c1", "c2", "constant", "out_dir")
    overrides = {key: getattr(args, key, None) for key in keys}
    overrides.update(extra)
    return load_config(args.config, model=args.model, **overrides)


def _print_summary(rows) -> None:
    print(f"{'model':8s} {'scheme':9s} {'steps':>6s} {'max_abs_error':>14s} {'l2_error':>14s}")
    for model, scheme, _h, _k, _t, err, l2, steps in rows:
        print(f"{model:8s} {scheme:9s} {steps:6d} {err:14.6e} {l2:14.6e}")


def _cmd_run(args) -> None:
    schemes = (SchemeKind.parse(args.scheme),) if args.scheme else None
    cfg = _config(args, schemes=schemes)
    options = {"forward_laplacian": True} if args.forward_laplacian else {}
    report = run_experiment(cfg, **options)
    paths = emit_reports(report, cfg.out_dir)
    _print_summary([report.summary_row()])
    log.info("wrote %s", ", ".join(map(str, paths)))


def _cmd_compare(args) -> None:
    cfg = _config(args, schemes=ALL_KINDS)
    report = compare(cfg)
    emit_reports(report, cfg.out_dir)
    _print_summary(report.summary())
    print("ranking (max norm):", " < ".join(k.value for k in report.ordering("max")))
    print("ranking (rms norm):", " < ".join(k.value for k in report.ordering("l2")))


def _cmd_converge(args) -> None:
    schemes = (SchemeKind.parse(args.scheme),) if args.scheme else None
    cfg = _config(args, schemes=schemes)
    rows = convergence_study(cfg, args.levels, vary=args.vary)
    emit_reports(rows, cfg.out_dir)
    print(f"{'h':>10s} {'k':>10s} {'max_abs_error':>14s} {'order':>7s}")
    for r in rows:
        print(f"{r.h:10.5g} {r.k:10.5g} {r.max_abs_error:14.6e} {r.order:7.3f}")


def _cmd_audit(args) -> None:
    kinds = tuple(SchemeKind.parse(s) for s in args.scheme) if args.scheme else ALL_KINDS
    if args.samples < 1:
        raise ConfigError(f"--samples must be >= 1, got {args.samples}")
    report = invariance_audit(args.model, kinds, args.samples, args.seed, args.tol)
    out = args.out_dir or "out"
    emit_reports(report, out)
    print(f"{'scheme':9s} {'subgroup':9s} {'max_discrepancy':>16s} result")
    for r in report.rows:
        print(f"{r.scheme.value:9s} {r.subgroup:9s} {r.max_discrepancy:16.6e} {'pass' if r.passed else 'FAIL'}")
    if args.model == "heat":
        w = mesh_incompatibility()
        print(f"rectangular + invariant mesh equations: max slope jump {w.max_slope_jump:.3e} "
              f"(must be 0 for compatibility), max spacing mismatch {w.max_spacing_mismatch:.3e}")


COMMANDS = {"run": _cmd_run, "compare": _cmd_compare, "converge": _cmd_converge, "audit": _cmd_audit}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except MeshCollapseError as exc:
        print(f"mesh collapse: {exc}", file=sys.stderr)
        return EXIT_COLLAPSE
    except SchemeError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
