"""Command-line interface: ``shiftspline {constants,bound,interpolate,convergence,verify}``."""
import argparse
import csv
import json
import logging
import os
import sys

import numpy as np

from . import bounds, harness, interpolator
from .errors import ShiftSplineError
from .geometry import read_points_csv, write_points_csv
from .jsonio import dumps
from .kernel import KernelParams


def _add_kernel_args(p, with_b0=True):
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--lambda", dest="lam", type=int, required=True)
    p.add_argument("--c", type=float, required=True)
    if with_b0:
        p.add_argument("--b0", type=float, default=1.0)
        p.add_argument("--l-const", type=float, default=1.0)


def cmd_constants(args):
    bc = bounds.bound_constants(KernelParams(args.n, args.lam, args.c, args.l_const), args.b0)
    print(dumps(bc.to_dict()))
    return 0


def cmd_bound(args):
    bc = bounds.bound_constants(KernelParams(args.n, args.lam, args.c, args.l_const), args.b0)
    form = "delta" if args.delta is not None else "fill"
    spacing = args.delta if args.delta is not None else args.fill
    res = bounds.error_bound(bc, spacing, form, args.fnorm,
                             force_hypothesis=args.force_hypothesis)
    out = res.to_dict()
    out["params"] = bc.params.to_dict()
    out["b0"] = bc.b0
    out["f_norm"] = args.fnorm
    out["notes"] = [f"l_const = {bc.params.l_const!r}"]
    if res.forced:
        out["notes"].append("hypothesis violated: bound evaluated under --force-hypothesis")
    print(dumps(out))
    return 0


def _read_values(path):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or [h.strip() for h in rows[0]] != ["value"]:
        raise ShiftSplineError(f"{path}: expected a single 'value' column")
    return np.array([float(r[0]) for r in rows[1:] if r])


def cmd_interpolate(args):
    params = KernelParams(args.n, args.lam, args.c)
    X = read_points_csv(args.points)
    model = interpolator.fit(params, X, _read_values(args.values))
    E = read_points_csv(args.eval)
    write_points_csv(args.out, E, {"s": interpolator.evaluate(model, E)})
    logging.info("fitted %d sites, condition %.3e", len(X), model.condition)
    return 0


def cmd_convergence(args):
    with open(args.config) as fh:
        cfg = harness.ConvergenceConfig.from_dict(json.load(fh))
    report = harness.run_convergence(cfg)
    text = dumps(report.to_dict())
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
        csv_dir = os.path.dirname(os.path.abspath(args.out))
    else:
        print(text)
        csv_dir = os.getcwd()
    with open(os.path.join(csv_dir, "levels.csv"), "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["delta", "N", "fill_upper", "max_error", "condition"])
        for row in report.levels_table():
            w.writerow([format(v, ".17g") if isinstance(v, float) else v for v in row])
    return 0


def cmd_verify(args):
    result = harness.run_suite(args.suite)
    result["grid"] = args.grid
    print(dumps(result))
    return 0 if result["pass"] else 1


def build_parser():
    parser = argparse.ArgumentParser(prog="shiftspline", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("constants", help="bound constants as JSON")
    _add_kernel_args(p)
    p.set_defaults(func=cmd_constants)

    p = sub.add_parser("bound", help="evaluate the certified error bound")
    _add_kernel_args(p)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--delta", type=float)
    g.add_argument("--fill", type=float)
    p.add_argument("--fnorm", type=float, required=True)
    p.add_argument("--force-hypothesis", action="store_true")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("interpolate", help="fit on CSV sites and evaluate on CSV points")
    p.add_argument("--points", required=True)
    p.add_argument("--values", required=True)
    _add_kernel_args(p, with_b0=False)
    p.add_argument("--eval", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_interpolate)

    p = sub.add_parser("convergence", help="run a convergence experiment")
    p.add_argument("--config", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_convergence)

    p = sub.add_parser("verify", help="run verification suites")
    p.add_argument("--suite", choices=["moments", "polybound", "lemma23", "all"], default="all")
    p.add_argument("--grid", choices=["default"], default="default")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (ShiftSplineError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
