"""Command-line interface.

Subcommands ``thermal``, ``dynamics``, ``zeros``, ``qsl`` and
``oracle-check``.  Exit codes: 0 success, 2 usage or configuration error,
3 numerical failure (including an oracle mismatch).  Worker threads are
set only through the ``DYNPART_THREADS`` environment variable.
"""
from __future__ import annotations

import argparse
import json
import math
import re
import sys

import numpy as np

from . import analytic, dynamics, oracle, output, qsl, zeros
from .errors import (
    BoundViolation,
    CapExceeded,
    InsufficientPoints,
    ModelSpecError,
    NonConvergence,
)
from .spectrum import (
    DEFAULT_CAP,
    MAX_CAP,
    UnitConvention,
    compile_model,
    spec_from_dict,
    spec_to_dict,
)

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 2, 3

_PI_RE = re.compile(r"^\s*([+-]?[0-9.eE+-]*)\s*\*?\s*pi\s*(?:/\s*([0-9.eE+-]+))?\s*$")


class ConfigError(Exception):
    pass


def parse_theta(text: str) -> float:
    """Float, or a multiple of pi such as ``4pi``, ``-pi/2``, ``3*pi/2``."""
    m = _PI_RE.match(text.lower())
    try:
        if m is None:
            value = float(text)
        else:
            coef, den = m.groups()
            c = {"": 1.0, "+": 1.0, "-": -1.0}.get(coef)
            c = float(coef) if c is None else c
            value = c * math.pi / (float(den) if den else 1.0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not math.isfinite(value):
        raise argparse.ArgumentTypeError(f"not finite: {text!r}")
    return value


def _int_list(text: str) -> list:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers: {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--model",
        choices=["single_qubit", "degenerate_qubit", "product_chain", "ising_open_chain"],
        default="single_qubit",
    )
    common.add_argument("--spec", help="JSON file with a model spec (overrides --model/--n/--g)")
    common.add_argument("--n", type=int, help="chain length")
    common.add_argument("--g", type=int, help="upper-level degeneracy")
    common.add_argument("--theta-min", type=parse_theta, default=0.0)
    common.add_argument("--theta-max", type=parse_theta, default=None)
    common.add_argument("--points", type=int, default=None)
    common.add_argument("--out", help="output file (default: stdout)")
    common.add_argument("--format", choices=["csv", "json"], default=None)
    common.add_argument("--cap", type=int, default=None, help=f"enumeration cap (max {MAX_CAP})")
    common.add_argument("--j", type=float, default=None, help="energy scale J")
    common.add_argument("--hbar", type=float, default=1.0)

    parser = argparse.ArgumentParser(
        prog="dynpart",
        description="Thermal and Loschmidt observables of commensurate spin models from one polynomial.",
        epilog="Exit codes: 0 ok, 2 usage/config error, 3 numerical failure. Threads: DYNPART_THREADS.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("thermal", parents=[common], help="f_thermal and C on a theta_beta grid")
    p = sub.add_parser("dynamics", parents=[common], help="f_L, P, I on a time grid")
    p.add_argument("--occupations", action="store_true", help="append constant level occupations")
    p = sub.add_parser("zeros", parents=[common], help="zeros of L(y) and critical times")
    p.add_argument("--tol", type=float, default=zeros.DEFAULT_TOL)
    p.add_argument("--circle-tol", type=float, default=zeros.DEFAULT_CIRCLE_TOL)
    p = sub.add_parser("qsl", parents=[common], help="speed-limit report")
    p.add_argument("--scan", type=_int_list, help="chain sizes for a scaling study, e.g. 4,8,16,32")
    sub.add_parser("oracle-check", parents=[common], help="enumeration vs closed form (Ising chain)")
    return parser


def _model(args):
    if args.spec:
        try:
            with open(args.spec) as fh:
                obj = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read spec {args.spec}: {exc}") from None
        spec = spec_from_dict(obj)
    else:
        obj = {"model": args.model, "n": args.n, "g": args.g}
        spec = spec_from_dict({k: v for k, v in obj.items() if v is not None})
    j = args.j if args.j is not None else spec.j
    return spec, UnitConvention(j=j, hbar=args.hbar)


def _grid_args(args, default_max, default_points):
    hi = default_max if args.theta_max is None else args.theta_max
    n = default_points if args.points is None else args.points
    if n < 2:
        raise ConfigError(f"--points must be >= 2, got {n}")
    if not args.theta_min < hi:
        raise ConfigError(f"--theta-min must be below --theta-max ({args.theta_min} >= {hi})")
    return args.theta_min, hi, n


def _emit(args, text: str):
    if args.out:
        with open(args.out, "w", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _table(args, default_fmt, table: dict, meta: dict) -> str:
    fmt = args.format or default_fmt
    if fmt == "json":
        return output.to_json({**meta, **table})
    cols, rows = output.columns_to_rows(table)
    return output.to_csv(cols, rows)


def cmd_thermal(args) -> int:
    spec, units = _model(args)
    dpf = compile_model(spec, cap=args.cap)
    lo, hi, n = _grid_args(args, 3.0, 64)
    grid = np.linspace(lo, hi, n)
    thetas = [units.theta_beta(float(b)) for b in grid]
    table = {
        "theta_beta": grid,
        "f_thermal": [analytic.f_thermal(dpf, t) for t in thetas],
        "C": [analytic.specific_heat(dpf, t) for t in thetas],
    }
    _emit(args, _table(args, "csv", table, {"model": spec_to_dict(spec)}))
    return EXIT_OK


def cmd_dynamics(args) -> int:
    spec, units = _model(args)
    dpf = compile_model(spec, cap=args.cap)
    lo, hi, n = _grid_args(args, 4 * math.pi, 4097)
    scale = units.j / units.hbar
    series = dynamics.sample_series(dpf, lo * scale, hi * scale, n)
    table = {
        "theta": np.linspace(lo, hi, n) if scale != 1.0 else series.theta,
        "f_L": series.f_L,
        "P": series.P,
        "I": series.I,
        "divergent": series.divergent,
    }
    if args.occupations:
        for k, w in enumerate(analytic.level_occupations(dpf)):
            table[f"P_{k}"] = [w] * n
    _emit(args, _table(args, "csv", table, {"model": spec_to_dict(spec), "exponent": dpf.exponent}))
    return EXIT_OK


def cmd_zeros(args) -> int:
    spec, units = _model(args)
    dpf = compile_model(spec, cap=args.cap)
    zs = zeros.find_zeros(dpf, tol=args.tol, circle_tol=args.circle_tol)
    crit = zeros.predict_critical_times(zs)
    tscale = units.hbar / units.j
    if (args.format or "json") == "json":
        doc = {
            "model": spec_to_dict(spec),
            **zs.to_dict(),
            "critical_times": [{"theta": ct.theta * tscale, "mult": ct.multiplicity} for ct in crit],
        }
        _emit(args, output.to_json(doc))
    else:
        rows = [(r.location.real, r.location.imag, r.multiplicity, r.cls.value) for r in zs.roots]
        _emit(args, output.to_csv(["re", "im", "mult", "class"], rows))
    return EXIT_OK


def cmd_qsl(args) -> int:
    spec, units = _model(args)
    dpf = compile_model(spec, cap=args.cap)
    tscale = units.hbar / units.j
    rep = qsl.qsl_report(dpf).to_dict()
    for key in ("tau_mt", "tau_ml", "tau_bound", "tau_perp"):
        if rep[key] is not None:
            rep[key] *= tscale
    doc = {"model": spec_to_dict(spec), **rep}
    if args.scan:
        family = spec_to_dict(spec)["model"]
        if family not in ("product_chain", "ising_open_chain"):
            raise ConfigError("--scan needs --model product_chain or ising_open_chain")
        study = qsl.scaling_study(family, args.scan, cap=args.cap).to_dict()
        for key in ("tau_mt", "tau_ml", "tau_perp"):
            study[key] = [None if t is None else t * tscale for t in study[key]]
        doc["scan"] = study
    if (args.format or "json") == "json":
        _emit(args, output.to_json(doc))
    else:
        cols = ["tau_mt", "tau_ml", "tau_bound", "tau_perp", "saturated_mt", "saturated_ml"]
        _emit(args, output.to_csv(cols, [[rep[c] for c in cols]]))
    return EXIT_OK


def cmd_oracle_check(args) -> int:
    cap = DEFAULT_CAP if args.cap is None else args.cap
    if cap > MAX_CAP:
        raise CapExceeded(f"--cap {cap} above hard limit {MAX_CAP}")
    n = args.n if args.n is not None else 10
    points = 64 if args.points is None else args.points
    if points < 2:
        raise ConfigError(f"--points must be >= 2, got {points}")
    cmp = oracle.compare_ising(n, n_points=points, cap=cap)
    rep = cmp.to_dict()
    if (args.format or "json") == "json":
        text = output.to_json(rep)
    else:
        text = output.to_csv(list(rep), [list(rep.values())])
    _emit(args, text)
    if args.out:
        sys.stderr.write(
            f"n={n} max_rel_thermal={rep['max_rel_thermal']:.3e} "
            f"max_rel_circle={rep['max_rel_circle']:.3e} "
            f"max_abs_circle={rep['max_abs_circle']:.3e} ok={rep['ok']}\n"
        )
    return EXIT_OK if cmp.ok else EXIT_NUMERIC


COMMANDS = {
    "thermal": cmd_thermal,
    "dynamics": cmd_dynamics,
    "zeros": cmd_zeros,
    "qsl": cmd_qsl,
    "oracle-check": cmd_oracle_check,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args)
    except (ConfigError, ModelSpecError, CapExceeded, InsufficientPoints, ValueError) as exc:
        sys.stderr.write(f"dynpart: error: {exc}\n")
        return EXIT_CONFIG
    except (NonConvergence, BoundViolation, ArithmeticError) as exc:
        sys.stderr.write(f"dynpart: numerical error: {exc}\n")
        return EXIT_NUMERIC
    except OSError as exc:
        sys.stderr.write(f"dynpart: error: {exc}\n")
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
