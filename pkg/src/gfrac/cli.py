"""Command-line interface: expansion I/O, operators, norms, constants,
and the verification suites.

Commands
--------
apply       apply a fractional operator to an expansion file
norm        smoothness norm of an expansion
eval        evaluate an expansion at a point
constants   normalizing constants for a given order
verify      run a verification suite and emit its JSON report

Configuration resolves in three layers: built-in defaults, then the
flat key=value file named by the ``GFRAC_CONFIG`` environment variable,
then command-line flags.  Exit codes: 0 success, 2 usage error, 3 data
error (unreadable or malformed files), 4 verification failure.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from dataclasses import dataclass

from .fractional import (
    FracOperatorSpec,
    OperatorKind,
    OperatorPath,
    apply_operator,
    big_C_beta_k,
    c_beta_k,
    default_difference_order,
)
from .hermite import (
    ExpansionFormatError,
    expansion_eval,
    format_float,
    gauss_hermite_grid,
    read_expansion,
    write_expansion,
)
from .semigroups import TimeGrid
from .spaces import TLNormParams, tl_norm
from .verification import SUITE_NAMES, GridConfig, run_suite

__all__ = ["CliConfig", "main", "EXIT_OK", "EXIT_USAGE", "EXIT_DATA", "EXIT_VERIFY"]

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_VERIFY = 4

CONFIG_ENV_VAR = "GFRAC_CONFIG"


class UsageError(Exception):
    pass


class DataError(Exception):
    pass


@dataclass(frozen=True)
class CliConfig:
    """Resolved run configuration: grids, tolerance, seed, report target."""

    quad_order: int = 16
    time_nodes: int = 400
    t_min: float = 1e-6
    t_max: float = 40.0
    tolerance: float = 1e-6
    seed: int = 42
    report_path: str | None = None

    def __post_init__(self):
        if self.quad_order < 1:
            raise UsageError("quad_order must be >= 1")
        if self.time_nodes < 16:
            raise UsageError("time_nodes must be >= 16")
        if not 0 < self.t_min < self.t_max:
            raise UsageError("need 0 < t_min < t_max")

    def time_grid(self) -> TimeGrid:
        return TimeGrid.log_spaced(self.time_nodes, self.t_min, self.t_max)

    def grid_config(self) -> GridConfig:
        return GridConfig(self.quad_order, self.time_nodes, self.t_min, self.t_max,
                          self.tolerance, self.seed)


_CONFIG_FIELDS = {
    "quad_order": int,
    "time_nodes": int,
    "t_min": float,
    "t_max": float,
    "tolerance": float,
    "seed": int,
    "report_path": str,
}


def load_config_file(path: str) -> dict:
    """Parse a flat key=value config file; '#' starts a comment line."""
    values: dict = {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise DataError(f"cannot read config file {path}: {exc}") from exc
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise DataError(f"{path}:{lineno}: expected key=value, got {line!r}")
        key, _, text = line.partition("=")
        key = key.strip()
        text = text.strip()
        if key not in _CONFIG_FIELDS:
            raise DataError(f"{path}:{lineno}: unknown config key {key!r}")
        try:
            values[key] = _CONFIG_FIELDS[key](text)
        except ValueError as exc:
            raise DataError(f"{path}:{lineno}: bad value for {key}: {text!r}") from exc
    return values


def resolve_config(args: argparse.Namespace) -> CliConfig:
    """Defaults, then the GFRAC_CONFIG file, then command-line flags."""
    values: dict = {}
    env_path = os.environ.get(CONFIG_ENV_VAR)
    if env_path:
        values.update(load_config_file(env_path))
    for field_name in _CONFIG_FIELDS:
        flag_value = getattr(args, field_name, None)
        if flag_value is not None:
            values[field_name] = flag_value
    return CliConfig(**values)


def _common_flags() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    grid = parent.add_argument_group("grids and reproducibility")
    grid.add_argument("--quad-order", dest="quad_order", type=int, metavar="M",
                      help="Gauss-Hermite nodes per axis (default 16)")
    grid.add_argument("--time-nodes", dest="time_nodes", type=int, metavar="N",
                      help="log-spaced time quadrature nodes (default 400)")
    grid.add_argument("--t-min", dest="t_min", type=float, metavar="T")
    grid.add_argument("--t-max", dest="t_max", type=float, metavar="T")
    grid.add_argument("--tol", dest="tolerance", type=float, metavar="TOL",
                      help="tolerance for verification cases (default 1e-6)")
    grid.add_argument("--seed", dest="seed", type=int, metavar="SEED")
    return parent


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gfrac",
        description="Hermite-spectral toolkit for Gaussian harmonic analysis.")
    common = _common_flags()
    sub = parser.add_subparsers(dest="command", required=True)

    p_apply = sub.add_parser("apply", parents=[common],
                             help="apply a fractional operator to an expansion file")
    p_apply.add_argument("--op", required=True, choices=[k.value for k in OperatorKind])
    p_apply.add_argument("--beta", required=True, type=float)
    p_apply.add_argument("--k", type=int, default=None,
                         help="difference order (default: smallest integer > beta)")
    p_apply.add_argument("--path", choices=[p.value for p in OperatorPath],
                         default=OperatorPath.SPECTRAL.value)
    p_apply.add_argument("--in", dest="input", required=True, metavar="FILE")
    p_apply.add_argument("--out", dest="output", required=True, metavar="FILE")

    p_norm = sub.add_parser("norm", parents=[common],
                            help="smoothness norm of an expansion")
    p_norm.add_argument("--alpha", required=True, type=float)
    p_norm.add_argument("--p", required=True, type=float)
    p_norm.add_argument("--q", required=True, type=float)
    p_norm.add_argument("--k", type=int, default=None,
                        help="derivative order (default: smallest integer > alpha)")
    p_norm.add_argument("--in", dest="input", required=True, metavar="FILE")

    p_eval = sub.add_parser("eval", parents=[common],
                            help="evaluate an expansion at a point")
    p_eval.add_argument("--in", dest="input", required=True, metavar="FILE")
    p_eval.add_argument("--x", required=True, metavar="X1,X2,...",
                        help="comma-separated point coordinates")

    p_const = sub.add_parser("constants", parents=[common],
                             help="normalizing constants for a given order")
    p_const.add_argument("--beta", required=True, type=float)
    p_const.add_argument("--k", type=int, default=None)

    p_verify = sub.add_parser("verify", parents=[common],
                              help="run a verification suite")
    p_verify.add_argument("--suite", required=True, choices=list(SUITE_NAMES) + ["all"])
    p_verify.add_argument("--report", dest="report_path", metavar="FILE",
                          help="write the JSON report here (default: stdout)")
    return parser


def cmd_apply(args: argparse.Namespace, config: CliConfig) -> int:
    try:
        spec = FracOperatorSpec(OperatorKind(args.op), args.beta, args.k,
                                OperatorPath(args.path))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    f = read_expansion(args.input)
    try:
        result = apply_operator(spec, f, config.time_grid())
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    write_expansion(result, args.output)
    return EXIT_OK


def cmd_norm(args: argparse.Namespace, config: CliConfig) -> int:
    f = read_expansion(args.input)
    try:
        params = TLNormParams(args.alpha, args.p, args.q, args.k)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    xg = gauss_hermite_grid(f.dimension, max(config.quad_order, f.degree + 2))
    value = tl_norm(f, params, config.time_grid(), xg)
    print(format_float(value))
    return EXIT_OK


def cmd_eval(args: argparse.Namespace, config: CliConfig) -> int:
    f = read_expansion(args.input)
    try:
        point = [float(part) for part in args.x.split(",") if part.strip() != ""]
    except ValueError as exc:
        raise UsageError(f"cannot parse point {args.x!r}") from exc
    if len(point) != f.dimension:
        raise UsageError(f"point has {len(point)} coordinates, expansion has dimension {f.dimension}")
    print(format_float(expansion_eval(f, point)))
    return EXIT_OK


def cmd_constants(args: argparse.Namespace, config: CliConfig) -> int:
    beta = args.beta
    if beta <= 0:
        raise UsageError("beta must be > 0")
    k = args.k if args.k is not None else default_difference_order(beta)
    try:
        c_val = c_beta_k(beta, k, config.time_grid())
        big_c = big_C_beta_k(beta, k)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    print(f"beta = {format_float(beta)}")
    print(f"k = {k}")
    print(f"c_beta_k = {format_float(c_val)}")
    print(f"C_beta_k = {format_float(big_c)}")
    if k == 1:
        closed = -math.gamma(1.0 - beta) / beta
        print(f"gamma_closed_form = {format_float(closed)}")
        print(f"gamma_closed_form_rel_err = {format_float(abs(c_val - closed) / abs(closed))}")
    # |c_beta_k| <= C_beta_k Gamma(k - beta) links the difference and
    # derivative-weighted integrals; report both sides
    bound = big_c * math.gamma(k - beta)
    print(f"difference_bound = {format_float(bound)}")
    print(f"difference_bound_satisfied = {str(abs(c_val) <= bound * (1 + 1e-8)).lower()}")
    return EXIT_OK


def cmd_verify(args: argparse.Namespace, config: CliConfig) -> int:
    report = run_suite(args.suite, config.grid_config())
    text = report.to_json()
    target = args.report_path or config.report_path
    if target:
        try:
            with open(target, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            raise DataError(f"cannot write report to {target}: {exc}") from exc
        summary = report.summary()
        print(f"{report.suite}: {summary['passed']}/{summary['total']} cases passed "
              f"-> {target}")
    else:
        print(text, end="")
    return EXIT_OK if report.all_passed else EXIT_VERIFY


_HANDLERS = {
    "apply": cmd_apply,
    "norm": cmd_norm,
    "eval": cmd_eval,
    "constants": cmd_constants,
    "verify": cmd_verify,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        config = resolve_config(args)
        return _HANDLERS[args.command](args, config)
    except UsageError as exc:
        print(f"gfrac: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DataError, ExpansionFormatError) as exc:
        print(f"gfrac: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"gfrac: data error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
