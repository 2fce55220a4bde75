"""Command-line front end.

Three subcommands:

* ``verify``  — run a named verification suite against a parameter matrix
                (flags and/or a JSON config; flags override the file) and
                write ``report.csv`` plus SVG figures;
* ``compute`` — evaluate one quantity from ``key=value`` parameters,
                printing the value and a quadrature error bound;
* ``plot``    — re-render the figures from a saved ``report.csv``.

Exit codes: 0 success, 1 verification failures, 2 usage/validation error,
3 I/O or accuracy breakdown.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import replace
from pathlib import Path
from typing import Sequence

from .capacity import annulus_capacity
from .distortion import AreaBoundParams, area_bound, point_radius_R
from .errors import AccuracyError, DomainError, InvalidFieldError, ValidationError
from .geometry import ORIGIN, Annulus, PlanePoint, QField, RingCondenser
from .modulus import extremal_density, lower_modulus_bound, ring_norm
from .plots import emit_plots
from .quadrature import DEFAULT_SPEC, QuadratureSpec
from .report import format_float, read_csv_rows
from .suites import SUITES, RadiusGrid, SuiteConfig, run_suite

__all__ = ["main"]

# compute subcommand: quantity -> (required keys, optional keys)
_QUANTITIES = {
    "ring_norm": (("p", "r"), ("Q",)),
    "lower_modulus_bound": (("p", "r1", "r2"), ("Q",)),
    "annulus_capacity": (("q", "r1", "r2"), ()),
    "area_bound": (("p", "r"), ("Q",)),
    "point_radius_R": (("p", "r"), ("Q",)),
    "extremal_density": (("p", "x", "y"), ("Q",)),
}

_TIGHT_SPEC = QuadratureSpec(abs_tol=1e-13, rel_tol=1e-12, max_refinements=28)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ringcap",
        description="verify and compute weighted modulus, capacity, and "
                    "distortion quantities on planar annuli")
    commands = parser.add_subparsers(dest="command", required=True)

    verify = commands.add_parser(
        "verify", help="run a verification suite and write report.csv + SVGs")
    verify.add_argument("--suite", choices=("all",) + SUITES, default=None,
                        help="suite to run (default: all)")
    verify.add_argument("--config", default=None,
                        help="JSON config file (flags override its values)")
    verify.add_argument("--p", default=None,
                        help="comma-separated exponents, e.g. 2,3")
    verify.add_argument("--alpha", default=None,
                        help="comma-separated power-map exponents, e.g. 0.5,1,2")
    verify.add_argument("--r-min", type=float, default=None)
    verify.add_argument("--r-max", type=float, default=None)
    verify.add_argument("--r-count", type=int, default=None)
    verify.add_argument("--r-geom", action="store_true",
                        help="space the radius grid geometrically")
    verify.add_argument("--seed", type=int, default=None,
                        help="seed for randomized rows (default 42)")
    verify.add_argument("--out", default=None,
                        help="output directory (default: current directory)")

    compute = commands.add_parser(
        "compute", help="evaluate a single quantity from key=value parameters")
    compute.add_argument("quantity", choices=sorted(_QUANTITIES))
    compute.add_argument("params", nargs="*", metavar="key=value",
                         help="e.g. p=2 r=0.5 (Q= sets a constant weight, "
                              "default 1)")

    plot = commands.add_parser(
        "plot", help="re-render figures from a saved report.csv")
    plot.add_argument("--from", dest="source", required=True,
                      help="path to report.csv")
    plot.add_argument("--out", default=".", help="output directory")
    return parser


def _comma_floats(text: str) -> tuple:
    try:
        return tuple(float(part) for part in text.split(",") if part.strip())
    except ValueError as exc:
        raise ValidationError(f"expected comma-separated numbers, got {text!r}") from exc


def _config_from_args(args: argparse.Namespace) -> SuiteConfig:
    if args.config:
        with open(args.config, "r", encoding="utf-8") as fh:
            try:
                data = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ValidationError(f"invalid JSON config: {exc}") from exc
        config = SuiteConfig.from_mapping(data)
    else:
        config = SuiteConfig()
    if args.suite is not None:
        config = replace(config, suite=args.suite)
    if args.p is not None:
        config = replace(config, p_values=_comma_floats(args.p))
    if args.alpha is not None:
        config = replace(config, alphas=_comma_floats(args.alpha))
    grid = config.radii
    if args.r_min is not None:
        grid = replace(grid, lo=args.r_min)
    if args.r_max is not None:
        grid = replace(grid, hi=args.r_max)
    if args.r_count is not None:
        grid = replace(grid, count=args.r_count)
    if args.r_geom:
        grid = replace(grid, spacing="geometric")
    config = replace(config, radii=grid)
    if args.seed is not None:
        config = replace(config, seed=args.seed)
    if args.out is not None:
        config = replace(config, output_dir=args.out)
    return config


def _cmd_verify(args: argparse.Namespace) -> int:
    config = _config_from_args(args)
    rows, code = run_suite(config)
    failed = sum(1 for row in rows if row.status == "fail")
    out_dir = Path(config.output_dir)
    print(f"{len(rows)} rows ({failed} fail) -> {out_dir / 'report.csv'}")
    return code


def _parse_key_values(quantity: str, tokens: Sequence[str]) -> dict:
    required, optional = _QUANTITIES[quantity]
    values = {}
    for token in tokens:
        if "=" not in token:
            raise ValidationError(f"expected key=value, got {token!r}")
        key, text = token.split("=", 1)
        if key not in required and key not in optional:
            raise ValidationError(
                f"unknown parameter {key!r} for {quantity}; "
                f"required: {', '.join(required)}")
        try:
            values[key] = float(text)
        except ValueError as exc:
            raise ValidationError(f"parameter {key} must be a number, "
                                  f"got {text!r}") from exc
    missing = [key for key in required if key not in values]
    if missing:
        raise ValidationError(
            f"missing parameter(s) for {quantity}: {', '.join(missing)}; "
            f"required: {', '.join(required)}")
    return values


def _evaluate(quantity: str, values: dict, spec: QuadratureSpec) -> float:
    weight = QField.constant(values.get("Q", 1.0))
    if quantity == "ring_norm":
        return ring_norm(weight, ORIGIN, values["r"], values["p"], spec)
    if quantity == "lower_modulus_bound":
        annulus = Annulus(ORIGIN, values["r1"], values["r2"])
        return lower_modulus_bound(weight, annulus, values["p"], spec)
    if quantity == "annulus_capacity":
        cond = RingCondenser(ORIGIN, values["r1"], values["r2"])
        return annulus_capacity(cond, values["q"], spec)
    if quantity == "area_bound":
        return area_bound(AreaBoundParams(values["p"], weight, values["r"]), spec)
    if quantity == "point_radius_R":
        return point_radius_R(values["p"], weight, values["r"], spec)
    if quantity == "extremal_density":
        point = PlanePoint(values["x"], values["y"])
        return extremal_density(weight, ORIGIN, values["p"], point, spec)
    raise ValidationError(f"unknown quantity {quantity!r}")


def _cmd_compute(args: argparse.Namespace) -> int:
    values = _parse_key_values(args.quantity, args.params)
    value = _evaluate(args.quantity, values, DEFAULT_SPEC)
    tight = _evaluate(args.quantity, values, _TIGHT_SPEC)
    if math.isfinite(value) and math.isfinite(tight):
        error_bound = abs(value - tight)
    else:
        error_bound = 0.0 if value == tight else math.inf
    print(format_float(value))
    print(f"error_bound={format_float(error_bound)}")
    return 0


def _cmd_plot(args: argparse.Namespace) -> int:
    rows = read_csv_rows(args.source)
    for path in emit_plots(rows, Path(args.out)):
        print(path)
    return 0


def main(argv: "Sequence[str] | None" = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "verify":
            return _cmd_verify(args)
        if args.command == "compute":
            return _cmd_compute(args)
        return _cmd_plot(args)
    except (ValidationError, DomainError, InvalidFieldError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except AccuracyError as exc:
        print(f"accuracy error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
