#!/usr/bin/env python
# -*- coding: utf-8 -*-
""" cli.py
The command line app: single verifications, parameter sweeps and kernel tables.

Why does this file exist, and why not put this in __main__?

  You might be tempted to import things from __main__ later, but that will cause
  problems: the code will get executed twice:

  - When you run `python -mhhverify` python will execute
    ``__main__.py`` as a script. That means there won't be any
    ``hhverify.__main__`` in ``sys.modules``.
  - When you import __main__ it will get executed again (as a module) because
    there's no ``hhverify.__main__`` in ``sys.modules``.

Exit codes: 0 when every report holds, 1 when an inequality fails, 2 for argument, domain and configuration errors
and 3 when an integral does not converge.
"""
__author__ = "Anthony Fong"
__copyright__ = "Copyright 2021, Anthony Fong"
__credits__ = ["Anthony Fong"]
__license__ = ""
__version__ = "0.1.0"
__maintainer__ = "Anthony Fong"
__email__ = ""
__status__ = "Beta"

# Default Libraries #
import argparse
import csv
import io
import math
import sys
import warnings

# Downloaded Libraries #
import numpy as np

# Local Libraries #
from .applications import proposition_3_1, proposition_3_2
from .bounds import (Corollary, Identity, Side, Variant, corollary_eval, hh_chain_classical, hh_chain_geometric,
                     lemma_identity_check, theorem_2_2, theorem_2_3)
from .exceptions import (ConfigurationError, DomainError, HHVerifyError, PreconditionWarning,
                         QuadratureConvergenceError)
from .functions import ConvexityKind, ConvexityParams, check_convexity, get_family, parse_function_spec
from .kernels import h1, h2, h3
from .quadrature import Interval, Tolerances
from .sweep import (FORMATS, SCHEMA_VERSION, SIDES, SweepConfig, load_config_file, render_csv, render_json,
                    run_sweep, write_atomic)
from .verifylogging import VerificationLogger, WarningsLogger


# Definitions #
EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_NO_CONVERGENCE = 3

CHECKS = ("lemma", "chain", "thm22", "thm23", "prop31", "prop32", "convexity", "corollary")
LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")

LEMMA_SAFETY = 10.0
DEFAULT_KERNEL_RANGE = "0.01:100:5"

_logger = VerificationLogger("hhverify", module_of_class=__name__)


# Functions #
def _add_tolerance_arguments(parser):
    parser.add_argument("--rel-tol", type=float, default=None, help="relative integration tolerance")
    parser.add_argument("--abs-tol", type=float, default=None, help="absolute integration tolerance")


def build_parser():
    """Builds the argument parser of the command line app.

    Returns:
        argparse.ArgumentParser: The parser with the verify, sweep and kernels subcommands.
    """
    parser = argparse.ArgumentParser(prog="hhverify",
                                     description="Numerically verifies Hermite-Hadamard type inequalities for "
                                                 "s-geometrically convex functions.")
    parser.add_argument("--log-level", choices=LOG_LEVELS, default="WARNING", help="the level logged to stderr")
    subparsers = parser.add_subparsers(dest="command", required=True)

    verify = subparsers.add_parser("verify", help="runs one check and prints one JSON report")
    verify.add_argument("check", choices=CHECKS)
    verify.add_argument("--f", default=None, help="function specification, e.g. power_shift:s=0.5")
    verify.add_argument("--a", type=float, required=True)
    verify.add_argument("--b", type=float, required=True)
    verify.add_argument("--s", type=float, default=None,
                        help="convexity exponent, defaults to the parameter s of the function or 1")
    verify.add_argument("--q", type=float, default=1.0)
    verify.add_argument("--side", choices=SIDES, default="both")
    verify.add_argument("--variant", choices=("printed", "derived"), default="derived")
    verify.add_argument("--identity", choices=("eq_2_1", "eq_2_2", "both"), default="both")
    verify.add_argument("--chain", choices=("geometric", "classical"), default="geometric")
    verify.add_argument("--kind", choices=[kind.value for kind in ConvexityKind],
                        default=ConvexityKind.GEOMETRICALLY_CONVEX.value)
    verify.add_argument("--derivative", action="store_true", help="checks the convexity of |f'|^q instead of f")
    verify.add_argument("--samples", type=int, default=100_000)
    verify.add_argument("--which", choices=[c.value for c in Corollary], default=Corollary.THM22_S1.value)
    verify.add_argument("--no-precondition-check", dest="check_preconditions", action="store_false")
    verify.add_argument("--out", default=None, help="writes the report to a file instead of stdout")
    _add_tolerance_arguments(verify)
    verify.set_defaults(handler=cmd_verify)

    sweep = subparsers.add_parser("sweep", help="evaluates a bound over a grid and writes a report")
    sweep.add_argument("--config", default=None, help="a flat key = value file with the same keys as the flags")
    sweep.add_argument("--f", default=None)
    sweep.add_argument("--a", default=None, help="values '0.1,0.2' or inclusive ranges 'start:stop:count'")
    sweep.add_argument("--b", default=None)
    sweep.add_argument("--s", default=None)
    sweep.add_argument("--q", default=None)
    sweep.add_argument("--theorem", choices=("thm22", "thm23"), default=None)
    sweep.add_argument("--side", choices=SIDES, default=None)
    sweep.add_argument("--variant", choices=("printed", "derived"), default=None)
    sweep.add_argument("--format", choices=FORMATS, default=None)
    sweep.add_argument("--out", default=None)
    sweep.add_argument("--workers", type=int, default=None)
    sweep.add_argument("--upper-triangle", dest="upper_triangle", action="store_const", const=True, default=None,
                       help="drops (a, b) pairs with a >= b")
    sweep.add_argument("--no-precondition-check", dest="check_preconditions", action="store_const", const=False,
                       default=None)
    _add_tolerance_arguments(sweep)
    sweep.set_defaults(handler=cmd_sweep)

    kernels = subparsers.add_parser("kernels", help="tabulates h1, h2, h3 and h1 + h2 - h3")
    grid = kernels.add_mutually_exclusive_group()
    grid.add_argument("--u", default=None, help="comma separated arguments")
    grid.add_argument("--range", dest="u_range", default=None, help="log grid 'lo:hi:count'")
    kernels.add_argument("--format", choices=("table", "json", "csv"), default="table")
    kernels.add_argument("--out", default=None, help="writes the table to a file instead of stdout")
    kernels.set_defaults(handler=cmd_kernels)

    return parser


def _emit(text, out=None):
    if out is None:
        sys.stdout.write(text)
    else:
        write_atomic(out, text)


def _tolerances(args):
    return Tolerances.from_environment(rel=args.rel_tol, abs=args.abs_tol)


def _sides(side):
    if side == "both":
        return Side.PRODUCT_VS_FAFB, Side.PRODUCT_VS_FSQRT
    return (Side.parse(side),)


def _function_and_s(args):
    """Parses --f, filling the family's parameter s from --s when the string leaves it out."""
    if args.f is None:
        raise ConfigurationError(f"verify {args.check} needs --f")
    family = get_family(args.f.partition(":")[0].strip())
    if args.s is not None and "s" in family.parameters:
        spec = parse_function_spec(args.f, s=args.s)
    else:
        spec = parse_function_spec(args.f)
    s = args.s if args.s is not None else spec.parameters.get("s", 1.0)
    return spec, s


# Verify
def _verify_lemma(args, tol):
    spec, _ = _function_and_s(args)
    interval = Interval(args.a, args.b)
    identities = list(Identity) if args.identity == "both" else [Identity(args.identity)]
    scale = max(abs(float(spec.value(args.a) * spec.value(args.b))),
                float(spec.value(interval.geometric_midpoint)) ** 2)
    threshold = LEMMA_SAFETY * max(tol.abs, tol.rel * (1.0 + scale))

    reports = []
    for identity in identities:
        residual = lemma_identity_check(spec, interval, identity, tol)
        reports.append({"identity": identity.value, "spec": str(spec), "a": args.a, "b": args.b,
                        "residual": residual, "threshold": threshold, "holds": residual <= threshold})
    return reports


def _verify_chain(args, tol):
    spec, _ = _function_and_s(args)
    chain = hh_chain_geometric if args.chain == "geometric" else hh_chain_classical
    return [chain(spec, (args.a, args.b), tol, args.check_preconditions).to_dict()]


def _verify_theorem(args, tol):
    spec, s = _function_and_s(args)
    params = ConvexityParams(s, args.q)
    reports = []
    for side in _sides(args.side):
        if args.check == "thm22":
            report = theorem_2_2(spec, (args.a, args.b), params, side, tol, args.check_preconditions)
        elif args.check == "thm23":
            report = theorem_2_3(spec, (args.a, args.b), params, side, args.variant, tol, args.check_preconditions)
        else:
            report = corollary_eval(args.which, spec, (args.a, args.b), params, tol, side, args.variant,
                                    args.check_preconditions)
        reports.append(report.to_dict())
    return reports


def _verify_proposition(args, tol):
    if args.s is None:
        raise ConfigurationError(f"verify {args.check} needs --s")
    proposition = proposition_3_1 if args.check == "prop31" else proposition_3_2
    return [proposition(args.a, args.b, args.s, args.q, tol, side).to_dict() for side in _sides(args.side)]


def _verify_convexity(args, tol):
    spec, s = _function_and_s(args)
    kind = ConvexityKind(args.kind)
    witness = check_convexity(spec, (args.a, args.b), kind, s=s if kind.needs_s else None, samples=args.samples,
                              q=args.q if args.derivative else None)
    out = witness.to_dict()
    out.update(spec=str(spec), a=args.a, b=args.b)
    return [out]


_VERIFIERS = {
    "lemma": _verify_lemma,
    "chain": _verify_chain,
    "thm22": _verify_theorem,
    "thm23": _verify_theorem,
    "corollary": _verify_theorem,
    "prop31": _verify_proposition,
    "prop32": _verify_proposition,
    "convexity": _verify_convexity,
}


def cmd_verify(args):
    """Runs one check and prints a JSON document holding its reports.

    Args:
        args (argparse.Namespace): The parsed verify arguments.

    Returns:
        int: 0 when every report holds, 1 otherwise.
    """
    try:
        args.variant = Variant.parse(args.variant)
    except ValueError:
        raise ConfigurationError(f"unknown variant {args.variant!r}") from None
    tol = _tolerances(args)
    reports = _VERIFIERS[args.check](args, tol)
    holds = all(report["holds"] for report in reports)
    payload = {"schema_version": SCHEMA_VERSION, "command": "verify", "check": args.check, "holds": holds,
               "reports": reports}
    _emit(render_json(payload), args.out)
    return EXIT_OK if holds else EXIT_FAILED


# Sweep
def cmd_sweep(args):
    """Runs a sweep configured by a file and flags, flags taking precedence, and writes its report.

    Args:
        args (argparse.Namespace): The parsed sweep arguments.

    Returns:
        int: 0 when every row holds, 1 otherwise.
    """
    values = load_config_file(args.config) if args.config is not None else {}
    for key in ("f", "a", "b", "s", "q", "theorem", "side", "variant", "rel_tol", "abs_tol", "format", "out",
                "workers", "upper_triangle", "check_preconditions"):
        value = getattr(args, key)
        if value is not None:
            values[key] = value

    config = SweepConfig.from_mapping(values)
    result = run_sweep(config)
    text = render_csv(result) if config.format == "csv" else render_json(result.to_dict())
    _emit(text, config.out)
    return EXIT_OK if result.holds else EXIT_FAILED


# Kernels
def kernel_grid(u=None, u_range=None):
    """The arguments of a kernel table.

    Args:
        u (str, optional): Comma separated arguments.
        u_range (str, optional): A logarithmic grid 'lo:hi:count' with 0 < lo <= hi.

    Returns:
        list: The arguments in order.
    """
    if u is not None:
        try:
            values = [float(item) for item in u.split(",") if item.strip()]
        except ValueError:
            raise DomainError(f"--u must be comma separated numbers, got {u!r}") from None
        if not values:
            raise DomainError("--u is empty")
        return values

    parts = (u_range or DEFAULT_KERNEL_RANGE).split(":")
    try:
        lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
    except (IndexError, ValueError):
        raise DomainError(f"--range must be lo:hi:count, got {u_range!r}") from None
    if len(parts) != 3 or not (math.isfinite(lo) and math.isfinite(hi)) or not 0.0 < lo <= hi or count < 1:
        raise DomainError(f"--range needs 0 < lo <= hi and a positive count, got {u_range!r}")
    return [float(v) for v in np.geomspace(lo, hi, count)]


def kernel_rows(values):
    """list: One dict per argument with h1, h2, h3 and the identity residual h1 + h2 - h3."""
    rows = []
    for u in values:
        first, second, third = h1(u), h2(u), h3(u)
        rows.append({"u": u, "h1": first, "h2": second, "h3": third, "identity": first + second - third})
    return rows


def _kernel_table(rows):
    columns = ("u", "h1", "h2", "h3", "h1+h2-h3")
    lines = ["".join(f"{name:>24}" for name in columns)]
    for row in rows:
        cells = (row["u"], row["h1"], row["h2"], row["h3"], row["identity"])
        lines.append("".join(f"{value:>24.16g}" for value in cells))
    return "\n".join(lines) + "\n"


def cmd_kernels(args):
    """Prints the kernel table.

    Args:
        args (argparse.Namespace): The parsed kernels arguments.

    Returns:
        int: 0.
    """
    rows = kernel_rows(kernel_grid(args.u, args.u_range))
    if args.format == "json":
        text = render_json({"schema_version": SCHEMA_VERSION, "command": "kernels", "rows": rows})
    elif args.format == "csv":
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(("u", "h1", "h2", "h3", "identity"))
        for row in rows:
            writer.writerow([format(row[key], ".17g") for key in ("u", "h1", "h2", "h3", "identity")])
        text = buffer.getvalue()
    else:
        text = _kernel_table(rows)
    _emit(text, args.out)
    return EXIT_OK


def main(argv=None):
    """Runs the command line app.

    Args:
        argv (list, optional): The arguments without the program name, sys.argv[1:] by default.

    Returns:
        int: The exit code.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as error:
        return error.code if isinstance(error.code, int) else EXIT_USAGE

    handler = _logger.add_default_stream_handler(sys.stderr, level=args.log_level)
    previous_level = _logger.level
    _logger.set_level(args.log_level)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("always", PreconditionWarning)
            with WarningsLogger("hhverify.warnings", module_of_class=__name__):
                return args.handler(args)
    except QuadratureConvergenceError as error:
        _logger.error("%s", error)
        return EXIT_NO_CONVERGENCE
    except (HHVerifyError, ValueError) as error:
        _logger.error("%s", error)
        return EXIT_USAGE
    except OSError as error:
        _logger.error("%s", error)
        return EXIT_USAGE
    finally:
        _logger.removeHandler(handler)
        _logger.setLevel(previous_level)


if __name__ == "__main__":
    sys.exit(main())
