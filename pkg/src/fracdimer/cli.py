"""Command-line interface: ``fracdimer {evolve,sweep,plot,validate,rates}``.

Exit status is 0 on success, 1 when a validation check or a numerical
evaluation fails, and 2 on usage errors (bad flags, malformed config or
CSV, unknown fields).
"""

from __future__ import annotations

import argparse
import sys

from . import __version__
from .dimer_model import GeometryParams, collective_rates, collective_rates_small_zeta, emission_rate
from .exceptions import FracDimerError, ParseError, UnknownField, ValidationError, ZetaUnderflow
from .sweep_io import PARAMETERS, MEASURE_FIELDS, parse_config, read_csv, render_svg, run_sweep, write_csv

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


class _UsageError(Exception):
    pass


def _add_physics_flags(p):
    g = p.add_argument_group("model parameters (override config values)")
    g.add_argument("--nu1", type=float)
    g.add_argument("--nu2", type=float)
    g.add_argument("--v12", type=float)
    g.add_argument("--p", type=float, help="initial-state amplitude in [0, 1]")
    g.add_argument("--tau", type=float, help="fractional order in (0, 1]")
    g.add_argument("--hbar-tau", dest="hbar_tau", type=float)
    g.add_argument("--t-max", dest="t_max", type=float)
    g.add_argument("--steps", type=int, help="number of time points, including t = 0")
    g.add_argument("--preset", choices=("single_excitation", "ground_excited"))


def _vector(text):
    try:
        parts = [float(x) for x in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected x,y,z, got {text!r}") from None
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected three comma-separated components, got {text!r}")
    return tuple(parts)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="fracdimer",
        description="Time-fractional dynamics of quantum resources in a dipole-coupled dimer.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("evolve", help="single trajectory to CSV")
    p.add_argument("--config", help="config file (must not vary parameters)")
    _add_physics_flags(p)
    p.add_argument("--out", default="-", help="CSV path, '-' for standard output")

    p = sub.add_parser("sweep", help="config-driven parameter sweep to CSV")
    p.add_argument("config", help="config file")
    _add_physics_flags(p)
    p.add_argument("--threads", type=int, help="worker threads (default: FRACDIMER_THREADS)")
    p.add_argument("--out", default="-", help="CSV path, '-' for standard output")

    p = sub.add_parser("plot", help="CSV to SVG line chart")
    p.add_argument("csv", help="CSV written by evolve or sweep")
    p.add_argument("--y", required=True, help=f"one of {', '.join(MEASURE_FIELDS)}")
    p.add_argument("--group-by", dest="group_by", help="column with one line per value, e.g. tau")
    p.add_argument("--out", default="-", help="SVG path, '-' for standard output")

    p = sub.add_parser("validate", help="run the oracle suites")
    p.add_argument("--suite", action="append", choices=("mlfunc", "dimer", "tfse", "qmeasures"))
    p.add_argument("--quick", action="store_true", help="smaller sample counts")
    p.add_argument("--seed", type=int, default=20240501)

    p = sub.add_parser("rates", help="collective decay rate and coherent coupling (natural units)")
    p.add_argument("--gamma1", type=float, default=1.0)
    p.add_argument("--gamma2", type=float, default=1.0)
    p.add_argument("--mu1", type=_vector, default=(1.0, 0.0, 0.0), help="unit dipole 1 as x,y,z")
    p.add_argument("--mu2", type=_vector, default=(1.0, 0.0, 0.0), help="unit dipole 2 as x,y,z")
    p.add_argument("--r-hat", dest="r_hat", type=_vector, default=(0.0, 0.0, 1.0), help="unit separation x,y,z")
    p.add_argument("--zeta", type=float, required=True, help="n k r12")
    p.add_argument("--small-zeta", action="store_true", help="use the small-zeta expansion")
    p.add_argument("--freq", type=float, help="also print the single-emitter rate for this frequency")
    p.add_argument("--dipole-sq", dest="dipole_sq", type=float, default=1.0)
    p.add_argument("--refr-index", dest="refr_index", type=float, default=1.0)
    return parser


def _overrides(args):
    keys = PARAMETERS + ("t_max", "steps", "preset")
    return {k: getattr(args, k) for k in keys if getattr(args, k, None) is not None}


def _read_text(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise _UsageError(f"cannot read {path}: {exc.strerror or exc}") from exc


def _emit_csv(records, out):
    if out == "-":
        write_csv(records, sys.stdout)
    else:
        write_csv(records, out)


def _cmd_evolve(args):
    text = _read_text(args.config) if args.config else ""
    spec = parse_config(text, _overrides(args))
    if spec.varied:
        raise _UsageError("evolve runs a single trajectory; use 'sweep' for varied parameters")
    _emit_csv(run_sweep(spec, workers=1), args.out)
    return EXIT_OK


def _cmd_sweep(args):
    spec = parse_config(_read_text(args.config), _overrides(args))
    if args.threads is not None and args.threads < 1:
        raise _UsageError("--threads must be a positive integer")
    _emit_csv(run_sweep(spec, workers=args.threads), args.out)
    return EXIT_OK


def _cmd_plot(args):
    try:
        records = read_csv(args.csv)
    except OSError as exc:
        raise _UsageError(str(exc)) from exc
    if not records:
        raise _UsageError(f"{args.csv} contains no records")
    if args.out == "-":
        render_svg(records, args.y, args.group_by, sys.stdout)
    else:
        render_svg(records, args.y, args.group_by, args.out)
    return EXIT_OK


def _cmd_validate(args):
    from .validation import format_table, run_suites

    results = run_suites(args.suite, seed=args.seed, quick=args.quick)
    print(format_table(results))
    failed = sum(not r.passed for r in results)
    print(f"{len(results) - failed} passed, {failed} failed")
    return EXIT_OK if failed == 0 else EXIT_FAILURE


def _cmd_rates(args):
    g = GeometryParams(args.gamma1, args.gamma2, args.mu1, args.mu2, args.r_hat, args.zeta)
    try:
        gamma12, j12 = collective_rates_small_zeta(g) if args.small_zeta else collective_rates(g)
    except ZetaUnderflow as exc:
        raise _UsageError(f"{exc} (pass --small-zeta)") from exc
    print(f"gamma12 = {gamma12:.12g}")
    print(f"j12 = {j12:.12g}")
    if args.freq is not None:
        print(f"emission_rate = {emission_rate(args.freq, args.dipole_sq, args.refr_index):.12g}")
    return EXIT_OK


_COMMANDS = {
    "evolve": _cmd_evolve,
    "sweep": _cmd_sweep,
    "plot": _cmd_plot,
    "validate": _cmd_validate,
    "rates": _cmd_rates,
}


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        return _COMMANDS[args.command](args)
    except (_UsageError, ParseError, ValidationError, UnknownField) as exc:
        print(f"fracdimer {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (FracDimerError, OSError) as exc:
        print(f"fracdimer {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
