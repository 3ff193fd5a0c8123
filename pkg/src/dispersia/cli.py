"""Command-line entry point: ``dispersia run | validate | limits``."""
import argparse
import sys
from pathlib import Path

from . import __version__
from .errors import ParseError, ValidationError
from .scenario import (csv_header, emit_csv, format_float, limits, output_factors,
                       parse_scenario, run_scenario)

EXIT_OK, EXIT_UNCONVERGED, EXIT_INVALID = 0, 1, 2


def _load(path):
    path = Path(path)
    return parse_scenario(path.read_text(), base_dir=path.parent)


def _report(exc):
    if isinstance(exc, ParseError):
        print(f"parse error: {exc}", file=sys.stderr)
    else:
        for err in exc.errors:
            print(f"invalid: {err}", file=sys.stderr)


def _cmd_validate(args):
    try:
        scenario = _load(args.scenario)
    except (ParseError, ValidationError) as exc:
        _report(exc)
        return EXIT_INVALID
    print(f"ok: {scenario.kind}, {len(scenario.sweep)} sweep points")
    return EXIT_OK


def _cmd_run(args):
    try:
        scenario = _load(args.scenario)
    except (ParseError, ValidationError) as exc:
        _report(exc)
        return EXIT_INVALID
    if args.rel_tol is not None:
        scenario.spec = scenario.spec.__class__(rel_tol=args.rel_tol, rule=scenario.spec.rule)
    units = args.units or scenario.units
    try:
        sweep_factor, value_factor = output_factors(scenario, units)
    except ValueError as exc:
        print(f"invalid: {exc}", file=sys.stderr)
        return EXIT_INVALID
    rows = run_scenario(scenario)
    text = emit_csv(rows, csv_header(scenario, units), sweep_factor, value_factor)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    for row in rows:
        for flag in row.flags:
            if flag.startswith("error"):
                print(f"{scenario.sweep_variable}={format_float(row.sweep * sweep_factor)}: "
                      f"{flag}", file=sys.stderr)
    return EXIT_OK if all(r.converged for r in rows) else EXIT_UNCONVERGED


def _cmd_limits(args):
    try:
        scenario = _load(args.scenario)
    except (ParseError, ValidationError) as exc:
        _report(exc)
        return EXIT_INVALID
    table = limits(scenario)
    if table is None:
        print(f"no closed-form limits for kind {scenario.kind!r}", file=sys.stderr)
        return EXIT_OK
    units = args.units or scenario.units
    try:
        sweep_factor, value_factor = output_factors(scenario, units)
    except ValueError as exc:
        print(f"invalid: {exc}", file=sys.stderr)
        return EXIT_INVALID
    names, rows = table
    print(f"# units: {units}")
    print(",".join(("sweep",) + tuple(names)))
    for x, vals in zip(scenario.sweep, rows):
        print(",".join([format_float(x * sweep_factor)]
                       + [format_float(v * value_factor) for v in vals]))
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="dispersia", description=__doc__)
    parser.add_argument("--version", action="version", version=f"dispersia {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="evaluate a scenario and write CSV")
    run.add_argument("scenario")
    run.add_argument("--out", help="output CSV path (default: stdout)")
    run.add_argument("--rel-tol", type=float, help="override the scenario tolerance")
    run.add_argument("--units", choices=("si", "natural"), help="output units")
    run.set_defaults(func=_cmd_run)

    val = sub.add_parser("validate", help="parse and check a scenario without computing")
    val.add_argument("scenario")
    val.set_defaults(func=_cmd_validate)

    lim = sub.add_parser("limits", help="print analytic asymptotes for the sweep")
    lim.add_argument("scenario")
    lim.add_argument("--units", choices=("si", "natural"), help="output units")
    lim.set_defaults(func=_cmd_limits)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
