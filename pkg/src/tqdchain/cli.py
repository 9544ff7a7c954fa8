"""Command-line front end: ``tqdchain {spectrum,discord,figure,sweep,fit}``.

Exit codes: 0 success, 1 usage error, 2 numerical failure.
"""

import argparse
import csv
import io
import json
import logging
import math
import sys

import numpy as np

from .discord import Bipartition
from .matcore import eigh
from .spinmodel import analytic_spectrum, make_model
from .sweep import (
    COLUMNS,
    Branch,
    NoConvergence,
    SweepSpec,
    evaluate,
    figure_spec,
    fit_critical_line,
    run_sweep,
)

log = logging.getLogger("tqdchain")

SPECTRUM_TOL = 1e-9


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def format_number(x):
    """12 significant digits; scientific with lowercase e below 1e-4 or from 1e6 up."""
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x)).lower()
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if x == 0:
        return "0"
    if not math.isfinite(x):
        return str(x)
    if abs(x) < 1e-4 or abs(x) >= 1e6:
        return f"{x:.11e}"
    return f"{x:.12g}"


def _cell(v):
    return v if isinstance(v, str) else format_number(v)


def _json_value(v):
    if v is None or isinstance(v, str):
        return v
    # round-trip through the fixed text format so csv and json agree
    return json.loads(format_number(v)) if math.isfinite(float(v)) else str(v)


def write_rows(rows, columns, fmt, out):
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\r\n")
        w.writerow(columns)
        for r in rows:
            w.writerow([_cell(r[c]) for c in columns])
        out.write(buf.getvalue())
    else:
        payload = [{c: _json_value(r[c]) for c in columns} for r in rows]
        out.write(json.dumps(payload, indent=1) + "\n")


def _add_model_flags(p):
    p.add_argument("--model", choices=("spin", "magnetic"), required=True)
    p.add_argument("--j1", type=float, default=None)
    p.add_argument("--j", type=float, default=1.0)
    p.add_argument("--b", type=float, default=None)


def _add_format(p):
    p.add_argument("--format", choices=("csv", "json"), default="csv")


def _model_from_args(args):
    if args.model == "spin":
        if args.b is not None:
            raise UsageError("--b applies to --model magnetic only")
        if args.j1 is None:
            raise UsageError("--model spin needs --j1")
    elif args.j1 is not None:
        raise UsageError("--j1 applies to --model spin only")
    for name in ("j1", "j", "b"):
        v = getattr(args, name)
        if v is not None and not math.isfinite(v):
            raise UsageError(f"--{name} must be finite")
    return make_model(args.model, j1=args.j1, j=args.j, b=args.b)


def build_parser():
    parser = _Parser(prog="tqdchain", description=__doc__.splitlines()[0])
    parser.add_argument("--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("spectrum", help="numeric vs closed-form eigenvalues")
    _add_model_flags(p)
    _add_format(p)

    p = sub.add_parser("discord", help="discord of one thermal state")
    _add_model_flags(p)
    p.add_argument("--temp", type=float, required=True)
    p.add_argument("--bipartition", default="pair_12")
    _add_format(p)

    p = sub.add_parser("figure", help="dataset behind one of the four figures")
    p.add_argument("--figure", type=int, required=True)
    p.add_argument("--panel", default=None)
    p.add_argument("--spec", default=None, help="JSON SweepSpec overriding the figure grid")
    p.add_argument("--workers", type=int, default=1)
    _add_format(p)

    p = sub.add_parser("sweep", help="run a sweep described by a JSON SweepSpec")
    p.add_argument("--spec", required=True)
    p.add_argument("--workers", type=int, default=1)
    _add_format(p)

    p = sub.add_parser("fit", help="fit J1c(T) on one branch")
    p.add_argument("--j", type=float, required=True)
    p.add_argument("--branch", required=True)
    p.add_argument("--bipartition", default="pair_12")
    p.add_argument("--tmin", type=float, default=1.0)
    p.add_argument("--tmax", type=float, default=10.0)
    p.add_argument("--tpoints", type=int, default=19)
    p.add_argument("--threshold", type=float, default=1e-6)
    p.add_argument("--gap-reference", choices=("plateau", "local"), default="plateau")
    p.add_argument("--workers", type=int, default=1)
    _add_format(p)
    return parser


def cmd_spectrum(args, out):
    model = _model_from_args(args)
    numeric = eigh(model.hamiltonian()).eigenvalues
    analytic = analytic_spectrum(model)
    rows = [
        {"index": i, "numeric": float(x), "analytic": a, "abs_deviation": abs(float(x) - a)}
        for i, (x, a) in enumerate(zip(numeric, analytic))
    ]
    worst = max(r["abs_deviation"] for r in rows)
    write_rows(rows, ("index", "numeric", "analytic", "abs_deviation"), args.format, out)
    print(f"max deviation {format_number(worst)}", file=sys.stderr)
    return 0 if worst <= SPECTRUM_TOL else 2


def _bipartition(name):
    try:
        return Bipartition(name)
    except ValueError:
        choices = ", ".join(b.value for b in Bipartition)
        raise UsageError(f"unknown bipartition {name!r} (choose from {choices})") from None


def cmd_discord(args, out):
    model = _model_from_args(args)
    if not args.temp >= 0 or not math.isfinite(args.temp):
        raise UsageError("--temp must be a finite number >= 0")
    row = evaluate(model, args.temp, _bipartition(args.bipartition))
    write_rows([row.as_dict()], COLUMNS, args.format, out)
    return 0


def _load_spec(path):
    try:
        with open(path) as fh:
            return SweepSpec.from_dict(json.load(fh))
    except (OSError, json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"bad sweep spec {path!r}: {exc}") from None


def _emit_sweep(spec, args, out):
    rows = run_sweep(spec, workers=args.workers)
    write_rows([r.as_dict() for r in rows], COLUMNS, args.format, out)
    return 0


def cmd_figure(args, out):
    if args.spec:
        spec = _load_spec(args.spec)
    else:
        try:
            spec = figure_spec(args.figure, args.panel)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    return _emit_sweep(spec, args, out)


def cmd_sweep(args, out):
    return _emit_sweep(_load_spec(args.spec), args, out)


def cmd_fit(args, out):
    try:
        branch = Branch(args.branch)
    except ValueError:
        raise UsageError(f"unknown branch {args.branch!r}") from None
    bip = _bipartition(args.bipartition)
    if not (args.tmin > 0 and args.tmax >= args.tmin and args.tpoints >= 2):
        raise UsageError("need 0 < tmin <= tmax and tpoints >= 2")
    if not args.threshold > 0:
        raise UsageError("--threshold must be > 0")
    temps = np.linspace(args.tmin, args.tmax, args.tpoints)
    fit = fit_critical_line(
        args.j,
        branch,
        bip,
        temperatures=temps,
        threshold=args.threshold,
        gap_reference=args.gap_reference,
        workers=args.workers,
    )
    cols = ("j", "branch", "bipartition", "temp", "j1c", "slope", "intercept", "rms_residual")
    rows = [
        {
            "j": args.j,
            "branch": branch.value,
            "bipartition": bip.value,
            "temp": t,
            "j1c": x,
            "slope": fit.slope,
            "intercept": fit.intercept,
            "rms_residual": fit.rms_residual,
        }
        for t, x in zip(fit.sample_temperatures, fit.samples)
    ]
    write_rows(rows, cols, args.format, out)
    print(
        f"J1c = {format_number(fit.slope)} T + {format_number(fit.intercept)} "
        f"(rms {format_number(fit.rms_residual)})",
        file=sys.stderr,
    )
    return 0


COMMANDS = {
    "spectrum": cmd_spectrum,
    "discord": cmd_discord,
    "figure": cmd_figure,
    "sweep": cmd_sweep,
    "fit": cmd_fit,
}


def main(argv=None, out=None):
    out = sys.stdout if out is None else out
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(f"tqdchain: error: {exc}", file=sys.stderr)
        return 1
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    try:
        return COMMANDS[args.command](args, out)
    except UsageError as exc:
        print(f"tqdchain: error: {exc}", file=sys.stderr)
        return 1
    except NoConvergence as exc:
        print(f"tqdchain: no convergence: {exc}", file=sys.stderr)
        return 2
    except (ArithmeticError, np.linalg.LinAlgError, ValueError) as exc:
        log.debug("numerical failure", exc_info=True)
        print(f"tqdchain: numerical failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
