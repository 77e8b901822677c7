"""Command-line front end.

Verbs: ``eval``, ``bound``, ``check``, ``sweep``, ``table``, ``tightness``,
``crossover``.  Output is JSON (default) or CSV; magnitudes are rendered
as (sign, log_abs) pairs plus a plain decimal whenever |log_abs| < 700.

Exit codes: 0 success (all checks HOLDS/INCONCLUSIVE), 1 some check
VIOLATED, 2 usage error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from typing import Optional

from .bounds import BoundId, Point, bound_value
from .errors import BesselIntError, InvalidDomain, NonConvergence, NotFound
from .oracle import TOL_MAX, TOL_MIN, IntegralSpec, bessel_integral
from .scaled import ScaledValue
from .verifier import (
    Grid,
    Verdict,
    _sv_dict,
    check_point,
    default_grid,
    find_crossover,
    logspace,
    relative_error_table,
    sweep,
    tightness_scan,
)

__all__ = ["run", "main"]

EXIT_OK = 0
EXIT_VIOLATED = 1
EXIT_USAGE = 2
EXIT_NUMERICAL = 3


def _float_list(text: str) -> list[float]:
    try:
        return [float(part) for part in text.split(",") if part != ""]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad numeric list {text!r}: {exc}")


def _bound_id(text: str) -> BoundId:
    try:
        return BoundId(text.lower())
    except ValueError:
        names = ", ".join(b.value for b in BoundId)
        raise argparse.ArgumentTypeError(f"unknown bound {text!r}; choose from: {names}")


def _tolerance(text: str) -> float:
    try:
        tol = float(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))
    if not TOL_MIN <= tol <= TOL_MAX:
        raise argparse.ArgumentTypeError(
            f"tolerance must lie in [{TOL_MIN}, {TOL_MAX}], got {tol}")
    return tol


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="besselint",
        description="Evaluate, bound and certify incomplete Bessel integrals "
                    "of the family e^(-gamma t) t^mu I_ord(t).",
    )
    sub = parser.add_subparsers(dest="verb", required=True)

    def add_common(p, default_format="json"):
        p.add_argument("--format", choices=("json", "csv"), default=default_format)
        p.add_argument("--tol", type=_tolerance, default=1e-10,
                       help=f"relative tolerance in [{TOL_MIN}, {TOL_MAX}]")

    p = sub.add_parser("eval", help="quadrature value of the integral")
    p.add_argument("--mu", type=float, required=True)
    p.add_argument("--ord", type=float, required=True, dest="ord_")
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--x", type=float, required=True)
    add_common(p)

    p = sub.add_parser("bound", help="closed-form bound value at a point")
    p.add_argument("--bound", type=_bound_id, required=True)
    p.add_argument("--nu", type=float, required=True)
    p.add_argument("--n", type=float, default=0.0)
    p.add_argument("--mu", type=float, default=None)
    p.add_argument("--gamma", type=float, default=0.0)
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--series-tol", type=float, default=1e-12)
    add_common(p)

    p = sub.add_parser("check", help="verdict for one bound at one point")
    p.add_argument("--bound", type=_bound_id, required=True)
    p.add_argument("--nu", type=float, required=True)
    p.add_argument("--n", type=float, default=0.0)
    p.add_argument("--mu", type=float, default=None)
    p.add_argument("--gamma", type=float, default=0.0)
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--exploratory", action="store_true",
                   help="skip the hypothesis check and probe anyway")
    add_common(p)

    p = sub.add_parser("sweep", help="certification sweep over a parameter grid")
    p.add_argument("--bounds", default="all",
                   help="comma-separated bound ids, or 'all'")
    p.add_argument("--nu", type=_float_list, default=None)
    p.add_argument("--gamma", type=_float_list, default=None)
    p.add_argument("--x", type=_float_list, default=None)
    p.add_argument("--x-logspace", default=None, metavar="LO,HI,COUNT",
                   help="log-spaced x grid, e.g. 1e-3,200,24")
    p.add_argument("--n", type=_float_list, default=None)
    p.add_argument("--mu", type=_float_list, default=None)
    p.add_argument("--threads", type=int, default=None)
    add_common(p)

    p = sub.add_parser("table", help="relative-error table of the two-sided enclosure")
    p.add_argument("--bound", type=_bound_id, required=True)
    p.add_argument("--nu", type=_float_list, required=True)
    p.add_argument("--x", type=_float_list, required=True)
    add_common(p, default_format="csv")

    p = sub.add_parser("tightness", help="bound/oracle ratios along an x sequence")
    p.add_argument("--bound", type=_bound_id, required=True)
    p.add_argument("--nu", type=float, required=True)
    p.add_argument("--n", type=float, default=0.0)
    p.add_argument("--mu", type=float, default=None)
    p.add_argument("--gamma", type=float, default=0.0)
    p.add_argument("--x", type=_float_list, default=None)
    p.add_argument("--x-logspace", default=None, metavar="LO,HI,COUNT")
    add_common(p)

    p = sub.add_parser("crossover", help="abscissa where the PROP1 comparison flips")
    p.add_argument("--mu", type=float, required=True)
    p.add_argument("--nu", type=float, required=True)
    p.add_argument("--gamma", type=float, default=0.0)
    p.add_argument("--x-max", type=float, default=500.0)
    add_common(p)

    return parser


def _xs_from_args(args) -> list[float]:
    if getattr(args, "x_logspace", None):
        parts = args.x_logspace.split(",")
        if len(parts) != 3:
            raise InvalidDomain("--x-logspace expects LO,HI,COUNT")
        lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
        return list(logspace(lo, hi, count))
    if getattr(args, "x", None):
        return list(args.x)
    raise InvalidDomain("one of --x or --x-logspace is required")


def _fmt(value: float) -> str:
    return f"{value:.17g}"


def _sv_csv_fields(v: ScaledValue) -> list[str]:
    d = _sv_dict(v)
    return [str(d["sign"]), _fmt(d["log_abs"]),
            "" if d["decimal"] is None else _fmt(d["decimal"])]


def _emit_json(payload: dict, out) -> None:
    json.dump(payload, out, indent=2, sort_keys=False, allow_nan=True)
    out.write("\n")


def _report_csv_row(r) -> list[str]:
    p = r.point
    return [
        r.bound.value,
        _fmt(p.nu), _fmt(p.n), "" if p.mu is None else _fmt(p.mu),
        _fmt(p.gamma), _fmt(p.x),
        *_sv_csv_fields(r.bound_value),
        *_sv_csv_fields(r.oracle_value),
        *_sv_csv_fields(r.oracle_err),
        r.verdict.value, _fmt(r.rel_margin), _fmt(r.uncertainty),
        r.direction.value, r.reason or "",
    ]


_REPORT_HEADER = [
    "bound", "nu", "n", "mu", "gamma", "x",
    "bound_sign", "bound_log_abs", "bound_decimal",
    "oracle_sign", "oracle_log_abs", "oracle_decimal",
    "oracle_err_sign", "oracle_err_log_abs", "oracle_err_decimal",
    "verdict", "rel_margin", "uncertainty", "direction", "reason",
]


def _merge_negative_values(argv: list[str]) -> list[str]:
    """Join ``--flag -0.25,...`` into ``--flag=-0.25,...`` so argparse does
    not mistake negative numbers for option names."""
    merged: list[str] = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        nxt = argv[i + 1] if i + 1 < len(argv) else None
        if (tok.startswith("--") and "=" not in tok and nxt is not None
                and len(nxt) > 1 and nxt[0] == "-" and (nxt[1].isdigit() or nxt[1] == ".")):
            merged.append(f"{tok}={nxt}")
            i += 2
        else:
            merged.append(tok)
            i += 1
    return merged


def run(argv: Optional[list[str]] = None, out=None) -> int:
    """Parse argv, execute, write to ``out`` (default stdout), return exit code."""
    out = out if out is not None else sys.stdout
    parser = _parser()
    try:
        args = parser.parse_args(_merge_negative_values(
            list(argv) if argv is not None else sys.argv[1:]))
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK

    try:
        return _dispatch(args, out)
    except (InvalidDomain, NotFound, NonConvergence, BesselIntError) as exc:
        print(f"besselint {args.verb}: {type(exc).__name__}: {exc}", file=sys.stderr)
        if isinstance(exc, InvalidDomain):
            return EXIT_USAGE
        return EXIT_NUMERICAL


def _dispatch(args, out) -> int:
    verb = args.verb

    if verb == "eval":
        spec = IntegralSpec(args.mu, args.ord_, args.gamma, args.x)
        result = bessel_integral(spec, args.tol)
        payload = {
            "command": "eval",
            "parameters": {"mu": args.mu, "ord": args.ord_, "gamma": args.gamma,
                           "x": args.x, "tol": args.tol},
            "results": [{
                "value": _sv_dict(result.value),
                "abs_err": _sv_dict(result.abs_err),
                "segments": result.segments,
                "converged": result.converged,
            }],
            "summary": {"converged": result.converged},
        }
        if args.format == "json":
            _emit_json(payload, out)
        else:
            w = csv.writer(out)
            w.writerow(["value_sign", "value_log_abs", "value_decimal",
                        "err_sign", "err_log_abs", "err_decimal",
                        "segments", "converged"])
            w.writerow([*_sv_csv_fields(result.value), *_sv_csv_fields(result.abs_err),
                        result.segments, result.converged])
        return EXIT_OK if result.converged else EXIT_NUMERICAL

    if verb == "bound":
        ev = bound_value(args.bound, nu=args.nu, n=args.n, mu=args.mu,
                         gamma=args.gamma, x=args.x, series_tol=args.series_tol)
        payload = {
            "command": "bound",
            "parameters": {"bound": args.bound.value, "nu": args.nu, "n": args.n,
                           "mu": args.mu, "gamma": args.gamma, "x": args.x,
                           "series_tol": args.series_tol},
            "results": [{
                "value": _sv_dict(ev.value),
                "direction": ev.direction.value,
                "truncation_terms": ev.truncation_terms,
                "tail_bound": _sv_dict(ev.tail_bound),
            }],
            "summary": {"direction": ev.direction.value},
        }
        if args.format == "json":
            _emit_json(payload, out)
        else:
            w = csv.writer(out)
            w.writerow(["value_sign", "value_log_abs", "value_decimal",
                        "direction", "truncation_terms",
                        "tail_sign", "tail_log_abs", "tail_decimal"])
            w.writerow([*_sv_csv_fields(ev.value), ev.direction.value,
                        ev.truncation_terms, *_sv_csv_fields(ev.tail_bound)])
        return EXIT_OK

    if verb == "check":
        point = Point(nu=args.nu, n=args.n, mu=args.mu, gamma=args.gamma, x=args.x)
        report = check_point(args.bound, point, tol=args.tol,
                             exploratory=args.exploratory)
        payload = {
            "command": "check",
            "parameters": {"bound": args.bound.value, **_point_params(point),
                           "tol": args.tol, "exploratory": args.exploratory},
            "results": [report.to_dict()],
            "summary": {"verdict": report.verdict.value},
        }
        if args.format == "json":
            _emit_json(payload, out)
        else:
            w = csv.writer(out)
            w.writerow(_REPORT_HEADER)
            w.writerow(_report_csv_row(report))
        return EXIT_VIOLATED if report.verdict is Verdict.VIOLATED else EXIT_OK

    if verb == "sweep":
        if args.bounds.strip().lower() == "all":
            ids = list(BoundId)
        else:
            ids = [_bound_id(tok) for tok in args.bounds.split(",") if tok]
        base = default_grid()
        xs = None
        if args.x_logspace or args.x:
            xs = tuple(_xs_from_args(args))
        grid = Grid(
            nu_values=tuple(args.nu) if args.nu else base.nu_values,
            gamma_values=tuple(args.gamma) if args.gamma else base.gamma_values,
            x_values=xs if xs is not None else base.x_values,
            n_values=tuple(args.n) if args.n else base.n_values,
            mu_values=tuple(args.mu) if args.mu else base.mu_values,
        )
        result = sweep(ids, grid, tol=args.tol, threads=args.threads)
        payload = {
            "command": "sweep",
            "parameters": {
                "bounds": [b.value for b in sorted(set(ids), key=lambda b: b.value)],
                "nu": list(grid.nu_values), "gamma": list(grid.gamma_values),
                "x": list(grid.x_values), "n": list(grid.n_values),
                "mu": list(grid.mu_values), "tol": args.tol,
            },
            **result.to_dict(),
        }
        if args.format == "json":
            _emit_json(payload, out)
        else:
            w = csv.writer(out)
            w.writerow(_REPORT_HEADER)
            for r in result.reports:
                w.writerow(_report_csv_row(r))
        return EXIT_VIOLATED if result.counts["violated"] else EXIT_OK

    if verb == "table":
        table = relative_error_table(args.bound, args.nu, args.x, tol=args.tol)
        if args.format == "json":
            payload = {
                "command": "table",
                "parameters": {"bound": args.bound.value, "nu": list(args.nu),
                               "x": list(args.x), "tol": args.tol},
                "results": table.to_dict()["entries"],
                "summary": {"nu_values": list(args.nu), "x_values": list(args.x)},
            }
            _emit_json(payload, out)
        else:
            w = csv.writer(out)
            w.writerow(["nu"] + [_fmt(x) for x in table.x_values])
            for nu, row in zip(table.nu_values, table.entries):
                w.writerow([_fmt(nu)] + [f"{v:.4f}" for v in row])
        return EXIT_OK

    if verb == "tightness":
        xs = _xs_from_args(args)
        template = Point(nu=args.nu, n=args.n, mu=args.mu, gamma=args.gamma,
                         x=xs[0])
        ratios = tightness_scan(args.bound, template, xs, tol=args.tol)
        payload = {
            "command": "tightness",
            "parameters": {"bound": args.bound.value, "nu": args.nu, "n": args.n,
                           "mu": args.mu, "gamma": args.gamma, "x": xs,
                           "tol": args.tol},
            "results": [{"x": x, "ratio": r} for x, r in zip(xs, ratios)],
            "summary": {"final_ratio": ratios[-1] if ratios else None},
        }
        if args.format == "json":
            _emit_json(payload, out)
        else:
            w = csv.writer(out)
            w.writerow(["x", "ratio"])
            for x, r in zip(xs, ratios):
                w.writerow([_fmt(x), _fmt(r)])
        return EXIT_OK

    if verb == "crossover":
        xstar = find_crossover(args.mu, args.nu, args.gamma, x_max=args.x_max,
                               tol=max(args.tol / 10.0, TOL_MIN))
        payload = {
            "command": "crossover",
            "parameters": {"mu": args.mu, "nu": args.nu, "gamma": args.gamma,
                           "x_max": args.x_max, "tol": args.tol},
            "results": [{"crossover": xstar}],
            "summary": {"found": xstar is not None},
        }
        if args.format == "json":
            _emit_json(payload, out)
        else:
            w = csv.writer(out)
            w.writerow(["crossover"])
            w.writerow(["" if xstar is None else _fmt(xstar)])
        return EXIT_OK

    raise InvalidDomain(f"unknown verb {verb!r}")


def _point_params(p: Point) -> dict:
    return {"nu": p.nu, "n": p.n, "mu": p.mu, "gamma": p.gamma, "x": p.x}


def main() -> int:
    return run()


if __name__ == "__main__":
    sys.exit(main())
