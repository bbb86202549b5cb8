"""Command-line front end: ``dirforms <subcommand> [flags]``.

Exit codes: 0 success, 1 a verification or reproduction check failed,
2 usage error or malformed series file.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import random
import sys
from fractions import Fraction

import mpmath as mp

from . import bounds, evaluation, forms, saddle
from .series import PeriodicSeries, SeriesFormatError, preset, PRESETS

DEFAULT_PRECISION = 50


class UsageError(Exception):
    pass


def _default_precision() -> int:
    raw = os.environ.get("DIRFORMS_PRECISION")
    if raw is None:
        return DEFAULT_PRECISION
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"DIRFORMS_PRECISION must be an integer, got {raw!r}") from None


def _load_series(spec: str) -> PeriodicSeries:
    if spec in PRESETS:
        return preset(spec)
    if not os.path.exists(spec):
        raise UsageError(f"--series: {spec!r} is neither a preset ({', '.join(sorted(PRESETS))}) nor a file")
    return PeriodicSeries.load(spec)


def _emit(payload, fmt: str, out) -> None:
    if fmt == "json":
        out.write(json.dumps(payload, indent=2) + "\n")
    else:
        _emit_text(payload, out, "")


def _emit_text(payload, out, prefix: str) -> None:
    if isinstance(payload, dict):
        for key, value in payload.items():
            if isinstance(value, (dict, list)):
                out.write(f"{prefix}{key}:\n")
                _emit_text(value, out, prefix + "  ")
            else:
                out.write(f"{prefix}{key}: {value}\n")
    elif isinstance(payload, list):
        for item in payload:
            if isinstance(item, (dict, list)):
                out.write(f"{prefix}-\n")
                _emit_text(item, out, prefix + "  ")
            else:
                out.write(f"{prefix}- {item}\n")
    else:
        out.write(f"{prefix}{payload}\n")


# -- subcommands ---------------------------------------------------------------------

def _params(args, n=None) -> forms.FormParams:
    try:
        return forms.FormParams(args.d, args.a, args.b, args.n if n is None else n)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_construct(args, out) -> int:
    params = _params(args)
    table, coeffs = forms.construct(params)
    payload = {
        "d": params.d, "a": params.a, "b": params.b, "n": params.n,
        "D": str(coeffs.D),
        "A": {str(j): str(v) for j, v in sorted(coeffs.A.items())},
        "B": {str(m): str(v) for m, v in sorted(coeffs.B.items())},
        "scaled_A": {str(j): str(v) for j, v in sorted(coeffs.scaled_A.items())},
        "scaled_B": {str(m): str(v) for m, v in sorted(coeffs.scaled_B.items())},
        "partial_fractions": {f"{l},{j}": str(v) for (l, j), v in sorted(table.entries.items())},
    }
    _emit(payload, args.format, out)
    return 0


def _verify_one(params: forms.FormParams) -> list[forms.CheckReport]:
    rep = forms.build_P(params)
    table = forms.partial_fractions(rep)
    coeffs = forms.linear_form_coeffs(table)
    rng = random.Random(f"{params.d},{params.a},{params.b},{params.n}")
    points = []
    while len(points) < 10:
        t = Fraction(rng.randint(-10**6, 10**6), rng.randint(1, 997))
        if t.denominator != 1 or t % params.d != 0 or abs(t) > params.d * params.n:
            points.append(t)
    return [forms.integrality_check(table, coeffs), forms.identity_check(table),
            forms.reconstruction_check(rep, table, points)]


def cmd_verify(args, out) -> int:
    n_max = args.n_max if args.n_max is not None else (args.n or 3)
    rows, ok = [], True
    for n in range(1, n_max + 1):
        reports = _verify_one(_params(args, n))
        ok = ok and all(reports)
        rows.append({"n": n, **{r.name: {"passed": r.passed, "checked": r.checked, "counterexample": r.counterexample}
                                for r in reports}})
    _emit({"d": args.d, "a": args.a, "b": args.b, "passed": ok, "results": rows}, args.format, out)
    return 0 if ok else 1


def cmd_eval(args, out) -> int:
    series = _load_series(args.series)
    args.d = series.d
    prec = evaluation.PrecisionSpec(digits=args.precision)
    if args.n_max is not None:
        rates = evaluation.rate_empirical(series, _params(args, 1), range(1, args.n_max + 1), prec)
        payload = {"series": series.label, "d": series.d, "a": args.a, "b": args.b,
                   "rates": [{"n": n, "log_abs_I_over_n": None if v is None else mp.nstr(v, args.precision)}
                             for n, v in rates]}
        _emit(payload, args.format, out)
        return 0
    report = evaluation.cross_check(series, _params(args), prec)
    payload = report.to_dict()
    payload["passed"] = report.passed
    _emit(payload, args.format, out)
    return 0 if report.passed else 1


def cmd_saddle(args, out) -> int:
    series = _load_series(args.series) if args.series else None
    d = series.d if series else args.d
    if args.a is None or args.b is None or d is None:
        raise UsageError("saddle needs --a, --b and --d (or --series)")
    try:
        ctx = saddle.SaddleContext(d, args.a, args.b, args.precision)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    digits = min(args.precision, 30)
    geo = saddle.find_x1_rho(ctx)
    lams = [args.lam] if args.lam is not None else list(range(d + 1))
    for lam in lams:
        if not 0 <= lam <= d:
            raise UsageError(f"--lambda must lie in [0, {d}]")
    payload = {"d": d, "a": args.a, "b": args.b, "geometry": geo.to_dict(digits),
               "saddle_points": [saddle.find_t_lambda(ctx, lam).to_dict(digits) for lam in lams]}
    lam0 = d
    if series is not None:
        if not series.is_real:
            raise UsageError("saddle analysis needs a real series")
        spec = saddle.b_lambdas(series, args.precision)
        payload["spectrum"] = spec.to_dict(digits)
        lam0 = spec.lambda0
    pred = saddle.rate_prediction(ctx, lam0)
    payload["rate_predicted"] = {"lambda0": lam0, "value": mp.nstr(pred.value, digits),
                                 "error_bound": mp.nstr(pred.error_bound, 5), "method": pred.method}
    if args.n is not None:
        payload["J_asymptotic"] = []
        for lam in lams:
            log_mag, phase = saddle.J_asymptotic(ctx, lam, args.n)
            payload["J_asymptotic"].append({"lambda": lam, "n": args.n, "log_magnitude": mp.nstr(log_mag, digits),
                                            "phase": mp.nstr(phase, digits)})
    suite = saddle.lemma_suite(ctx)
    payload["lemma_suite"] = {name: {"passed": ok, "detail": detail} for name, (ok, detail) in suite.checks.items()}
    payload["passed"] = suite.passed
    _emit(payload, args.format, out)
    return 0 if suite.passed else 1


_VARIANT = {"with-slack": "with_slack", "no-slack": "no_slack", "exact": "exact"}


def cmd_bound(args, out) -> int:
    series = _load_series(args.series) if args.series else None
    d = series.d if series else args.d
    if args.a is None or args.b is None or d is None:
        raise UsageError("bound needs --a, --b and --d (or --series)")
    try:
        report = bounds.delta_bound(series, args.a, args.b, d, _VARIANT[args.variant], args.mode, args.strict,
                                    args.precision)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    _emit(report.to_dict(min(args.precision, 30)), args.format, out)
    return 0


def cmd_table(args, out) -> int:
    ds = [args.d] if args.d is not None else sorted(bounds.TABLES)
    rows = []
    for d in ds:
        try:
            rows.extend(bounds.reproduce_table(d, args.precision))
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    ok = all(row.matched for row in rows)
    if args.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow((["d"] if len(ds) > 1 else []) + bounds.CSV_COLUMNS)
        for row in rows:
            writer.writerow(([str(row.d)] if len(ds) > 1 else []) + row.csv_row())
        out.write(buf.getvalue())
    else:
        payload = [{"d": row.d, "a": row.a, "b": row.b, "printed_value": row.printed_value,
                    "printed_delta": row.printed_delta,
                    "values": {k: mp.nstr(v, 15) for k, v in row.values.items()},
                    "matched_variant": row.matched_variant, "delta": row.delta, "matched": row.matched,
                    "hypothesis_numeric": row.hypothesis_numeric, "hypothesis_analytic": row.hypothesis_analytic}
                   for row in rows]
        _emit(payload, args.format, out)
    return 0 if ok else 1


def cmd_search(args, out) -> int:
    if args.d is None or args.target_dim is None or args.a_limit is None:
        raise UsageError("search needs --d, --target-dim and --a-limit")
    variant = _VARIANT[args.variant]
    if variant == "exact":
        raise UsageError("search runs on the closed variants (with-slack, no-slack)")
    try:
        result = bounds.search_min_params(args.d, args.target_dim, args.a_limit, variant, args.strict,
                                          args.precision)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    payload = {"d": args.d, "target_dim": args.target_dim, "a_limit": args.a_limit, "variant": variant,
               "found": result.found}
    if result.found:
        payload.update({"a": result.a, "b": result.b, "report": result.report.to_dict(min(args.precision, 30))})
    _emit(payload, args.format, out)
    return 0 if result.found else 1


def cmd_demo(args, out) -> int:
    if args.d is None:
        raise UsageError("demo needs --d")
    mu = mp.mpf(args.mu) if args.mu is not None else mp.mpf("1.5")
    C = mp.mpf(args.C) if args.C is not None else mu * (args.d + mp.log(2)) + mp.mpf("0.1")
    try:
        rows = bounds.asymptotic_demo(args.d, C, mu, args.t, _VARIANT[args.variant], args.precision)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    payload = [{"t": r.t, "a": r.a, "b": r.b, "value": mp.nstr(r.value, 15),
                "log_t_over_d_plus_log2": mp.nstr(r.log_t_scaled, 15), "ratio": mp.nstr(r.ratio, 15),
                "log_a_over_C": mp.nstr(r.log_a_over_C, 15), "rigorous": r.rigorous} for r in rows]
    _emit(payload, args.format, out)
    return 0


# -- parser ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--d", type=int, help="period of the series")
    common.add_argument("--a", type=int, help="pole order a (a >= 2b)")
    common.add_argument("--b", type=int, help="numerator width b >= 1")
    common.add_argument("--n", type=int, help="index n >= 1")
    common.add_argument("--n-max", type=int, dest="n_max", help="run n = 1..n-max")
    common.add_argument("--precision", type=int, help="decimal digits (>= 10; default $DIRFORMS_PRECISION or 50)")
    common.add_argument("--format", choices=["json", "csv", "text"], default="json")
    common.add_argument("--series", help=f"preset ({', '.join(sorted(PRESETS))}) or path to a series JSON file")
    common.add_argument("--variant", choices=sorted(_VARIANT), default="with-slack")
    common.add_argument("--mode", choices=["analytic", "numeric"], default="numeric")
    common.add_argument("--strict", action=argparse.BooleanOptionalAction, default=None,
                        help="keep all four caps on rho (default: on unless d = 1)")
    common.add_argument("--lambda", type=int, dest="lam", help="saddle index in [0, d]")
    common.add_argument("--target-dim", type=int, dest="target_dim")
    common.add_argument("--a-limit", type=int, dest="a_limit")
    common.add_argument("--mu", help="exponent mu > 1 for the demo (default 1.5)")
    common.add_argument("--C", help="constant C for the log(a)/C comparison")
    common.add_argument("--t", type=int, nargs="+", default=[20, 50, 100], help="demo sample points")

    parser = argparse.ArgumentParser(prog="dirforms", description="Linear forms in values of periodic Dirichlet series.")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "construct": (cmd_construct, "build the rational function, its partial fractions and the form coefficients"),
        "verify": (cmd_verify, "check integrality, parity/reflection identities and exact reconstruction for n <= n-max"),
        "eval": (cmd_eval, "evaluate I(n) by the tail sum and by the coefficients, or log|I(n)|/n with --n-max"),
        "saddle": (cmd_saddle, "saddle points t_lambda, rho, predicted decay rate and the lemma checks"),
        "bound": (cmd_bound, "dimension lower bound 1 + alpha/beta with the hypothesis verdict"),
        "table": (cmd_table, "recompute the printed bound tables for d = 1..4"),
        "search": (cmd_search, "smallest a with a bound above --target-dim"),
        "demo": (cmd_demo, "large-a behaviour of the bound against log t and log a"),
    }
    for name, (func, text) in helps.items():
        p = sub.add_parser(name, parents=[common], help=text, description=text)
        p.set_defaults(func=func)
    return parser


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.precision is None:
            args.precision = _default_precision()
        if args.precision < 10:
            raise UsageError("--precision must be >= 10")
        if args.func in (cmd_construct, cmd_verify) and (args.d is None or args.a is None or args.b is None):
            raise UsageError(f"{args.command} needs --d, --a and --b")
        if args.func is cmd_construct and args.n is None:
            raise UsageError("construct needs --n")
        if args.func is cmd_eval and (args.a is None or args.b is None or (args.n is None and args.n_max is None)):
            raise UsageError("eval needs --a, --b and --n (or --n-max)")
        if args.func is cmd_eval and args.series is None:
            args.series = "zeta"
        return args.func(args, out)
    except SeriesFormatError as exc:
        sys.stderr.write(f"dirforms: malformed series file: {exc}\n")
        return 2
    except UsageError as exc:
        sys.stderr.write(f"dirforms: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
