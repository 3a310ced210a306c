"""``gosper`` command line: list, eval, verify, rate and parse schemes.

Exit codes: 0 success, 2 usage error or unknown scheme, 3 verification
failure or term cap reached.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import statistics
import sys
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from .banded import BandAccumulator, error_estimate
from .numeric import MIN_PRECISION, bits_for_digits, log10_abs, to_decimal
from .reference import GUARD_DIGITS, PoleError, evaluate_target
from .report import EvalReport, build_report
from .schemes import catalog
from .schemes.definition import (
    SchemeDef,
    SchemeError,
    SchemeSyntaxError,
    parse_rational,
    parse_scheme,
    render_expr,
    render_rational,
    render_scheme,
)
from .schemes.run import dense_product, evaluate, stream

__all__ = ["main", "CliError", "resolve_scheme", "custom_schemes", "VERIFY_CAP"]

EXIT_OK, EXIT_USAGE, EXIT_FAIL = 0, 2, 3
VERIFY_CAP = 10_000
RATE_BOUNDS = (10, 1000)
ENV_PATH = "GOSPER_SCHEME_PATH"


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_USAGE):
        super().__init__(message)
        self.code = code


# -- scheme resolution --------------------------------------------------------


def _scheme_dirs() -> List[Path]:
    raw = os.environ.get(ENV_PATH, "")
    return [Path(p) for p in raw.split(os.pathsep) if p]


def custom_schemes(warn=None) -> Dict[str, Tuple[SchemeDef, Path]]:
    """Schemes found in ``$GOSPER_SCHEME_PATH``; unreadable files are reported via ``warn``."""
    found: Dict[str, Tuple[SchemeDef, Path]] = {}
    for d in _scheme_dirs():
        if not d.is_dir():
            continue
        for path in sorted(d.glob("*.scheme")):
            try:
                s = parse_scheme(path.read_text(), validate=False)
            except (SchemeError, OSError) as err:
                if warn:
                    warn(f"skipping {path}: {err}")
                continue
            found.setdefault(s.name, (s, path))
    return found


def parse_params(items: Optional[List[str]]) -> Dict[str, Fraction]:
    params: Dict[str, Fraction] = {}
    for item in items or []:
        name, sep, value = item.partition("=")
        if not sep or not name:
            raise CliError(f"--param expects name=p/q, got {item!r}")
        try:
            params[name.strip()] = parse_rational(value)
        except ValueError as err:
            raise CliError(f"--param {name}: {err}") from None
    return params


def _load_file(path: str) -> SchemeDef:
    try:
        text = Path(path).read_text()
    except OSError as err:
        raise CliError(f"cannot read {path}: {err.strerror}") from None
    try:
        return parse_scheme(text, validate=False)
    except SchemeSyntaxError as err:
        raise CliError(f"{path}:{err.line}:{err.column}: {err.message}") from None
    except SchemeError as err:
        raise CliError(f"{path}: {err}") from None


def resolve_scheme(name: Optional[str], params: Dict[str, Fraction], scheme_file: Optional[str] = None) -> SchemeDef:
    try:
        if scheme_file:
            scheme = _load_file(scheme_file)
        else:
            if not name:
                raise CliError("give --scheme or --scheme-file")
            scheme = catalog.resolve_builtin(name, params)
            if scheme is not None:
                return scheme.validate()
            custom = custom_schemes()
            if name not in custom:
                raise CliError(f"unknown scheme {name!r} (see 'gosper list')")
            scheme = custom[name][0]
        if params:
            scheme = scheme.with_params(**params)
        return scheme.validate()
    except (SchemeError, PoleError, ZeroDivisionError) as err:
        raise CliError(str(err)) from None


# -- commands -----------------------------------------------------------------


def cmd_list(args) -> str:
    rows = []
    for name in catalog.builtin_names():
        f = catalog.FAMILIES[name]
        rows.append({"name": f.name, "dim": f.dim, "targets": f.targets, "params": f.params, "source": "builtin",
                     "line": catalog.describe(f)})
    for name, (s, path) in sorted(custom_schemes(warn=lambda m: print(m, file=sys.stderr)).items()):
        if name in catalog.FAMILIES or catalog.resolve_builtin(name) is not None:
            continue
        rows.append({
            "name": s.name,
            "dim": str(s.dim),
            "targets": ",".join(t.render() for t in s.targets),
            "params": ",".join(f"{k}={render_rational(v)}" for k, v in s.params.items()),
            "source": str(path),
            "line": catalog.describe_scheme(s),
        })
    if args.format == "json":
        return json.dumps([{k: v for k, v in r.items() if k != "line"} for r in rows], indent=2) + "\n"
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["name", "dim", "targets", "params", "source"])
        for r in rows:
            w.writerow([r["name"], r["dim"], r["targets"], r["params"], r["source"]])
        return buf.getvalue()
    return "".join(r["line"] + "\n" for r in rows)


def _precision(args, required: bool) -> Optional[int]:
    if args.backend == "rational":
        return None
    if args.precision is None:
        if required:
            raise CliError("--backend float needs --precision <bits>")
        return None
    if args.precision < MIN_PRECISION:
        raise CliError(f"--precision must be >= {MIN_PRECISION} bits")
    return args.precision


def _render(report: EvalReport, fmt: str) -> str:
    if fmt == "json":
        return report.to_json() + "\n"
    if fmt == "csv":
        return report.to_csv()
    return report.to_text()


def cmd_eval(args) -> str:
    prec = _precision(args, required=True)
    scheme = resolve_scheme(args.scheme, parse_params(args.param), args.scheme_file)
    terms = args.terms
    if terms is None:
        if scheme.infinite:
            raise CliError(f"{scheme.name} is an infinite product; give --terms")
        terms = scheme.finite_terms
    if terms < 1:
        raise CliError("--terms must be >= 1")
    try:
        if args.jobs > 1 and prec is None:
            acc = BandAccumulator.from_gosper(dense_product(scheme, terms, workers=args.jobs), terms)
        else:
            acc = evaluate(scheme, terms, prec)
        report = build_report(scheme, acc, args.digits, with_oracle=not args.no_oracle)
    except (SchemeError, PoleError) as err:
        raise CliError(str(err)) from None
    return _render(report, args.format)


def _verify_terms(scheme: SchemeDef, digits: int, prec: Optional[int]) -> Tuple[BandAccumulator, bool, str]:
    """Stream until the heuristic estimate clears ``digits`` (checked every term)."""
    target = digits + 2
    last = ""
    for acc in stream(scheme, prec, limit=VERIFY_CAP):
        est = error_estimate(acc, scheme.factor(acc.p + 1))
        worst = min(e.digits for e in est)
        if worst >= target:
            return acc, True, ""
        last = f"estimate {worst:.2f} digits"
    alpha = scheme.factor(VERIFY_CAP + 1).alpha
    diag = (f"{scheme.name}: heuristic estimate did not reach {digits} digits within {VERIFY_CAP} terms "
            f"(last {last}; alpha({VERIFY_CAP + 1}) = {to_decimal(alpha, 6)})")
    return acc, False, diag


def cmd_verify(args) -> Tuple[str, int]:
    scheme = resolve_scheme(args.scheme, parse_params(args.param), args.scheme_file)
    digits = args.digits
    if not scheme.targets:
        raise CliError(f"{scheme.name} declares no targets to verify against")
    try:
        if scheme.infinite:
            acc, reached, diag = _verify_terms(scheme, digits, bits_for_digits(digits + 20))
            if not reached:
                print(diag, file=sys.stderr)
                return "", EXIT_FAIL
        else:
            acc = evaluate(scheme)
        report = build_report(scheme, acc, digits)
    except (SchemeError, PoleError) as err:
        raise CliError(str(err)) from None
    passed = all(t.matched_digits >= digits for t in report.targets)
    if args.format == "json":
        out = json.dumps({"passed": passed, "digits": digits, "report": report.to_dict()}, indent=2) + "\n"
    elif args.format == "csv":
        out = report.to_csv()
    else:
        worst = min(t.matched_digits for t in report.targets)
        verdict = "PASS" if passed else "FAIL"
        out = report.to_text() + f"{verdict} {scheme.name}: matched {worst} digits (need {digits}) with {acc.p} terms\n"
    return out, EXIT_OK if passed else EXIT_FAIL


def rate_slopes(scheme: SchemeDef, lo: int, hi: int) -> List[Optional[float]]:
    """Least-squares slope of matched digits against terms over ``lo..hi``, per target."""
    a = abs(float(scheme.factor(hi).alpha))
    per_term = -math.log10(a) if a > 0 else 50.0
    digits = math.ceil(hi * max(per_term, 0.1) * 1.2) + 40
    prec = bits_for_digits(digits)
    refs = [evaluate_target(t, scheme.params, digits + GUARD_DIGITS) for t in scheme.targets]
    points: List[List[Tuple[int, float]]] = [[] for _ in refs]
    for acc in stream(scheme, prec, limit=hi):
        if not acc.prefix:
            # every later factor is multiplied by zero: v is already the limit
            return [None] * len(refs)
        if acc.p < lo:
            continue
        for i, ref in enumerate(refs):
            err = log10_abs(acc.v[i] - ref)
            if err != -math.inf:
                points[i].append((acc.p, -err))
    slopes: List[Optional[float]] = []
    for pts in points:
        if len(pts) < 2:
            slopes.append(None)
            continue
        xs, ys = zip(*pts)
        slopes.append(statistics.linear_regression(xs, ys).slope)
    return slopes


def cmd_rate(args) -> str:
    lo, hi = args.window
    if not (RATE_BOUNDS[0] <= lo < hi <= RATE_BOUNDS[1]):
        raise CliError(f"--window must satisfy {RATE_BOUNDS[0]} <= lo < hi <= {RATE_BOUNDS[1]}")
    scheme = resolve_scheme(args.scheme, parse_params(args.param), args.scheme_file)
    if not scheme.infinite:
        raise CliError(f"{scheme.name} is a finite product; a convergence rate is not defined")
    if not scheme.targets:
        raise CliError(f"{scheme.name} declares no targets")
    try:
        slopes = rate_slopes(scheme, lo, hi)
    except (SchemeError, PoleError) as err:
        raise CliError(str(err)) from None
    finite = [s for s in slopes if s is not None]
    overall = min(finite) if finite else None
    rows = [
        {"index": i + 1, "descriptor": t.render(), "digits_per_term": None if s is None else round(s, 4)}
        for i, (t, s) in enumerate(zip(scheme.targets, slopes))
    ]
    if args.format == "json":
        return json.dumps({
            "scheme": scheme.name,
            "params": {k: render_rational(v) for k, v in scheme.params.items()},
            "window": [lo, hi],
            "digits_per_term": None if overall is None else round(overall, 4),
            "targets": rows,
        }, indent=2) + "\n"
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["scheme", "window", "index", "descriptor", "digits_per_term"])
        for r in rows:
            rate = "" if r["digits_per_term"] is None else repr(r["digits_per_term"])
            w.writerow([scheme.name, f"{lo}-{hi}", r["index"], r["descriptor"], rate])
        return buf.getvalue()
    lines = [f"{scheme.name} window {lo}..{hi}"]
    for r in rows:
        rate = "exact (no error left)" if r["digits_per_term"] is None else f"{r['digits_per_term']:.4f} digits/term"
        lines.append(f"  v{r['index']} -> {r['descriptor']}: {rate}")
    lines.append("rate: " + ("n/a" if overall is None else f"{overall:.4f} digits/term"))
    return "\n".join(lines) + "\n"


def cmd_parse(args) -> str:
    path = args.path or args.scheme_file
    if not path:
        raise CliError("parse needs a scheme file")
    scheme = _load_file(path)
    try:
        scheme.validate()
    except (SchemeError, ZeroDivisionError) as err:
        raise CliError(f"{path}: {err}") from None
    if args.format == "json":
        return json.dumps({
            "name": scheme.name,
            "dim": scheme.dim,
            "params": {k: render_rational(v) for k, v in scheme.params.items()},
            "alpha": render_expr(scheme.alpha),
            "beta": None if scheme.beta is None else render_expr(scheme.beta),
            "u": [render_expr(e) for e in scheme.u],
            "targets": [t.render() for t in scheme.targets],
            "finite": scheme.finite_terms,
        }, indent=2) + "\n"
    return render_scheme(scheme)


# -- argument parsing ---------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "csv", "text"], default="text")

    target = argparse.ArgumentParser(add_help=False)
    target.add_argument("--scheme", help="catalog name such as koecher3, or a custom scheme name")
    target.add_argument("--scheme-file", help="path to a .scheme file")
    target.add_argument("--param", action="append", metavar="NAME=P/Q", help="rational parameter, repeatable")

    p = argparse.ArgumentParser(prog="gosper", description="Accelerated zeta-type series as Gosper matrix products.")
    sub = p.add_subparsers(dest="command", required=True)

    sub.add_parser("list", parents=[common], help="list available schemes")

    e = sub.add_parser("eval", parents=[common, target], help="evaluate a truncated product")
    e.add_argument("--terms", type=int)
    e.add_argument("--backend", choices=["rational", "float"], default="rational")
    e.add_argument("--precision", type=int, help="bits, required for --backend float")
    e.add_argument("--digits", type=int, default=30, help="significant digits shown (default 30)")
    e.add_argument("--jobs", type=int, default=1, help="processes for the exact segmented product")
    e.add_argument("--no-oracle", action="store_true", help="skip the reference comparison")

    v = sub.add_parser("verify", parents=[common, target], help="check a scheme against its oracle")
    v.add_argument("--digits", type=int, default=50)

    r = sub.add_parser("rate", parents=[common, target], help="measure digits gained per term")
    r.add_argument("--window", type=int, nargs=2, default=[50, 100], metavar=("LO", "HI"))

    q = sub.add_parser("parse", parents=[common], help="validate a scheme file and print it canonically")
    q.add_argument("path", nargs="?")
    q.add_argument("--scheme-file")
    return p


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "digits", 1) is not None and getattr(args, "digits", 1) < 1:
        parser.error("--digits must be >= 1")
    try:
        if args.command == "list":
            out, code = cmd_list(args), EXIT_OK
        elif args.command == "eval":
            out, code = cmd_eval(args), EXIT_OK
        elif args.command == "verify":
            out, code = cmd_verify(args)
        elif args.command == "rate":
            out, code = cmd_rate(args), EXIT_OK
        else:
            out, code = cmd_parse(args), EXIT_OK
    except CliError as err:
        print(f"gosper {args.command}: {err}", file=sys.stderr)
        return err.code
    sys.stdout.write(out)
    return code


if __name__ == "__main__":
    sys.exit(main())
