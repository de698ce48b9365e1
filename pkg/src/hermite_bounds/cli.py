"""Command-line entry point.

Usage:
    hermite-bounds eval --case outer --n 50 --beta 1 --p 3
    hermite-bounds eval --case oscillatory --n 100 --alpha pi/4 --p 3 --format text
    hermite-bounds coeffs --family D --max 8
    hermite-bounds verify --tables all
    hermite-bounds verify --sweep bounds --case outer --format csv

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 domain error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass

from . import coeffs, verify
from .expansion import Case, CertifiedValue, OrderError, evaluate, parse_param
from .highprec import DEFAULT_PRECISION, CapabilityError, DomainError, context

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2
EXIT_DOMAIN = 3

MIN_CLI_PRECISION = 64
MAX_COEFF_ORDER = 64
PREC_ENV = "HERMITE_PREC_BITS"


@dataclass(frozen=True)
class CliConfig:
    precision_bits: int = DEFAULT_PRECISION
    output_format: str = "json"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _default_precision() -> int:
    raw = os.environ.get(PREC_ENV)
    if raw is None:
        return DEFAULT_PRECISION
    try:
        return int(raw)
    except ValueError:
        return -1  # rejected by the precision check below


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--prec", type=int, default=None,
                        help=f"working precision in bits (default {DEFAULT_PRECISION}, env {PREC_ENV})")
    common.add_argument("--format", choices=("json", "csv", "text"), default="json")

    parser = _Parser(prog="hermite-bounds", description="Certified Plancherel-Rotach asymptotics of H_n.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    ev = sub.add_parser("eval", parents=[common], help="evaluate one truncated expansion with its bound")
    ev.add_argument("--case", required=True, choices=[c.value for c in Case])
    ev.add_argument("--n", type=int, required=True)
    ev.add_argument("--p", type=int, required=True)
    ev.add_argument("--beta", help="outer case: x = cosh(beta), e.g. 1 or 0.5")
    ev.add_argument("--alpha", help="oscillatory case: x = cos(alpha), e.g. pi/4")

    co = sub.add_parser("coeffs", parents=[common], help="dump exact expansion coefficients")
    co.add_argument("--family", required=True, choices=coeffs.FAMILIES)
    co.add_argument("--max", type=int, required=True, dest="max_order")

    ve = sub.add_parser("verify", parents=[common], help="reproduce published tables and run sweeps")
    ve.add_argument("--tables", help="'all' or a comma list drawn from 1,2,3")
    ve.add_argument("--sweep", choices=("bounds", "convergence"))
    ve.add_argument("--case", choices=[c.value for c in Case],
                    help="restrict sweeps to one case (default: all three)")
    return parser


def _config(args, parser) -> CliConfig:
    prec = args.prec if args.prec is not None else _default_precision()
    if prec < MIN_CLI_PRECISION:
        parser.error(f"precision must be at least {MIN_CLI_PRECISION} bits, got {prec}")
    return CliConfig(prec, args.format)


def _num(x, digits: int = 16) -> str | None:
    return None if x is None else x.to_decimal_string(digits)


def _certified_record(cv: CertifiedValue) -> dict:
    req = cv.request
    ctx = context(req.precision)
    log10_abs = None
    if cv.approximation_sign:
        log10_abs = f"{float(cv.approximation_log.value / ctx.ln(10)):+.15e}"
    return {
        "case": req.case.value,
        "n": req.n,
        "N": req.N,
        "param": None if req.param is None else str(req.param),
        "p": req.p,
        "precision": req.precision,
        "sign": cv.approximation_sign,
        "log10_abs_H": log10_abs,
        "partial_sum": _num(cv.partial_sum, 30),
        "log_prefactor": _num(cv.log_prefactor, 30),
        "approximation_log": _num(cv.approximation_log, 30) if cv.approximation_sign else None,
        "bound": _num(cv.bound),
        "c_tilde": _num(cv.c_tilde),
        "c_next": _num(cv.c_next),
        "first_omitted": _num(cv.first_omitted),
        "theta0": _num(cv.theta0),
        "diagnostics": list(cv.diagnostics),
    }


def _emit_records(records: list[dict], fmt: str, out) -> None:
    if fmt == "json":
        out.write(json.dumps(records if len(records) != 1 else records[0], indent=2) + "\n")
        return
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=list(records[0]), lineterminator="\n")
        writer.writeheader()
        for rec in records:
            writer.writerow({k: ";".join(v) if isinstance(v, list) else ("" if v is None else v)
                             for k, v in rec.items()})
        out.write(buf.getvalue())
        return
    for rec in records:
        out.write("  ".join(f"{k}={v}" for k, v in rec.items() if v not in (None, [])) + "\n")


def cmd_eval(args, cfg: CliConfig, out, parser) -> int:
    case = Case(args.case)
    param = {Case.OUTER: args.beta, Case.OSCILLATORY: args.alpha, Case.TURNING: None}[case]
    if case is not Case.TURNING:
        flag = "--beta" if case is Case.OUTER else "--alpha"
        if param is None:
            parser.error(f"{case.value} case requires {flag}")
        try:
            parse_param(param)
        except ValueError as exc:
            parser.error(f"{flag}: {exc}")
    cv = evaluate(verify.make_request(case, args.n, param, args.p, cfg.precision_bits))
    rec = _certified_record(cv)
    if cfg.output_format == "text":
        out.write(
            f"H_{rec['n']}(sqrt({rec['N']}) x), {rec['case']} case, p={rec['p']}\n"
            f"  sign          {rec['sign']:+d}\n"
            f"  log10|H|      {rec['log10_abs_H']}\n"
            f"  partial sum   {rec['partial_sum']}\n"
            f"  bound         {rec['bound']}\n"
        )
        for d in rec["diagnostics"]:
            out.write(f"  note: {d}\n")
    else:
        _emit_records([rec], cfg.output_format, out)
    return EXIT_OK


def cmd_coeffs(args, cfg: CliConfig, out) -> int:
    if args.max_order > MAX_COEFF_ORDER:
        raise DomainError(f"--max must be <= {MAX_COEFF_ORDER}, got {args.max_order}")
    start = 1 if args.family in ("D", "Q") else 0
    if args.max_order < start:
        raise DomainError(f"family {args.family} starts at j={start}; --max must be >= {start}")
    records = [coeffs.coefficient_record(args.family, j) for j in range(start, args.max_order + 1)]
    if cfg.output_format == "json":
        out.write(json.dumps(records, indent=2) + "\n")
    elif cfg.output_format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(("family", "j", "k", "numerator", "denominator"))
        for rec in records:
            for k, (num, den) in enumerate(rec["coefficients"]):
                writer.writerow((rec["family"], rec["j"], k, num, den))
        out.write(buf.getvalue())
    else:
        for rec in records:
            terms = " + ".join(f"({n}/{d})*t^{k}" if d != "1" else f"({n})*t^{k}"
                               for k, (n, d) in enumerate(rec["coefficients"]) if n != "0")
            out.write(f"{rec['family']}_{rec['j']} = {terms or '0'}\n")
    return EXIT_OK


def _parse_tables(text: str, parser) -> list[int]:
    if text.strip().lower() == "all":
        return [1, 2, 3]
    try:
        which = sorted({int(t) for t in text.split(",")})
    except ValueError:
        parser.error(f"--tables expects 'all' or a comma list of 1,2,3, got {text!r}")
    if not set(which) <= {1, 2, 3}:
        parser.error(f"--tables expects table ids 1, 2 or 3, got {text!r}")
    return which


def cmd_verify(args, cfg: CliConfig, out, parser) -> int:
    if args.tables is None and args.sweep is None:
        parser.error("verify needs --tables and/or --sweep")
    rows = verify.reproduce_tables(_parse_tables(args.tables, parser), cfg.precision_bits) if args.tables else []
    reports = []
    if args.sweep:
        cases = [Case(args.case)] if args.case else list(Case)
        for case in cases:
            if args.sweep == "bounds":
                reports.append(verify.bound_sweep(case, precision=cfg.precision_bits))
            else:
                reports.append(verify.convergence_sweep(case, precision=cfg.precision_bits))
    failures = sum(not r.passed for r in rows) + sum(r.failures for r in reports)
    if cfg.output_format == "json":
        out.write(verify.to_json(rows, reports))
    elif cfg.output_format == "csv":
        out.write(verify.to_csv(rows, reports))
    else:
        for r in rows:
            out.write(f"{'PASS' if r.passed else 'FAIL'}  {r.cell}: |eps| {_num(r.computed_actual, 6)} "
                      f"(printed {r.paper_actual}), bound {_num(r.computed_bound, 6)} (printed {r.paper_bound})\n")
        for rep in reports:
            line = f"{rep.kind} sweep, {rep.case.value}: {len(rep.points)} points, {rep.violations} violations"
            if rep.slope is not None:
                line += f", slope {rep.slope:+.4f} (expected {rep.expected_slope:+.4f})"
            out.write(line + "\n")
        out.write(f"{failures} failure(s)\n")
    return EXIT_VERIFY_FAILED if failures else EXIT_OK


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = _config(args, parser)
        if args.command == "eval":
            return cmd_eval(args, cfg, out, parser)
        if args.command == "coeffs":
            return cmd_coeffs(args, cfg, out)
        return cmd_verify(args, cfg, out, parser)
    except SystemExit as exc:
        return int(exc.code or 0)
    except (DomainError, OrderError, CapabilityError, ValueError) as exc:
        print(f"hermite-bounds: domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
