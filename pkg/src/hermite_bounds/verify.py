"""Table reproduction, bound-validity sweeps and convergence sweeps.

Everything here is deterministic: grids are walked in a fixed order and the
reports contain no timestamps, so two runs at the same precision serialize
to identical bytes.
"""

from __future__ import annotations

import csv
import io
import json
import math
import statistics
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from typing import Iterable, Sequence

from .expansion import Case, ExpansionRequest, parse_param
from .highprec import DEFAULT_PRECISION, BigReal, context
from .oracle import RemainderSample, actual_epsilon

__all__ = [
    "TABLE_TOLERANCE",
    "PublishedCell",
    "TableRow",
    "SweepPoint",
    "SweepReport",
    "STANDARD_GRIDS",
    "CONVERGENCE_DEFAULTS",
    "load_published",
    "reproduce_tables",
    "bound_sweep",
    "convergence_sweep",
    "printed_form",
    "to_json",
    "to_csv",
    "CSV_COLUMNS",
]

TABLE_TOLERANCE = 1.5e-3
REPORT_DIGITS = 16
CSV_COLUMNS = (
    "case", "n", "param", "p", "computed_actual", "computed_bound",
    "paper_actual", "paper_bound", "ratio", "pass",
)

STANDARD_GRIDS = {
    Case.OUTER: {"n": (10, 25, 50, 100), "param": ("0.5", "1", "2", "4"), "p": (1, 2, 3)},
    Case.OSCILLATORY: {"n": (10, 25, 50, 100), "param": ("pi/6", "pi/4", "pi/3", "pi/2"), "p": (0, 1, 2, 3)},
    Case.TURNING: {"n": (10, 25, 50, 100), "param": (None,), "p": tuple(range(3, 11))},
}

# alpha = pi/2 puts x = 0, where the oscillating factor is +-1 for even n;
# at other angles the remainder oscillates with N and has no clean slope.
CONVERGENCE_DEFAULTS = {
    Case.OUTER: {"param": "1", "p": 2, "slope_tolerance": 0.15},
    Case.OSCILLATORY: {"param": "pi/2", "p": 2, "slope_tolerance": 0.15},
    Case.TURNING: {"param": None, "p": 4, "slope_tolerance": 0.2},
}
DEFAULT_N_LIST = (101, 201, 401, 801)


@dataclass(frozen=True)
class PublishedCell:
    table: int
    case: Case
    n: int
    param: str | None
    p: int
    actual: str
    bound: str
    cell: str


def load_published() -> list[PublishedCell]:
    text = resources.files("hermite_bounds").joinpath("data/published_tables.json").read_text()
    return [
        PublishedCell(r["table"], Case(r["case"]), r["n"], r["param"], r["p"], r["actual"], r["bound"], r["cell"])
        for r in json.loads(text)["rows"]
    ]


def make_request(case: Case | str, n: int, param: str | None, p: int,
                 precision: int = DEFAULT_PRECISION) -> ExpansionRequest:
    case = Case(case)
    value = parse_param(param) if param is not None else None
    if case is Case.OUTER:
        return ExpansionRequest(case, n, p, beta=value, precision=precision)
    if case is Case.OSCILLATORY:
        return ExpansionRequest(case, n, p, alpha=value, precision=precision)
    return ExpansionRequest(case, n, p, precision=precision)


def printed_form(value: BigReal, like: str) -> str:
    """Truncate |value| to the layout of ``like`` (``0.dddd e k``)."""
    mantissa_text, _, exp_text = like.lower().partition("e")
    decimals = len(mantissa_text.split(".")[1])
    exponent = int(exp_text)
    ctx = context(value.precision)
    scaled = ctx.floor(abs(value.value) * ctx.mpf(10) ** (decimals - exponent))
    digits = str(int(scaled)).rjust(decimals + 1, "0")
    return f"{digits[:-decimals]}.{digits[-decimals:]}e{exponent}"


def _relative_error(computed: BigReal, published: str) -> float:
    target = Fraction(published)
    return abs(float((abs(computed) - target) / target))


@dataclass(frozen=True)
class TableRow:
    table_id: int
    case: Case
    n: int
    param: str | None
    p: int
    paper_actual: str
    paper_bound: str
    computed_actual: BigReal
    computed_bound: BigReal
    actual_rel_err: float
    bound_rel_err: float
    printed_match: bool
    passed: bool
    cell: str

    @property
    def ratio(self) -> BigReal:
        return abs(self.computed_actual) / self.computed_bound


def reproduce_tables(which: Iterable[int] = (1, 2, 3), precision: int = DEFAULT_PRECISION) -> list[TableRow]:
    wanted = set(which)
    rows = []
    for cell in load_published():
        if cell.table not in wanted:
            continue
        sample = actual_epsilon(make_request(cell.case, cell.n, cell.param, cell.p, precision))
        actual, bound = abs(sample.actual_eps), sample.bound
        actual_err = _relative_error(actual, cell.actual)
        bound_err = _relative_error(bound, cell.bound)
        printed = (printed_form(actual, cell.actual) == cell.actual.lower()
                   and printed_form(bound, cell.bound) == cell.bound.lower())
        rows.append(TableRow(
            table_id=cell.table, case=cell.case, n=cell.n, param=cell.param, p=cell.p,
            paper_actual=cell.actual, paper_bound=cell.bound,
            computed_actual=actual, computed_bound=bound,
            actual_rel_err=actual_err, bound_rel_err=bound_err,
            printed_match=printed,
            passed=actual_err <= TABLE_TOLERANCE and bound_err <= TABLE_TOLERANCE,
            cell=cell.cell,
        ))
    return rows


@dataclass(frozen=True)
class SweepPoint:
    case: Case
    n: int
    param: str | None
    p: int
    actual_eps: BigReal
    bound: BigReal
    ratio: BigReal
    c_tilde: BigReal
    first_omitted: BigReal

    @property
    def N(self) -> int:
        return 2 * self.n + 1

    @classmethod
    def from_sample(cls, sample: RemainderSample, param: str | None) -> "SweepPoint":
        req = sample.request
        return cls(req.case, req.n, param, req.p, sample.actual_eps, sample.bound, sample.ratio,
                   sample.certified.c_tilde, sample.certified.first_omitted)


@dataclass(frozen=True)
class SweepReport:
    kind: str
    case: Case
    grid: dict
    points: tuple[SweepPoint, ...]
    max_ratio: BigReal
    violations: int
    slope: float | None = None
    expected_slope: float | None = None
    slope_tolerance: float | None = None
    c_tilde_gaps: tuple[BigReal, ...] = field(default_factory=tuple)

    @property
    def slope_ok(self) -> bool | None:
        if self.slope is None:
            return None
        return abs(self.slope - self.expected_slope) <= self.slope_tolerance

    @property
    def gaps_monotone(self) -> bool:
        return all(b < a for a, b in zip(self.c_tilde_gaps, self.c_tilde_gaps[1:]))

    @property
    def failures(self) -> int:
        return self.violations + (self.slope_ok is False)


def _summarize(kind, case, grid, points, **extra) -> SweepReport:
    max_ratio = max((pt.ratio for pt in points), default=BigReal.of(0))
    violations = sum(1 for pt in points if pt.ratio > 1)
    return SweepReport(kind, case, grid, tuple(points), max_ratio, violations, **extra)


def bound_sweep(case: Case | str, grid: dict | None = None, precision: int = DEFAULT_PRECISION) -> SweepReport:
    """Compare the bound with the oracle remainder at every grid point."""
    case = Case(case)
    grid = dict(grid or STANDARD_GRIDS[case])
    points = []
    for n in grid["n"]:
        for param in grid.get("param", (None,)):
            for p in grid["p"]:
                sample = actual_epsilon(make_request(case, n, param, p, precision))
                points.append(SweepPoint.from_sample(sample, param))
    return _summarize("bounds", case, grid, points)


def convergence_sweep(case: Case | str, param: str | None = None, p: int | None = None,
                      n_list: Sequence[int] = DEFAULT_N_LIST,
                      precision: int = DEFAULT_PRECISION) -> SweepReport:
    """Fit the slope of log|eps_p| against log N and track C~_p toward its limit."""
    case = Case(case)
    defaults = CONVERGENCE_DEFAULTS[case]
    if param is None:
        param = defaults["param"]
    if p is None:
        p = defaults["p"]
    if list(n_list) != sorted(set(n_list)):
        raise ValueError("N values must be strictly increasing")
    if any(N % 2 == 0 or N < 1 for N in n_list):
        raise ValueError("N = 2n + 1 must be a positive odd integer")
    points = [
        SweepPoint.from_sample(actual_epsilon(make_request(case, (N - 1) // 2, param, p, precision)), param)
        for N in n_list
    ]
    order = p / 3 if case is Case.TURNING else p
    slope = None
    if len(points) >= 2 and all(pt.actual_eps for pt in points):
        fit = statistics.linear_regression(
            [math.log(pt.N) for pt in points],
            [float(context(precision).ln(abs(pt.actual_eps.value))) for pt in points],
        )
        slope = fit.slope
    grid = {"param": param, "p": p, "N": tuple(n_list)}
    return _summarize(
        "convergence", case, grid, points,
        slope=slope, expected_slope=-order, slope_tolerance=defaults["slope_tolerance"],
        c_tilde_gaps=tuple(pt.c_tilde - pt.first_omitted for pt in points),
    )


def _num(x: BigReal | None) -> str:
    return "" if x is None else x.to_decimal_string(REPORT_DIGITS)


def _row_record(row: TableRow) -> dict:
    return {
        "table_id": row.table_id,
        "case": row.case.value,
        "n": row.n,
        "param": row.param,
        "p": row.p,
        "paper_actual": row.paper_actual,
        "paper_bound": row.paper_bound,
        "computed_actual": _num(row.computed_actual),
        "computed_bound": _num(row.computed_bound),
        "actual_rel_err": f"{row.actual_rel_err:.3e}",
        "bound_rel_err": f"{row.bound_rel_err:.3e}",
        "printed_match": row.printed_match,
        "pass": row.passed,
        "cell": row.cell,
    }


def _point_record(pt: SweepPoint) -> dict:
    return {
        "case": pt.case.value,
        "n": pt.n,
        "N": pt.N,
        "param": pt.param,
        "p": pt.p,
        "actual_eps": _num(pt.actual_eps),
        "bound": _num(pt.bound),
        "ratio": _num(pt.ratio),
        "c_tilde": _num(pt.c_tilde),
        "first_omitted": _num(pt.first_omitted),
    }


def _report_record(report: SweepReport) -> dict:
    grid = {k: list(v) if isinstance(v, tuple) else v for k, v in report.grid.items()}
    return {
        "kind": report.kind,
        "case": report.case.value,
        "grid": grid,
        "points": [_point_record(pt) for pt in report.points],
        "summary": {
            "max_ratio": _num(report.max_ratio),
            "violations": report.violations,
            "slope": None if report.slope is None else f"{report.slope:+.6f}",
            "expected_slope": None if report.expected_slope is None else f"{report.expected_slope:+.6f}",
            "slope_tolerance": report.slope_tolerance,
            "slope_ok": report.slope_ok,
            "c_tilde_gaps": [_num(g) for g in report.c_tilde_gaps],
        },
    }


def to_json(rows: Sequence[TableRow] = (), reports: Sequence[SweepReport] = ()) -> str:
    payload = {}
    if rows:
        payload["tables"] = [_row_record(r) for r in rows]
        payload["tables_passed"] = sum(r.passed for r in rows)
        payload["tables_total"] = len(rows)
    if reports:
        payload["sweeps"] = [_report_record(r) for r in reports]
    return json.dumps(payload, indent=2) + "\n"


def to_csv(rows: Sequence[TableRow] = (), reports: Sequence[SweepReport] = ()) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in rows:
        writer.writerow([r.case.value, r.n, r.param or "", r.p, _num(r.computed_actual), _num(r.computed_bound),
                         r.paper_actual, r.paper_bound, _num(r.ratio), str(r.passed).lower()])
    for report in reports:
        for pt in report.points:
            writer.writerow([pt.case.value, pt.n, pt.param or "", pt.p, _num(pt.actual_eps), _num(pt.bound),
                             "", "", _num(pt.ratio), str(not pt.ratio > 1).lower()])
    return buf.getvalue()
