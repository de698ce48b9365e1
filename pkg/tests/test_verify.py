import csv
import io
import json

import pytest

from hermite_bounds.expansion import Case
from hermite_bounds.highprec import BigReal
from hermite_bounds.verify import (
    CSV_COLUMNS,
    STANDARD_GRIDS,
    TABLE_TOLERANCE,
    bound_sweep,
    convergence_sweep,
    load_published,
    printed_form,
    reproduce_tables,
    to_csv,
    to_json,
)

EXPECTED_COUNTS = {1: 8, 2: 8, 3: 6}


@pytest.fixture(scope="module")
def all_rows():
    return reproduce_tables((1, 2, 3))


def test_fixture_file_shape():
    cells = load_published()
    assert len(cells) == 22
    for table, count in EXPECTED_COUNTS.items():
        assert sum(c.table == table for c in cells) == count
    assert all(c.cell.startswith(f"table {c.table},") for c in cells)


def test_row_counts(all_rows):
    assert len(all_rows) == 22
    for table, count in EXPECTED_COUNTS.items():
        assert sum(r.table_id == table for r in all_rows) == count


def test_every_bound_within_tolerance(all_rows):
    assert max(r.bound_rel_err for r in all_rows) <= TABLE_TOLERANCE


def test_every_cell_reproduces_printed_digits(all_rows):
    # the tables print 0.dddd x 10^k with the trailing digits cut, not rounded
    mismatched = [r.cell for r in all_rows if not r.printed_match]
    assert mismatched == []


def test_every_remainder_below_its_bound(all_rows):
    assert all(r.ratio <= 1 for r in all_rows)


@pytest.mark.parametrize("table", [1, 2, 3])
def test_table_reproduced_within_tolerance(all_rows, table):
    failed = [(r.cell, f"{r.actual_rel_err:.2e}") for r in all_rows if r.table_id == table and not r.passed]
    assert failed == []


def test_printed_form_truncates():
    assert printed_form(BigReal.of("0.00098549"), "0.0985e-2") == "0.0985e-2"
    assert printed_form(BigReal.of("-0.00098551"), "0.0985e-2") == "0.0985e-2"
    assert printed_form(BigReal.of("0.0006615999"), "0.6615e-3") == "0.6615e-3"
    assert printed_form(BigReal.of("2.001e-5"), "0.2001E-4") == "0.2001e-4"


@pytest.mark.parametrize("case, size", [(Case.OUTER, 48), (Case.OSCILLATORY, 64), (Case.TURNING, 32)])
def test_bound_sweeps_have_no_violations(case, size):
    report = bound_sweep(case)
    assert len(report.points) == size
    assert report.violations == 0
    assert report.max_ratio <= 1
    assert report.failures == 0


def test_custom_grid():
    report = bound_sweep("outer", {"n": (5, 7), "param": ("3",), "p": (1, 4)})
    assert [(pt.n, pt.p) for pt in report.points] == [(5, 1), (5, 4), (7, 1), (7, 4)]


@pytest.mark.parametrize("case, param, p, expected", [
    (Case.OUTER, "1", 2, -2.0),
    (Case.OUTER, "1", 1, -1.0),
    (Case.OSCILLATORY, "pi/2", 2, -2.0),
    (Case.TURNING, None, 4, -4 / 3),
])
def test_convergence_slopes(case, param, p, expected):
    report = convergence_sweep(case, param, p)
    assert report.expected_slope == pytest.approx(expected)
    assert report.slope_ok, report.slope


def test_gap_decreases_along_n_list():
    report = convergence_sweep(Case.OUTER, "1", 1)
    assert report.gaps_monotone
    assert all(g > 0 for g in report.c_tilde_gaps)


def test_convergence_rejects_bad_n_list():
    with pytest.raises(ValueError):
        convergence_sweep(Case.OUTER, n_list=(201, 101))
    with pytest.raises(ValueError):
        convergence_sweep(Case.OUTER, n_list=(100, 200))


def test_reports_are_deterministic():
    rows = reproduce_tables((1,))
    sweep = [bound_sweep(Case.TURNING, {"n": (10,), "p": (3, 4)})]
    assert to_json(rows, sweep) == to_json(reproduce_tables((1,)), [bound_sweep(Case.TURNING, {"n": (10,), "p": (3, 4)})])
    assert to_csv(rows, sweep) == to_csv(reproduce_tables((1,)), [bound_sweep(Case.TURNING, {"n": (10,), "p": (3, 4)})])


def test_csv_layout(all_rows):
    table = list(csv.reader(io.StringIO(to_csv([r for r in all_rows if r.table_id == 3]))))
    assert tuple(table[0]) == CSV_COLUMNS
    assert len(table) == 7
    assert {row[0] for row in table[1:]} == {"turning"}


def test_json_layout(all_rows):
    payload = json.loads(to_json(all_rows, [bound_sweep(Case.OUTER, {"n": (10,), "param": ("1",), "p": (1,)})]))
    assert payload["tables_total"] == 22
    assert payload["tables_passed"] == sum(r.passed for r in all_rows)
    row = payload["tables"][0]
    assert {"table_id", "paper_actual", "computed_actual", "pass", "cell"} <= set(row)
    sweep = payload["sweeps"][0]
    assert sweep["summary"]["violations"] == 0 and len(sweep["points"]) == 1


def test_standard_grids_match_documented_sizes():
    sizes = {c: len(g["n"]) * len(g["param"]) * len(g["p"]) for c, g in STANDARD_GRIDS.items()}
    assert sizes == {Case.OUTER: 48, Case.OSCILLATORY: 64, Case.TURNING: 32}
