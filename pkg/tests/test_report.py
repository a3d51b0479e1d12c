from __future__ import annotations

import csv
import io
import json

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from isl.report import (FAIL, GATED, INFO, PASS, ResidualReport, emit_report, records_from_json, to_csv, to_json,
                        to_text)


def _sample() -> ResidualReport:
    rep = ResidualReport()
    rep.check("1.6.v", 1e-12, 1e-9, 1)
    rep.check("1.6.iv", 2e-12, 1e-9, 0)
    rep.check("10.1", 0.5, 1e-9, 0, note="broken")
    rep.check("1.6.iv", 3e-12, 1e-9, 1)
    rep.gated("6.14", "xi not Killing", 0, 0.2)
    rep.info("3.36", 0.25, 1)
    return rep


def test_status_aggregation():
    rep = _sample()
    assert rep.status("1.6.iv") == PASS
    assert rep.status("10.1") == FAIL
    assert rep.status("6.14") == GATED
    assert rep.status("3.36") == INFO
    assert not rep.passed and rep.exit_code == 1
    assert rep.max_residual("1.6.iv") == 3e-12


def test_gated_and_info_records_never_fail_a_run():
    rep = ResidualReport()
    rep.gated("6.14", "why", 0, 10.0)
    rep.info("3.36", 1e9)
    assert rep.passed and rep.exit_code == 0


def test_non_finite_residuals_fail():
    rep = ResidualReport()
    rep.check("a", float("nan"), 1.0)
    rep.check("b", np.inf, 1.0)
    assert rep.status("a") == FAIL and rep.status("b") == FAIL


def test_identity_ids_sort_numerically():
    ids = [r.identity for r in _sample().sorted_records()]
    assert ids == ["1.6.iv", "1.6.iv", "1.6.v", "3.36", "6.14", "10.1"]


def test_text_report_lists_every_status_marker():
    text = to_text(_sample())
    for marker in ("PASS", "FAIL", "GATED", "INFO"):
        assert marker in text
    assert text.splitlines()[-1].endswith("-> FAIL")


def test_json_round_trip_preserves_records():
    rep = _sample()
    text = to_json(rep, {"seed": 1})
    back = records_from_json(text)
    assert [(r.identity, r.point, r.status, r.residual) for r in back] == \
           [(r.identity, r.point, r.status, r.residual) for r in rep.sorted_records()]
    data = json.loads(text)
    assert data["scenario"] == {"seed": 1} and data["summary"]["n_fail"] == 1


def test_csv_has_one_row_per_record():
    rep = _sample()
    rows = list(csv.reader(io.StringIO(to_csv(rep))))
    assert rows[0][:3] == ["identity", "point", "residual"]
    assert len(rows) - 1 == len(rep.records)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.sampled_from(["1.6.i", "2.6.ii", "3.1"]), st.integers(0, 5),
                          st.floats(0, 1, allow_nan=False)), max_size=20))
def test_emission_does_not_depend_on_insertion_order(items):
    a, b = ResidualReport(), ResidualReport()
    for ident, k, v in items:
        a.check(ident, v, 0.5, k)
    for ident, k, v in sorted(items, key=lambda t: (t[1], t[0]), reverse=True):
        b.check(ident, v, 0.5, k)
    if len({(i, k) for i, k, _ in items}) == len(items):
        assert to_json(a) == to_json(b) and to_csv(a) == to_csv(b)


def test_emit_report_writes_file(tmp_path):
    path = tmp_path / "r.csv"
    out = emit_report(_sample(), "csv", str(path))
    assert path.read_text() == out
