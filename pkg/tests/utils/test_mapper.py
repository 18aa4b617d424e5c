import json
import math

import pytest

from app.data.branch import Branch, BranchSample, BranchStatus, CheckReport, CheckStatus
from app.data.problem import BoundaryKind
from app.data.spectrum import Spectrum, SpectrumEntry
from app.utils.mapper import (
    BRANCH_COLUMNS,
    REPORT_COLUMNS,
    SPECTRUM_COLUMNS,
    format_float,
    map_branch_rows,
    map_report_rows,
    map_spectrum_rows,
    render_csv,
    render_json,
)


def _branch(l, ordinal, points):
    return Branch(
        N=2, l=l, branch_ordinal=ordinal, kind=BoundaryKind.NEUMANN, status=BranchStatus.COMPLETE,
        samples=[BranchSample(sigma=sigma, lam=lam, residual=0.0) for sigma, lam in points],
    )


def test_format_float_uses_17_significant_digits():
    assert format_float(0.1) == "0.10000000000000001"
    assert format_float(0.0) == "0"
    assert format_float(104.5) == "104.5"
    assert format_float(None) == ""


def test_spectrum_csv():
    spectrum = Spectrum(
        N=2, kind=BoundaryKind.DIRICHLET,
        entries=[
            SpectrumEntry(lam=104.5, l=0, multiplicity=1, j_first=1, j_last=1),
            SpectrumEntry(lam=452.25, l=1, multiplicity=2, j_first=2, j_last=3),
        ],
    )
    text = render_csv(map_spectrum_rows(spectrum), SPECTRUM_COLUMNS)

    assert "\r" not in text
    assert text.endswith("\n")
    lines = text.splitlines()
    assert lines[0] == ",".join(SPECTRUM_COLUMNS)
    assert lines[1] == "2,dirichlet,,104.5,0,1,1,1"
    assert lines[2] == "2,dirichlet,,452.25,1,2,2,3"


def test_branch_rows_are_sorted_whatever_the_input_order():
    branches = [
        _branch(2, 1, [(0.0, 30.0), (0.5, 20.0)]),
        _branch(0, 1, [(0.0, 80.0), (0.5, 90.0)]),
    ]
    rows = map_branch_rows(branches)
    assert [(row["l"], row["sigma"]) for row in rows] == [(0, 0.0), (0, 0.5), (2, 0.0), (2, 0.5)]
    assert render_csv(rows, BRANCH_COLUMNS).splitlines()[1] == "2,0,1,0,80"


def test_report_rows_drop_infinite_ratios():
    reports = [
        CheckReport(check="a", status=CheckStatus.PASS, worst_ratio=0.25, location="x"),
        CheckReport(check="b", status=CheckStatus.FAIL, worst_ratio=math.inf, location="y"),
        CheckReport(check="c", status=CheckStatus.SKIPPED),
    ]
    rows = map_report_rows(reports)
    assert rows[1]["worst_ratio"] is None

    document = json.loads(render_json({"reports": rows}))
    assert document["reports"][0] == {"check": "a", "status": "pass", "worst_ratio": 0.25, "location": "x"}
    assert render_csv(rows, REPORT_COLUMNS).splitlines()[3] == "c,skipped,,"


def test_render_json_is_deterministic():
    payload = {"values": [0.1, 1e-300, 123456789.123]}
    assert render_json(payload) == render_json(payload)
    assert json.loads(render_json(payload)) == payload


def test_json_floats_match_csv_digits():
    rows = [{"check": "a", "status": "pass", "worst_ratio": 0.1, "location": None}]
    assert '"worst_ratio": 0.10000000000000001' in render_json({"reports": rows})
    assert render_csv(rows, REPORT_COLUMNS).splitlines()[1] == "a,pass,0.10000000000000001,"


def test_json_rejects_non_finite_floats():
    with pytest.raises(ValueError):
        render_json({"value": math.inf})
