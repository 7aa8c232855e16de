import csv
import io
import json
import math

import pytest

from coprimelab.analysis import (CSV_COLUMNS, DegreeSeries, degree_series_exact, degree_series_predicted,
                                 entropy_estimate, report_csv, report_emit, report_json,
                                 simple_predicted_degrees, somos4_degree_recursion, toda1d_degree_recursion)
from coprimelab.engines import LatticeWindow, SystemSpec, simple_iterate, somos4_iterate, toda1d_iterate


def test_simple_predicted_values():
    d = simple_predicted_degrees(3, 8)
    assert [d[n] for n in range(2, 9)] == [3, 9, 24, 63, 165, 432, 1131]
    d = simple_predicted_degrees(2, 6)
    assert [d[n] for n in range(2, 7)] == [2, 4, 6, 8, 10]


@pytest.mark.parametrize("r", [2, 3])
def test_exact_equals_predicted_simple(r):
    exact = degree_series_exact(simple_iterate(r, 7))
    pred = degree_series_predicted(SystemSpec.simple(r), 7)
    assert exact.entries == pred.entries
    assert not exact.violations


def test_simple_r3_exact_rows():
    exact = degree_series_exact(simple_iterate(3, 4))
    assert exact.entries[:3] == [(2, 3, 1, 2), (3, 9, 4, 5), (4, 24, 11, 13)]


def test_toda_predicted_matches_exact():
    spec = SystemSpec.toda1d(2, 1, 1, 1)
    exact = degree_series_exact(toda1d_iterate(spec, LatticeWindow(-4, 4, 4)))
    pred = toda1d_degree_recursion(spec, 4)
    assert [(e[1], e[2]) for e in exact.entries] == [pred[t] for t in (2, 3, 4)]
    assert not exact.violations


def test_somos_predicted_matches_exact():
    spec = SystemSpec.somos4(2, 1, 1, 1)
    exact = degree_series_exact(somos4_iterate(spec, 9))
    pred = somos4_degree_recursion(spec, 9)
    assert [(e[1], e[2]) for e in exact.entries] == [pred[n] for n in range(4, 10)]
    assert [e[1] for e in exact.entries] == [4, 10, 22, 52, 120, 274]


@pytest.mark.parametrize("r,target,tol", [(3, (3 + math.sqrt(5)) / 2, 0.01), (4, 2 + math.sqrt(3), 0.01)])
def test_entropy_nonintegrable(r, target, tol):
    est = entropy_estimate(degree_series_predicted(SystemSpec.simple(r), 40).window(20, 40))
    assert abs(est.growth_ratio - target) / target < tol
    assert est.entropy > 0 and est.classification.startswith("nonintegrable")


def test_entropy_integrable():
    est = entropy_estimate(degree_series_predicted(SystemSpec.simple(2), 40).window(20, 40))
    assert abs(est.growth_ratio - 1) <= 0.02
    assert est.entropy == 0 and est.classification.startswith("integrable")


def test_entropy_needs_enough_points():
    with pytest.raises(ValueError):
        entropy_estimate(degree_series_predicted(SystemSpec.simple(3), 5))


def test_monotonicity_violation_recorded():
    from coprimelab.analysis import _record_monotonicity
    s = DegreeSeries("toda1d", "x", [(2, 4, 1, 3), (3, 4, 2, 2)])
    _record_monotonicity(s, "toda1d")
    checks = {v["check"] for v in s.violations}
    assert {"deg p increasing", "d increasing"} <= checks


def test_report_formats(tmp_path):
    assert report_csv([]) == ",".join(CSV_COLUMNS) + "\n"
    s = degree_series_predicted(SystemSpec.simple(3), 7)
    text = report_csv([s])
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[0] == list(CSV_COLUMNS)
    assert rows[1][:6] == ["simple", "r=3", "2", "3", "1", "2"]
    doc = json.loads(report_json([s]))
    series = doc["runs"][0]["series"]
    assert [str(x["deg_p"]) for x in series] == [r[3] for r in rows[1:]]
    a = report_emit([s], out_dir=tmp_path / "a")
    b = report_emit([s], out_dir=tmp_path / "b")
    for x, y in zip(a, b):
        assert open(x, "rb").read() == open(y, "rb").read()
