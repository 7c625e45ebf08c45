import csv
import json
from fractions import Fraction

from finclass.census import count_klein_subgroups, count_order_elements
from finclass.groups import atlas
from finclass.report import (build_reports, count_report, measured_exponent,
                             write_csv, write_figure)


def test_count_report_schema():
    rep = count_report(atlas("SL_3_2"), "i4")
    doc = rep.to_json()
    assert set(doc) == {"group", "statistic", "value",
                        "exponent_num", "exponent_den", "window"}
    assert doc["value"] == 42 and doc["window"] == "3/4"
    assert doc["exponent_num"] / doc["exponent_den"] < 1
    assert json.dumps(doc)  # serializable


def test_measured_exponent():
    assert measured_exponent(0, 100) is None
    assert measured_exponent(10, 100) == Fraction(1, 2)
    e = measured_exponent(42, 168)
    assert abs(float(e) - 0.7294) < 1e-3


def test_su32_diagnostics_emitted():
    # the exponent diagnostics run over SU_3(2) as well; the hard content
    # is only exactness plus i4 < |G|
    at = atlas("SU_3_2")
    i4 = count_order_elements(at.generators, 4)
    i2x2 = count_klein_subgroups(at.generators)
    assert 0 <= i4 < at.order
    rep = count_report(at, "i4")
    assert rep.value == i4
    assert i2x2 >= 0


def test_write_outputs(tmp_path):
    reports = build_reports(["SL_3_2", "Sp_4_2"])
    csv_path = write_csv(reports, tmp_path / "r.csv")
    with open(csv_path) as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["group", "statistic", "value",
                       "exponent_num", "exponent_den", "window"]
    assert len(rows) == 1 + len(reports)
    fig_path = write_figure(reports, tmp_path / "r.png")
    assert fig_path.exists() and fig_path.stat().st_size > 1000
