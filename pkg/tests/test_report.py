import json
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from minpos import DomainError, Interval, classify, iterate, parse_decimal
from minpos.experiments import SweepRecord, figure1_sweep
from minpos.report import Table, serialize, to_table


def test_trajectory_csv(unit):
    text = serialize(iterate(unit, Fraction(1, 10), 2), "csv", 3)
    assert text == "i,value\n0,0\n1,0.100\n2,-0.200\n"


def test_classification_json(fig1):
    doc = json.loads(serialize(classify(fig1, Fraction(9, 10)), "json"))
    assert doc["columns"] == ["verdict", "decided_at"]
    assert doc["rows"] == [["DivergesMinus", "4"]]


def test_json_has_no_float_tokens(fig1):
    text = serialize(figure1_sweep(fig1), "json", 12)
    doc = json.loads(text, parse_float=lambda s: pytest.fail(f"float token {s}"))
    assert all(isinstance(v, str) for row in doc["rows"] for v in row)
    assert text.endswith("}\n")


def test_figure1_is_wide(fig1):
    table = to_table(figure1_sweep(fig1))
    assert len(table.columns) == 11
    assert len(table.rows) == 10


def test_interval_columns_expand():
    rec = SweepRecord("x", (), ("v", "w"), ((1, Interval(0, 1), Fraction(2)),))
    assert serialize(rec, "csv", 2).splitlines()[0] == "i,v_lo,v_hi,w"


def test_csv_has_lf_only(fig1):
    assert "\r" not in serialize(figure1_sweep(fig1))


def test_bad_format_and_digits():
    t = Table((), ("a",), ((1,),))
    with pytest.raises(DomainError):
        serialize(t, "xml")
    with pytest.raises(DomainError):
        serialize(t, "csv", 0)


def test_no_table_for_unknown_objects():
    with pytest.raises(TypeError):
        to_table(object())


@given(st.lists(st.fractions(max_denominator=10**20).filter(bool), min_size=1, max_size=5))
def test_round_trip_at_forty_digits(values):
    t = Table((), ("v",), tuple((v,) for v in values))
    doc = json.loads(serialize(t, "json", 40))
    for (text,), v in zip(doc["rows"], values):
        assert abs(parse_decimal(text) - v) <= abs(v) * Fraction(1, 10**39)
