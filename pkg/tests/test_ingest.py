import pytest
from hypothesis import given, strategies as st

from cohortcap.domain import DayDemand, PatientType, ValidationError
from cohortcap.ingest import (
    DATA_ENV,
    ParseError,
    full_week,
    load_demand_csv,
    parse_demand_csv,
    records_from_rows,
    serialize_demand_csv,
    series_for_type,
    working_days,
)


def test_parse_single_rows():
    h = parse_demand_csv("week,weekday,type1,type2,type3,type4\n1,1,6,12,2,0\n8,6,9,8,2,0\n")
    first, last = h.records
    assert (first.week, first.weekday, first.demand) == (1, 1, DayDemand(6, 12, 2, 0))
    assert (last.week, last.weekday, last.demand) == (8, 6, DayDemand(9, 8, 2, 0))


def test_header_is_optional_and_empty_is_empty():
    assert len(parse_demand_csv("1,1,6,12,2,0\n")) == 1
    assert len(parse_demand_csv("")) == 0


@pytest.mark.parametrize("text,line", [
    ("1,1,6,12,2\n", 1),
    ("1,1,6,12,2,0\n1,x,6,12,2,0\n", 2),
    ("1,9,6,12,2,0\n", 1),
])
def test_parse_errors_carry_line(text, line):
    with pytest.raises(ParseError) as e:
        parse_demand_csv(text)
    assert e.value.line == line


def test_duplicate_and_negative_rejected():
    with pytest.raises(ValidationError):
        parse_demand_csv("1,1,6,12,2,0\n1,1,6,12,2,0\n")
    with pytest.raises(ValidationError):
        parse_demand_csv("1,1,-6,12,2,0\n")


def test_bundled_data_shape(history):
    assert len(history) == 56
    assert history.weeks() == list(range(1, 9))
    assert len(working_days(history)) == 48


def test_working_days_edge_cases():
    no_sun = records_from_rows([(1, d, 1, 1, 1, 1) for d in range(1, 7)])
    assert working_days(no_sun).records == no_sun.records
    only_sun = records_from_rows([(w, 7, 1, 1, 1, 1) for w in range(1, 4)])
    assert len(working_days(only_sun)) == 0


def test_series(history):
    wd = working_days(history)
    assert series_for_type(wd, PatientType.INFECTED)[:6] == [2, 2, 3, 2, 3, 5]
    assert series_for_type(wd, PatientType.CHRONIC) == [12, 8] * 24
    assert series_for_type(records_from_rows([]), PatientType.ACUTE) == []


def test_full_week_rejects_incomplete():
    h = records_from_rows([(1, d, 1, 1, 1, 1) for d in range(1, 5)])
    with pytest.raises(ValidationError):
        full_week(h, 1)


def test_env_var_default(tmp_path, monkeypatch):
    p = tmp_path / "d.csv"
    p.write_text("week,weekday,type1,type2,type3,type4\n3,2,1,8,0,0\n")
    monkeypatch.setenv(DATA_ENV, str(p))
    assert len(load_demand_csv()) == 1


rows = st.lists(
    st.tuples(st.integers(1, 60), st.integers(1, 7), *[st.integers(0, 40)] * 4),
    max_size=40, unique_by=lambda r: (r[0], r[1]),
)


@given(rows)
def test_round_trip(rs):
    h = records_from_rows(rs)
    again = parse_demand_csv(serialize_demand_csv(h))
    assert again.records == h.records
    assert parse_demand_csv(serialize_demand_csv(again)).records == h.records


@given(rows)
def test_working_days_idempotent(rs):
    h = records_from_rows(rs)
    once = working_days(h)
    assert working_days(once).records == once.records
    assert all(r.weekday != 7 for r in once.records)
