"""Daily demand history: CSV parsing, Sunday removal, per-type series."""

from __future__ import annotations

import csv
import io
import os
from dataclasses import dataclass
from importlib import resources
from typing import Iterable, Optional, TextIO, Union

from cohortcap.domain import DayDemand, PatientType, ValidationError

HEADER = ("week", "weekday", "type1", "type2", "type3", "type4")
SUNDAY = 7
DATA_ENV = "COHORTCAP_DATA"


class ParseError(ValueError):
    def __init__(self, line: int, msg: str):
        super().__init__(f"line {line}: {msg}")
        self.line = line


@dataclass(frozen=True)
class DayRecord:
    week: int
    weekday: int
    demand: DayDemand


@dataclass(frozen=True)
class DemandHistory:
    records: tuple[DayRecord, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "records", tuple(self.records))
        seen = set()
        for r in self.records:
            if not 1 <= r.weekday <= 7:
                raise ValidationError(f"weekday {r.weekday} outside 1..7")
            key = (r.week, r.weekday)
            if key in seen:
                raise ValidationError(f"duplicate record for week {r.week} weekday {r.weekday}")
            seen.add(key)

    def __len__(self) -> int:
        return len(self.records)

    def weeks(self) -> list[int]:
        return sorted({r.week for r in self.records})

    def week_days(self, week: int) -> list[DayRecord]:
        return sorted((r for r in self.records if r.week == week), key=lambda r: r.weekday)

    def before(self, week: int) -> "DemandHistory":
        return DemandHistory(r for r in self.records if r.week < week)


def parse_demand_csv(text: Union[str, TextIO]) -> DemandHistory:
    stream = io.StringIO(text) if isinstance(text, str) else text
    reader = csv.reader(stream)
    records = []
    header_seen = False
    for lineno, row in enumerate(reader, start=1):
        if not row or all(not c.strip() for c in row):
            continue
        cells = [c.strip() for c in row]
        if not header_seen:
            header_seen = True
            if tuple(c.lower() for c in cells) == HEADER:
                continue
        if len(cells) != len(HEADER):
            raise ParseError(lineno, f"expected {len(HEADER)} fields, got {len(cells)}")
        try:
            week, weekday, *counts = (int(c) for c in cells)
        except ValueError:
            raise ParseError(lineno, f"non-integer field in {row!r}") from None
        if any(c < 0 for c in counts):
            raise ValidationError(f"line {lineno}: negative patient count")
        if not 1 <= weekday <= 7:
            raise ParseError(lineno, f"weekday {weekday} outside 1..7")
        records.append(DayRecord(week, weekday, DayDemand(*counts)))
    return DemandHistory(records)


def serialize_demand_csv(history: DemandHistory) -> str:
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(HEADER)
    for r in history.records:
        w.writerow([r.week, r.weekday, *r.demand.as_tuple()])
    return out.getvalue()


def load_demand_csv(path: Optional[Union[str, os.PathLike]] = None) -> DemandHistory:
    """Read a history file; falls back to $COHORTCAP_DATA, then the bundled data."""
    path = path or os.environ.get(DATA_ENV)
    if path is None:
        return parse_demand_csv(bundled_csv_text())
    with open(path, newline="", encoding="utf-8") as fh:
        return parse_demand_csv(fh)


def bundled_csv_text() -> str:
    return resources.files("cohortcap").joinpath("data/clinic_weeks.csv").read_text(encoding="utf-8")


def working_days(history: DemandHistory) -> DemandHistory:
    return DemandHistory(r for r in history.records if r.weekday != SUNDAY)


def series_for_type(history: DemandHistory, ptype: PatientType) -> list[int]:
    ordered = sorted(history.records, key=lambda r: (r.week, r.weekday))
    return [r.demand[PatientType(ptype)] for r in ordered]


def full_week(history: DemandHistory, week: int, days: int = 6) -> list[DayDemand]:
    """Working-day demands of ``week``; raises if the week is incomplete."""
    recs = [r for r in working_days(history).week_days(week)]
    if [r.weekday for r in recs] != list(range(1, days + 1)):
        have = [r.weekday for r in recs]
        raise ValidationError(f"week {week} is incomplete: have weekdays {have}, need 1..{days}")
    return [r.demand for r in recs]


def records_from_rows(rows: Iterable[tuple[int, int, int, int, int, int]]) -> DemandHistory:
    return DemandHistory(DayRecord(w, d, DayDemand(*c)) for w, d, *c in rows)
