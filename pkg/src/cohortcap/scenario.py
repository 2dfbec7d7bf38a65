"""Weekly scenario sets: sampled from forecast distributions, or the
realized demand of a historical week."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from cohortcap.domain import (
    ClinicConfig,
    DayDemand,
    IntDist,
    PatientType,
    Scenario,
    ScenarioSet,
    ValidationError,
)
from cohortcap.forecast import chronic_demand
from cohortcap.ingest import DemandHistory, full_week

RNG_NAME = "numpy.random.default_rng/PCG64"
SAMPLED_TYPES = (PatientType.ACUTE, PatientType.INFECTED, PatientType.SUSPECTED)


@dataclass(frozen=True)
class ChronicRegime:
    mwf: int = 12
    tts: int = 8

    def on(self, weekday: int) -> int:
        return chronic_demand(weekday, self.mwf, self.tts)


def build_scenario_set(dists: Mapping[PatientType, IntDist], chronic: ChronicRegime = ChronicRegime(),
                       n: int = 30, seed: int = 0, days: int = 6) -> ScenarioSet:
    """Sample ``n`` equiprobable weeks; every day draws acute, infected and
    suspected demand independently.  Draw order is scenario, day, type."""
    if n < 1:
        raise ValidationError("need at least one scenario")
    missing = [t.name for t in SAMPLED_TYPES if t not in dists]
    if missing:
        raise ValidationError(f"missing distributions for {missing}")
    rng = np.random.default_rng(seed)
    u = rng.random((n, days, len(SAMPLED_TYPES)))
    scenarios = []
    for k in range(n):
        week = []
        for d in range(days):
            a, i, s = (dists[t].value_at(u[k, d, c]) for c, t in enumerate(SAMPLED_TYPES))
            week.append(DayDemand(a, chronic.on(d + 1), i, s))
        scenarios.append(Scenario(1.0 / n, tuple(week)))
    return ScenarioSet(tuple(scenarios))


def realized_scenario(history: DemandHistory, week: int, config: ClinicConfig = ClinicConfig()) -> ScenarioSet:
    if week not in history.weeks():
        raise ValidationError(f"week {week} not in history")
    days = full_week(history, week, config.days_per_week)
    return ScenarioSet((Scenario(1.0, tuple(days)),))


def single(days) -> ScenarioSet:
    return ScenarioSet((Scenario(1.0, tuple(days)),))


def scenarios_to_csv(scenarios: ScenarioSet) -> str:
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["scenario", "day", "type1", "type2", "type3", "type4", "probability"])
    for k, sc in enumerate(scenarios, start=1):
        for d, dem in enumerate(sc.days, start=1):
            w.writerow([k, d, *dem.as_tuple(), repr(sc.probability)])
    return out.getvalue()


def scenarios_from_csv(text: str) -> ScenarioSet:
    rows = list(csv.DictReader(io.StringIO(text)))
    by_k: dict[int, list] = {}
    probs: dict[int, float] = {}
    for r in rows:
        k = int(r["scenario"])
        by_k.setdefault(k, []).append(
            (int(r["day"]), DayDemand(*(int(r[f"type{i}"]) for i in range(1, 5))))
        )
        probs[k] = float(r["probability"])
    return ScenarioSet(tuple(
        Scenario(probs[k], tuple(d for _, d in sorted(by_k[k], key=lambda x: x[0])))
        for k in sorted(by_k)
    ))
