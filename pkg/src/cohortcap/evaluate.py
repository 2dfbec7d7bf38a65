"""Case-study analyses: hospital versus optimal allocation, plan-then-realize
runs on forecast scenarios, policy comparison and unit utilization."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

from cohortcap.capacity import Evaluation, evaluate_fixed, optimize
from cohortcap.domain import (
    HOSPITAL_ALLOCATION,
    Allocation,
    ClinicConfig,
    CohortPolicy,
    DaySchedule,
    IntDist,
    PatientType,
    PenaltyWeights,
    ValidationError,
)
from cohortcap.forecast import PILevel, PredictionInterval, SesFit, discretize_uniform, fit_ses, prediction_interval
from cohortcap.ingest import DemandHistory, series_for_type, working_days
from cohortcap.scenario import RNG_NAME, ChronicRegime, build_scenario_set, realized_scenario

FORECAST_TYPES = (PatientType.ACUTE, PatientType.INFECTED, PatientType.SUSPECTED)


def improvement(z: float, z_opt: float) -> float:
    """(Z - Z') / Z as a percentage; 0 when Z is 0."""
    return 0.0 if z == 0 else 100.0 * (z - z_opt) / z


@dataclass(frozen=True)
class ComparisonRow:
    week: object
    hospital_overlaps: tuple[int, int, int]
    hospital_z: float
    optimal_allocation: Optional[Allocation]
    optimal_overlaps: tuple[int, int, int]
    optimal_z: float

    @property
    def improvement_raw(self) -> float:
        return improvement(self.hospital_z, self.optimal_z)

    @property
    def improvement_pct(self) -> int:
        return round(self.improvement_raw)


def hospital_vs_optimal(history: DemandHistory, weeks: Sequence[int], hospital_alloc: Allocation,
                        policy: CohortPolicy, config: ClinicConfig,
                        weights: PenaltyWeights) -> list[ComparisonRow]:
    """Per-week rows plus a final totals row (``week == "Total"``)."""
    rows = []
    for week in weeks:
        sc = realized_scenario(history, week, config)
        hosp = evaluate_fixed(hospital_alloc, policy, config, weights, sc)
        opt = optimize(policy, config, weights, sc)
        rows.append(ComparisonRow(week, hosp.per_scenario[0].overlaps, hosp.expected_cost,
                                  opt.allocation, opt.per_scenario[0].overlaps, opt.expected_cost))
    rows.append(ComparisonRow(
        "Total",
        tuple(sum(r.hospital_overlaps[i] for r in rows) for i in range(3)),
        sum(r.hospital_z for r in rows),
        None,
        tuple(sum(r.optimal_overlaps[i] for r in rows) for i in range(3)),
        sum(r.optimal_z for r in rows),
    ))
    return rows


@dataclass(frozen=True)
class PolicyRow:
    week: object
    three_allocation: Optional[Allocation]
    three_overlaps: tuple[int, int, int]
    three_z: float
    two_allocation: Optional[Allocation]
    two_overlaps: tuple[int, int]
    two_z: float

    @property
    def difference_pct(self) -> Optional[int]:
        if self.three_z == 0:
            return None
        return round(100.0 * (self.three_z - self.two_z) / self.three_z)


def compare_policies(history: DemandHistory, weeks: Sequence[int], weights: PenaltyWeights,
                     three: ClinicConfig, two: ClinicConfig) -> list[PolicyRow]:
    rows = []
    for week in weeks:
        r3 = optimize(CohortPolicy.THREE_UNIT, three, weights, realized_scenario(history, week, three))
        r2 = optimize(CohortPolicy.TWO_UNIT, two, weights, realized_scenario(history, week, two))
        rows.append(PolicyRow(week, r3.allocation, r3.per_scenario[0].overlaps, r3.expected_cost,
                              r2.allocation, r2.per_scenario[0].overlaps[:2], r2.expected_cost))
    rows.append(PolicyRow(
        "Total", None, tuple(sum(r.three_overlaps[i] for r in rows) for i in range(3)),
        sum(r.three_z for r in rows), None,
        tuple(sum(r.two_overlaps[i] for r in rows) for i in range(2)),
        sum(r.two_z for r in rows),
    ))
    return rows


@dataclass(frozen=True)
class ForecastBundle:
    fits: dict[PatientType, SesFit]
    intervals: dict[PatientType, PredictionInterval]
    dists: dict[PatientType, IntDist]


def forecast_week(history: DemandHistory, target_week: int, level,
                  intervals: Optional[Mapping[PatientType, PredictionInterval]] = None) -> ForecastBundle:
    """Fit SES on every working day before ``target_week`` and discretize the
    prediction intervals.  ``intervals`` overrides the fitted ones."""
    if target_week <= 1:
        raise ValidationError("target week needs at least one earlier week of data")
    level = PILevel.parse(level)
    train = working_days(history).before(target_week)
    if not len(train):
        raise ValidationError(f"no training data before week {target_week}")
    fits, pis, dists = {}, {}, {}
    for t in FORECAST_TYPES:
        fits[t] = fit_ses(series_for_type(train, t))
        pis[t] = (intervals or {}).get(t) or prediction_interval(fits[t], level)
        dists[t] = discretize_uniform(pis[t])
    return ForecastBundle(fits, pis, dists)


@dataclass(frozen=True)
class PlanReport:
    target_week: int
    policy: CohortPolicy
    pi_level: PILevel
    n_scenarios: int
    seed: int
    generator: str
    forecast: ForecastBundle
    plan: Evaluation
    realized: Evaluation

    @property
    def allocation(self) -> Allocation:
        return self.plan.allocation

    @property
    def realized_overlaps(self) -> tuple[int, int, int]:
        return self.realized.per_scenario[0].overlaps


def plan_then_realize(history: DemandHistory, target_week: int, pi_level, n_scenarios: int, seed: int,
                      policy: CohortPolicy, config: ClinicConfig, weights: PenaltyWeights,
                      chronic: ChronicRegime = ChronicRegime(),
                      intervals: Optional[Mapping[PatientType, PredictionInterval]] = None,
                      workers: int = 1) -> PlanReport:
    level = PILevel.parse(pi_level)
    fc = forecast_week(history, target_week, level, intervals)
    scenarios = build_scenario_set(fc.dists, chronic, n_scenarios, seed, config.days_per_week)
    plan = optimize(policy, config, weights, scenarios, workers=workers)
    realized = evaluate_fixed(plan.allocation, policy, config, weights,
                              realized_scenario(history, target_week, config))
    return PlanReport(target_week, policy, level, n_scenarios, seed, RNG_NAME, fc, plan, realized)


def utilization(alloc: Allocation, schedules: Sequence[DaySchedule], config: ClinicConfig,
                policy: CohortPolicy) -> list[Optional[float]]:
    """Per-unit share of weekly machine slots used, in percent (None where
    the unit has no machines)."""
    out = []
    for j, R in enumerate(alloc.machines, start=1):
        if R == 0:
            out.append(None)
            continue
        treated = sum(sched.unit_load(policy, j, s)
                      for sched in schedules for s in range(1, sched.sessions + 1))
        out.append(100.0 * treated / (R * config.sessions_per_day * config.days_per_week))
    return out


def truncated_pct(value: Optional[float]) -> Optional[int]:
    # the published utilization series drops the fractional part
    return None if value is None else int(math.floor(value + 1e-9))


@dataclass(frozen=True)
class UtilizationRow:
    week: int
    hospital: list[Optional[float]]
    optimal: list[Optional[float]]
    optimal_allocation: Allocation


def utilization_series(history: DemandHistory, weeks: Sequence[int], hospital_alloc: Allocation,
                       policy: CohortPolicy, config: ClinicConfig,
                       weights: PenaltyWeights) -> list[UtilizationRow]:
    rows = []
    for week in weeks:
        sc = realized_scenario(history, week, config)
        hosp = evaluate_fixed(hospital_alloc, policy, config, weights, sc)
        opt = optimize(policy, config, weights, sc)
        rows.append(UtilizationRow(
            week,
            utilization(hospital_alloc, hosp.schedules[0], config, policy),
            utilization(opt.allocation, opt.schedules[0], config, policy),
            opt.allocation,
        ))
    return rows


def stochastic_table(history: DemandHistory, weeks: Sequence[int], levels: Sequence, n_scenarios: int,
                     seed: int, policy: CohortPolicy, config: ClinicConfig,
                     weights: PenaltyWeights, workers: int = 1) -> list[PlanReport]:
    return [plan_then_realize(history, w, lv, n_scenarios, seed, policy, config, weights, workers=workers)
            for w in weeks for lv in levels]


def hospital_allocation() -> Allocation:
    return Allocation(HOSPITAL_ALLOCATION)
