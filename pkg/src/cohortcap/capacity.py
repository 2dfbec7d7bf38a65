"""First-stage machine allocation over a scenario set."""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from cohortcap.domain import (
    Allocation,
    ClinicConfig,
    CohortPolicy,
    DayDemand,
    DaySchedule,
    PenaltyWeights,
    ScenarioSet,
    ScheduleCost,
)
from cohortcap.solver import day_cost_table, solve_day


class ExpectedOverlaps(tuple):
    """(E[O_(1,2)x3], E[O_(1,2)x4], E[O_3x4])"""

    def __new__(cls, q: float, g: float, w: float):
        return super().__new__(cls, (q, g, w))


@dataclass(frozen=True)
class Evaluation:
    allocation: Allocation
    expected_cost: float
    per_scenario: tuple[ScheduleCost, ...]
    expected_overlaps: ExpectedOverlaps
    schedules: tuple[tuple[DaySchedule, ...], ...] = field(repr=False, default=())


@dataclass(frozen=True)
class OptimizeResult(Evaluation):
    n_allocations: int = 0
    seconds: float = 0.0


def feasible_allocations(policy: CohortPolicy, config: ClinicConfig) -> list[Allocation]:
    config.check_policy(policy)
    boxes = [range(c + 1) for c in config.unit_caps]
    return [Allocation(r) for r in np.ndindex(*[len(b) for b in boxes])
            if sum(r) <= config.total_machines]


def _distinct_days(scenarios: ScenarioSet) -> list[DayDemand]:
    seen: dict[DayDemand, None] = {}
    for sc in scenarios:
        for d in sc.days:
            seen.setdefault(d, None)
    return list(seen)


def expected_cost_table(policy: CohortPolicy, config: ClinicConfig, weights: PenaltyWeights,
                        scenarios: ScenarioSet, workers: int = 1) -> np.ndarray:
    """Expected weekly cost for every allocation in the cap box (inf where
    the machine budget is exceeded)."""
    config.check_policy(policy)
    scenarios.check_days(config)
    days = _distinct_days(scenarios)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            tables = list(ex.map(lambda d: day_cost_table(policy, d, weights, config), days))
    else:
        tables = [day_cost_table(policy, d, weights, config) for d in days]
    lookup = {d: t.cost for d, t in zip(days, tables)}
    shape = tuple(c + 1 for c in config.unit_caps)
    total = np.zeros(shape)
    # fixed summation order keeps serial and threaded runs bit-identical
    for sc in scenarios:
        week = np.zeros(shape)
        for d in sc.days:
            week += lookup[d]
        total += sc.probability * week
    over = np.indices(shape).sum(axis=0) > config.total_machines
    total[over] = np.inf
    return total


def expected_overlaps(per_scenario: Sequence[ScheduleCost], scenarios: ScenarioSet) -> ExpectedOverlaps:
    sums = [math.fsum(sc.probability * getattr(c, f) for sc, c in zip(scenarios, per_scenario))
            for f in ("overlap_12x3", "overlap_12x4", "overlap_3x4")]
    return ExpectedOverlaps(*sums)


def evaluate_fixed(alloc: Allocation, policy: CohortPolicy, config: ClinicConfig,
                   weights: PenaltyWeights, scenarios: ScenarioSet) -> Evaluation:
    """Expected cost with the first stage pinned to ``alloc``."""
    alloc.check(policy, config)
    scenarios.check_days(config)
    per_scenario, schedules = [], []
    for sc in scenarios:
        week = ScheduleCost()
        days = []
        for d in sc.days:
            sched, cost = solve_day(policy, alloc, d, weights, config)
            week = week + cost
            days.append(sched)
        per_scenario.append(week)
        schedules.append(tuple(days))
    if len(scenarios) == 1 and scenarios.scenarios[0].probability == 1.0:
        expected = per_scenario[0].total
    else:
        expected = math.fsum(sc.probability * c.total for sc, c in zip(scenarios, per_scenario))
    return Evaluation(alloc, expected, tuple(per_scenario),
                      expected_overlaps(per_scenario, scenarios), tuple(schedules))


def optimize(policy: CohortPolicy, config: ClinicConfig, weights: PenaltyWeights,
             scenarios: ScenarioSet, workers: int = 1) -> OptimizeResult:
    """Allocation minimizing expected weekly cost; ties go to the
    lexicographically smallest allocation."""
    start = time.perf_counter()
    table = expected_cost_table(policy, config, weights, scenarios, workers)
    # C-order argmin returns the first minimum, i.e. the smallest allocation
    flat = int(np.argmin(table))
    best = Allocation(tuple(int(i) for i in np.unravel_index(flat, table.shape)))
    ev = evaluate_fixed(best, policy, config, weights, scenarios)
    n = int(np.isfinite(table).sum())
    return OptimizeResult(ev.allocation, ev.expected_cost, ev.per_scenario, ev.expected_overlaps,
                          ev.schedules, n, time.perf_counter() - start)


def optimal_allocations(policy: CohortPolicy, config: ClinicConfig, weights: PenaltyWeights,
                        scenarios: ScenarioSet, rtol: float = 1e-12) -> list[Allocation]:
    """Every allocation attaining the optimum (alternate optima)."""
    table = expected_cost_table(policy, config, weights, scenarios)
    best = table.min()
    idx = np.argwhere(np.isclose(table, best, rtol=rtol, atol=0))
    return [Allocation(tuple(int(v) for v in row)) for row in idx]
