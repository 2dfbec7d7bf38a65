import numpy as np
import pytest

from cohortcap.capacity import (
    ExpectedOverlaps,
    evaluate_fixed,
    expected_cost_table,
    expected_overlaps,
    feasible_allocations,
    optimal_allocations,
    optimize,
)
from cohortcap.domain import (
    Allocation,
    ClinicConfig,
    CohortPolicy,
    DayDemand,
    IntDist,
    PatientType,
    PenaltyWeights,
    Scenario,
    ScenarioSet,
    ScheduleCost,
)
from cohortcap.oracle import brute_force_day
from cohortcap.scenario import build_scenario_set, realized_scenario, single

THREE, TWO = CohortPolicy.THREE_UNIT, CohortPolicy.TWO_UNIT
W = PenaltyWeights()
ZERO_WEEK = single([DayDemand(0, 0, 0, 0)] * 6)


@pytest.fixture(scope="module")
def week6_set():
    dists = {PatientType.ACUTE: IntDist(((3, 0.3), (6, 0.4), (9, 0.3))),
             PatientType.INFECTED: IntDist(((2, 0.3), (3, 0.4), (5, 0.3))),
             PatientType.SUSPECTED: IntDist(((0, 0.7), (1, 0.3)))}
    return build_scenario_set(dists, n=30, seed=5)


def test_feasible_count(three_cfg, two_cfg):
    allocs = feasible_allocations(THREE, three_cfg)
    assert all(sum(a.machines) <= 14 for a in allocs)
    assert len(allocs) == sum(1 for r in np.ndindex(12, 9, 6) if sum(r) <= 14)
    assert len(feasible_allocations(TWO, two_cfg)) == sum(1 for r in np.ndindex(12, 9) if sum(r) <= 14)


def test_week7(history, three_cfg):
    sc = realized_scenario(history, 7)
    res = optimize(THREE, three_cfg, W, sc)
    assert res.expected_cost == 36
    assert Allocation((10, 4, 0)) in optimal_allocations(THREE, three_cfg, W, sc)
    assert evaluate_fixed(Allocation((7, 5, 2)), THREE, three_cfg, W, sc).expected_cost == 48


def test_week1(history, three_cfg):
    sc = realized_scenario(history, 1)
    res = optimize(THREE, three_cfg, W, sc)
    assert res.expected_cost == 444 and res.per_scenario[0].overlaps == (0, 0, 4)
    hosp = evaluate_fixed(Allocation((7, 5, 2)), THREE, three_cfg, W, sc)
    assert hosp.expected_cost == 12450 and hosp.per_scenario[0].overlaps == (7, 5, 4)


def test_zero_demand_tie_break(three_cfg):
    res = optimize(THREE, three_cfg, W, ZERO_WEEK)
    assert res.allocation == Allocation((0, 0, 0)) and res.expected_cost == 0
    assert evaluate_fixed(Allocation((3, 3, 3)), THREE, three_cfg, W, ZERO_WEEK).expected_cost == 0


def test_expected_overlaps_mean():
    d = (DayDemand(0, 0, 0, 0),)
    ss = ScenarioSet((Scenario(0.5, d), Scenario(0.5, d)))
    costs = [ScheduleCost(overlap_3x4=8), ScheduleCost(overlap_3x4=10)]
    assert expected_overlaps(costs, ss) == (0, 0, 9)
    one = ScenarioSet((Scenario(1.0, d),))
    assert expected_overlaps([ScheduleCost(1, 2, 3)], one) == ExpectedOverlaps(1, 2, 3)


def test_optimum_beats_random_allocations(three_cfg, week6_set):
    res = optimize(THREE, three_cfg, W, week6_set)
    allocs = feasible_allocations(THREE, three_cfg)
    rng = np.random.default_rng(0)
    for k in rng.choice(len(allocs), size=50, replace=False):
        ev = evaluate_fixed(allocs[k], THREE, three_cfg, W, week6_set)
        assert res.expected_cost <= ev.expected_cost + 1e-9


def test_table_matches_fixed_evaluation(three_cfg, week6_set):
    table = expected_cost_table(THREE, three_cfg, W, week6_set)
    for r in [(8, 5, 1), (7, 5, 2), (11, 3, 0)]:
        ev = evaluate_fixed(Allocation(r), THREE, three_cfg, W, week6_set)
        assert table[r] == pytest.approx(ev.expected_cost, rel=1e-12)
    assert np.isinf(table[11, 8, 5])


@pytest.mark.parametrize("policy", [THREE, TWO])
def test_threads_are_bit_identical(policy, week6_set):
    cfg = ClinicConfig.for_policy(policy)
    serial = expected_cost_table(policy, cfg, W, week6_set, workers=1)
    threaded = expected_cost_table(policy, cfg, W, week6_set, workers=2)
    assert serial.tobytes() == threaded.tobytes()
    assert optimize(policy, cfg, W, week6_set, workers=2).allocation == optimize(policy, cfg, W, week6_set).allocation


@pytest.mark.parametrize("week", [2, 5, 8])
def test_monotone_in_budget_and_caps(history, week):
    sc = realized_scenario(history, week)
    base = optimize(THREE, ClinicConfig(total_machines=12, unit_caps=(9, 6, 4)), W, sc).expected_cost
    more_total = optimize(THREE, ClinicConfig(total_machines=13, unit_caps=(9, 6, 4)), W, sc).expected_cost
    more_cap = optimize(THREE, ClinicConfig(total_machines=12, unit_caps=(9, 7, 4)), W, sc).expected_cost
    assert more_total <= base and more_cap <= base


def test_single_scenario_equals_brute_force():
    cfg = ClinicConfig(total_machines=3, unit_caps=(2, 1, 1), sessions_per_day=3, days_per_week=1)
    demand = DayDemand(3, 1, 2, 1)
    res = optimize(THREE, cfg, W, single([demand]))
    best = min(brute_force_day(THREE, a, demand, W, cfg).total for a in feasible_allocations(THREE, cfg))
    assert res.expected_cost == best


def test_infeasible_config_rejected(three_cfg):
    from cohortcap.domain import ValidationError
    with pytest.raises(ValidationError):
        optimize(TWO, three_cfg, W, ZERO_WEEK)
