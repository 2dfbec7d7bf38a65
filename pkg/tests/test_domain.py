import pytest

from cohortcap.domain import (
    Allocation,
    ClinicConfig,
    CohortPolicy,
    DayDemand,
    DaySchedule,
    IntDist,
    PatientType,
    PenaltyWeights,
    Scenario,
    ScenarioSet,
    ScheduleCost,
    ValidationError,
    check_schedule,
)

THREE, TWO = CohortPolicy.THREE_UNIT, CohortPolicy.TWO_UNIT


def test_patient_types_are_ordered():
    assert [int(t) for t in PatientType] == [1, 2, 3, 4]


@pytest.mark.parametrize("policy,expected", [
    (THREE, {1: 1, 2: 1, 3: 2, 4: 3}),
    (TWO, {1: 1, 2: 1, 3: 2, 4: 2}),
])
def test_unit_mapping(policy, expected):
    assert {int(t): policy.unit_of(t) for t in PatientType} == expected


def test_policy_parse():
    assert CohortPolicy.parse("Two-Unit") is TWO
    with pytest.raises(ValueError):
        CohortPolicy.parse("four-unit")


@pytest.mark.parametrize("kwargs", [
    dict(total_machines=0), dict(unit_caps=(1, -1, 2)), dict(sessions_per_day=0), dict(days_per_week=0),
])
def test_config_rejects_bad_values(kwargs):
    with pytest.raises(ValidationError):
        ClinicConfig(**kwargs)


def test_weights_scalar_pi_and_negative():
    assert PenaltyWeights(pi=5).pi == (5, 5, 5, 5)
    with pytest.raises(ValidationError):
        PenaltyWeights(alpha1=-1)


def test_demand_validation():
    with pytest.raises(ValidationError):
        DayDemand(1, -1, 0, 0)
    assert DayDemand(1, 2, 3, 4)[PatientType.INFECTED] == 3


def test_scenario_set_probabilities():
    d = (DayDemand(0, 0, 0, 0),)
    ScenarioSet((Scenario(0.5, d), Scenario(0.5, d)))
    with pytest.raises(ValidationError):
        ScenarioSet((Scenario(0.5, d), Scenario(0.4, d)))
    with pytest.raises(ValidationError):
        Scenario(0.0, d)


def test_allocation_checks(three_cfg):
    Allocation.checked((7, 5, 2), THREE, three_cfg)
    with pytest.raises(ValidationError):
        Allocation.checked((12, 0, 0), THREE, three_cfg)   # above C1
    with pytest.raises(ValidationError):
        Allocation.checked((11, 4, 0), THREE, three_cfg)   # above total
    with pytest.raises(ValidationError):
        Allocation.checked((7, 5), THREE, three_cfg)


def test_schedule_cost_decomposes():
    c = ScheduleCost.from_parts(2, 1, 3, (0, 1, 0, 0), 5, PenaltyWeights())
    assert c.total == 2000 + 1000 + 300 + 100_000 + 10
    assert c.recomputed_total(PenaltyWeights()) == c.total
    assert (c + c).total == 2 * c.total


def test_intdist_validation():
    IntDist(((0, 0.25), (2, 0.75)))
    for bad in [((0, 0.5), (1, 0.4)), ((1, 0.5), (0, 0.5)), ((0, 0.0), (1, 1.0))]:
        with pytest.raises(ValidationError):
            IntDist(bad)
    assert IntDist.point(3).mean() == 3


def _sched(assigned, marks, unserved=(0, 0, 0, 0), cutoff=None):
    return DaySchedule(tuple(map(tuple, assigned)), tuple(map(tuple, marks)), unserved, cutoff)


def test_check_schedule_flags_each_violation():
    cfg = ClinicConfig(total_machines=3, unit_caps=(1, 1, 1), sessions_per_day=3)
    alloc = Allocation((1, 1, 1))
    demand = DayDemand(1, 0, 1, 0)
    good = _sched([[1, 0, 0], [0, 0, 0], [0, 1, 0], [0, 0, 0]],
                  [[1, 0, 0], [0, 1, 0], [0, 0, 0]])
    assert check_schedule(good, THREE, cfg, demand, alloc)[0]
    gap = _sched([[0, 1, 0], [0, 0, 0], [1, 0, 0], [0, 0, 0]],
                 [[0, 1, 0], [1, 0, 0], [0, 0, 0]])
    ok, why = check_schedule(gap, THREE, cfg, demand, alloc)
    assert not ok and "prefix" in why
    split = _sched([[1, 0, 0], [0, 0, 0], [1, 0, 0], [0, 0, 0]],
                   [[1, 0, 0], [1, 0, 1], [0, 0, 0]])
    ok, why = check_schedule(split, THREE, cfg, demand, alloc)
    assert not ok and "consecutive" in why
    over = _sched([[2, 0, 0], [0, 0, 0], [0, 0, 0], [0, 0, 0]],
                  [[1, 0, 0], [0, 0, 0], [0, 0, 0]], (0, 0, 1, 0))
    ok, why = check_schedule(over, THREE, cfg, DayDemand(2, 0, 1, 0), alloc)
    assert not ok and "capacity" in why
