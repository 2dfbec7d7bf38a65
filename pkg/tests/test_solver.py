import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cohortcap.capacity import evaluate_fixed
from cohortcap.domain import (
    Allocation,
    ClinicConfig,
    CohortPolicy,
    DayDemand,
    DaySchedule,
    PenaltyWeights,
    check_schedule,
)
from cohortcap.oracle import brute_force_day
from cohortcap.scenario import realized_scenario
from cohortcap.solver import count_overlaps, enumerate_combos, schedule_cost, solve_day

THREE, TWO = CohortPolicy.THREE_UNIT, CohortPolicy.TWO_UNIT
W = PenaltyWeights()


def test_combo_counts():
    assert len(enumerate_combos(THREE, 4)) == 5 * 11 * 11
    # prefix x (empty block, or a block with a split inside it)
    assert len(enumerate_combos(TWO, 4)) == 5 * (1 + sum(b - a + 2 for a in range(1, 5) for b in range(a, 5)))


def test_week7_monday(three_cfg):
    sched, cost = solve_day(THREE, Allocation((10, 4, 0)), DayDemand(6, 12, 4, 0), W, three_cfg)
    assert cost.total == 6 and cost.sessions_used == 3
    assert cost.overlaps == (0, 0, 0)


@pytest.mark.parametrize("policy", [THREE, TWO])
def test_zero_demand(policy):
    cfg = ClinicConfig.for_policy(policy)
    alloc = Allocation((3,) * policy.n_units)
    sched, cost = solve_day(policy, alloc, DayDemand(0, 0, 0, 0), W, cfg)
    assert cost.total == 0
    assert not any(any(row) for row in sched.marks)


def test_small_instance_matches_oracle():
    cfg = ClinicConfig(total_machines=3, unit_caps=(1, 1, 1))
    args = (THREE, Allocation((1, 1, 1)), DayDemand(2, 0, 1, 1), W, cfg)
    assert solve_day(*args)[1].total == brute_force_day(*args).total == 8


def _one_session(assigned, marks):
    return DaySchedule(tuple((a,) for a in assigned), tuple((m,) for m in marks), (0, 0, 0, 0))


def test_count_overlaps_all_units_marked():
    assert count_overlaps(_one_session((2, 3, 1, 1), (True, True, True)), THREE) == (6, 6, 2)


def test_count_overlaps_disjoint():
    s = DaySchedule(((1, 0, 0), (0, 0, 0), (0, 1, 0), (0, 0, 1)),
                    ((True, False, False), (False, True, False), (False, False, True)), (0, 0, 0, 0))
    assert count_overlaps(s, THREE) == (0, 0, 0)


def test_hospital_week1_weekly_tally(history, three_cfg):
    ev = evaluate_fixed(Allocation((7, 5, 2)), THREE, three_cfg, W, realized_scenario(history, 1))
    tallies = [count_overlaps(s, THREE) for s in ev.schedules[0]]
    assert tuple(map(sum, zip(*tallies))) == (7, 5, 4)


def test_idle_sessions_fill_earliest(three_cfg):
    sched, _ = solve_day(THREE, Allocation((8, 0, 0)), DayDemand(4, 0, 0, 0), W, three_cfg)
    assert sched.assigned[0] == (4, 0, 0, 0)


# --- properties at clinic scale -------------------------------------------------

def _instance(draw):
    policy = draw(st.sampled_from([THREE, TWO]))
    cfg = ClinicConfig.for_policy(policy)
    R = [draw(st.integers(0, c)) for c in cfg.unit_caps]
    while sum(R) > cfg.total_machines:
        j = R.index(max(R))
        R[j] -= 1
    demand = DayDemand(draw(st.integers(0, 25)), draw(st.sampled_from([8, 12])),
                       draw(st.integers(0, 10)), draw(st.integers(0, 6)))
    return policy, Allocation(tuple(R)), demand, cfg


instances = st.composite(_instance)()


@settings(max_examples=150, deadline=None)
@given(instances)
def test_solution_is_feasible_and_decomposes(inst):
    policy, alloc, demand, cfg = inst
    sched, cost = solve_day(policy, alloc, demand, W, cfg)
    ok, why = check_schedule(sched, policy, cfg, demand, alloc)
    assert ok, why
    assert cost.recomputed_total(W) == cost.total
    assert schedule_cost(sched, policy, W) == cost


@settings(max_examples=100, deadline=None)
@given(instances, st.data())
def test_capacity_dominance(inst, data):
    policy, alloc, demand, cfg = inst
    j = data.draw(st.integers(1, policy.n_units))
    more = list(alloc.machines)
    more[j - 1] += 1
    big = ClinicConfig(cfg.total_machines + 1, tuple(c + 1 for c in cfg.unit_caps))
    base = solve_day(policy, alloc, demand, W, big)[1].total
    assert solve_day(policy, Allocation(tuple(more)), demand, W, big)[1].total <= base


@settings(max_examples=60, deadline=None)
@given(instances, st.sampled_from([0.5, 3]))
def test_scale_invariance(inst, lam):
    policy, alloc, demand, cfg = inst
    s1, c1 = solve_day(policy, alloc, demand, W, cfg)
    s2, c2 = solve_day(policy, alloc, demand, W.scaled(lam), cfg)
    assert c2.total == pytest.approx(lam * c1.total, rel=1e-12)
    assert s2 == s1


@settings(max_examples=100, deadline=None)
@given(instances)
def test_unserved_only_beyond_unit_capacity(inst):
    policy, alloc, demand, cfg = inst
    if policy is not THREE:
        return
    sched, _ = solve_day(policy, alloc, demand, W, cfg)
    S = cfg.sessions_per_day
    assert sched.unserved[2] == max(0, demand[3] - S * alloc[2])
    assert sched.unserved[3] == max(0, demand[4] - S * alloc[3])
    assert sched.unserved[0] + sched.unserved[1] == max(0, demand[1] + demand[2] - S * alloc[1])


def test_matches_oracle_on_seeded_sample():
    from instances import random_instance
    rng = np.random.default_rng(7)
    for _ in range(150):
        inst = random_instance(rng)
        assert solve_day(*inst)[1].total == brute_force_day(*inst).total, inst
