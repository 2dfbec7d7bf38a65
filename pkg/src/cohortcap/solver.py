"""Exact second-stage solver for one day.

Every feasible set of session marks is enumerated: the standard unit runs a
prefix of the day, every other unit a contiguous block, and under two-unit
cohorting the isolated block is split into a suspected part followed by an
infected part.  Once the marks are fixed, each patient's cost in a session
depends only on which other units run that session, the units decouple, and
filling the cheapest sessions first (serving a patient only while that is
cheaper than the unserved penalty) is optimal.

The cost of every mark combination is computed for every allocation at once
with numpy, which makes the first-stage search a table lookup.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from cohortcap.domain import (
    TYPES,
    Allocation,
    ClinicConfig,
    CohortPolicy,
    DayDemand,
    DaySchedule,
    PatientType,
    PenaltyWeights,
    ScheduleCost,
)

A, C, I, SUSP = PatientType.ACUTE, PatientType.CHRONIC, PatientType.INFECTED, PatientType.SUSPECTED


@dataclass(frozen=True)
class MarkCombo:
    """Session marks of every unit for one day (sessions are 1-based).

    block2/block3 are inclusive ``(first, last)`` ranges or None.  ``split``
    is the two-unit cutoff: suspected patients use block2[0]..split and
    infected patients split+1..block2[1].
    """

    prefix: int
    block2: Optional[tuple[int, int]]
    block3: Optional[tuple[int, int]] = None
    split: Optional[int] = None
    n_units: int = 3

    @property
    def key(self) -> tuple[int, ...]:
        b2 = self.block2 or (0, 0)
        b3 = self.block3 or (0, 0)
        return (self.prefix, *b2, *b3, 0 if self.split is None else self.split)

    def unit_sessions(self) -> tuple[frozenset[int], ...]:
        units = [frozenset(range(1, self.prefix + 1)), _span(self.block2)]
        if self.n_units == 3:
            units.append(_span(self.block3))
        return tuple(units)

    def suspected_part(self) -> frozenset[int]:
        if self.block2 is None:
            return frozenset()
        return frozenset(range(self.block2[0], self.split + 1))

    def infected_part(self) -> frozenset[int]:
        if self.block2 is None:
            return frozenset()
        return frozenset(range(self.split + 1, self.block2[1] + 1))

    def n_marks(self) -> int:
        return sum(len(u) for u in self.unit_sessions())


def _span(block) -> frozenset[int]:
    return frozenset() if block is None else frozenset(range(block[0], block[1] + 1))


def _blocks(S: int):
    yield None
    for a in range(1, S + 1):
        for b in range(a, S + 1):
            yield (a, b)


def enumerate_combos(policy: CohortPolicy, S: int) -> list[MarkCombo]:
    """All mark combinations, sorted by the tie-break key."""
    out = []
    for L in range(S + 1):
        for b2 in _blocks(S):
            if policy is CohortPolicy.THREE_UNIT:
                out.extend(MarkCombo(L, b2, b3) for b3 in _blocks(S))
            elif b2 is None:
                out.append(MarkCombo(L, None, None, None, 2))
            else:
                out.extend(MarkCombo(L, b2, None, c, 2) for c in range(b2[0] - 1, b2[1] + 1))
    out.sort(key=lambda m: m.key)
    return out


class Pool(NamedTuple):
    """Patients sharing one unit's machines over one set of sessions."""

    unit: int
    types: tuple[PatientType, ...]
    session_cost: dict[int, float]


def _priority(types, weights: PenaltyWeights) -> tuple[PatientType, ...]:
    # higher unserved penalty first; on ties the larger type index is served
    # first so shortfalls land on acute patients
    return tuple(sorted(types, key=lambda t: (-weights.pi_of(t), -int(t))))


def combo_pools(combo: MarkCombo, policy: CohortPolicy, weights: PenaltyWeights) -> tuple[Pool, ...]:
    a1, a2, a3 = weights.alpha1, weights.alpha2, weights.alpha3
    standard = _priority((A, C), weights)
    if policy is CohortPolicy.THREE_UNIT:
        m1, m2, m3 = combo.unit_sessions()
        return (
            Pool(1, standard, {s: a1 * (s in m2) + a2 * (s in m3) for s in sorted(m1)}),
            Pool(2, (I,), {s: a1 * (s in m1) + a3 * (s in m3) for s in sorted(m2)}),
            Pool(3, (SUSP,), {s: a2 * (s in m1) + a3 * (s in m2) for s in sorted(m3)}),
        )
    m1, _ = combo.unit_sessions()
    p4, p3 = combo.suspected_part(), combo.infected_part()
    return (
        Pool(1, standard, {s: a1 * (s in p3) + a2 * (s in p4) for s in sorted(m1)}),
        Pool(2, (I,), {s: a1 * (s in m1) for s in sorted(p3)}),
        Pool(2, (SUSP,), {s: a2 * (s in m1) for s in sorted(p4)}),
    )


def _fill_order(pool: Pool) -> list[int]:
    return sorted(pool.session_cost, key=lambda s: (pool.session_cost[s], s))


def _slot_counts(R: int, S: int, sizes: list[int]) -> np.ndarray:
    """counts[k, g]: patients of group g placed in the k-th cheapest slot.

    Groups occupy consecutive positions in priority order; slot k holds
    positions [k*R, (k+1)*R).
    """
    counts = np.zeros((S, len(sizes)), dtype=np.int64)
    start = 0
    for g, n in enumerate(sizes):
        for k in range(S):
            lo, hi = max(k * R, start), min((k + 1) * R, start + n)
            if hi > lo:
                counts[k, g] = hi - lo
        start += n
    return counts


@dataclass(frozen=True)
class _ComboTables:
    combos: tuple[MarkCombo, ...]
    marks_cost: np.ndarray                  # (ncombo,)
    pool_costs: tuple[np.ndarray, ...]      # per pool role: (ncombo, S) sorted, inf padded
    pool_units: tuple[int, ...]
    pool_types: tuple[tuple[PatientType, ...], ...]


@functools.lru_cache(maxsize=64)
def _combo_tables(policy: CohortPolicy, S: int, weights: PenaltyWeights) -> _ComboTables:
    combos = enumerate_combos(policy, S)
    n_roles = 3
    sorted_costs = [np.full((len(combos), S), np.inf) for _ in range(n_roles)]
    units = types = None
    for c, combo in enumerate(combos):
        pools = combo_pools(combo, policy, weights)
        units = tuple(p.unit for p in pools)
        types = tuple(p.types for p in pools)
        for r, pool in enumerate(pools):
            vals = [pool.session_cost[s] for s in _fill_order(pool)]
            sorted_costs[r][c, : len(vals)] = vals
    marks = np.array([weights.epsilon * m.n_marks() for m in combos], dtype=float)
    return _ComboTables(tuple(combos), marks, tuple(sorted_costs), units, types)


def _pool_cost(costs: np.ndarray, R: int, demand: DayDemand, types, weights: PenaltyWeights) -> np.ndarray:
    S = costs.shape[1]
    sizes = [demand[t] for t in types]
    pis = np.array([weights.pi_of(t) for t in types], dtype=float)
    counts = _slot_counts(R, S, sizes)
    # a slot at least as expensive as the penalty leaves the patient unserved,
    # and padded (unmarked) slots are +inf
    total = np.zeros(costs.shape[0])
    for g, pi in enumerate(pis):
        total += np.minimum(costs, pi) @ counts[:, g].astype(float)
        total += pi * (sizes[g] - counts[:, g].sum())
    return total


def _unit_costs(tables: _ComboTables, unit: int, R: int, demand: DayDemand, weights) -> np.ndarray:
    out = np.zeros(len(tables.combos))
    for role, u in enumerate(tables.pool_units):
        if u == unit:
            out += _pool_cost(tables.pool_costs[role], R, demand, tables.pool_types[role], weights)
    return out


@dataclass(frozen=True)
class DayCostTable:
    """Optimal day cost for every allocation in the box 0..cap per unit."""

    cost: np.ndarray        # shape (cap1+1, cap2+1[, cap3+1])
    combo_index: np.ndarray  # argmin combo, same shape


@functools.lru_cache(maxsize=100_000)
def day_cost_table(policy: CohortPolicy, demand: DayDemand, weights: PenaltyWeights,
                   config: ClinicConfig) -> DayCostTable:
    config.check_policy(policy)
    tables = _combo_tables(policy, config.sessions_per_day, weights)
    ncombo = len(tables.combos)
    caps = config.unit_caps
    total = tables.marks_cost.copy().reshape((1,) * len(caps) + (ncombo,))
    for j, cap in enumerate(caps, start=1):
        per_r = np.stack([_unit_costs(tables, j, r, demand, weights) for r in range(cap + 1)])
        shape = [1] * len(caps) + [ncombo]
        shape[j - 1] = cap + 1
        total = total + per_r.reshape(shape)
    idx = np.argmin(total, axis=-1)
    best = np.take_along_axis(total, idx[..., None], axis=-1)[..., 0]
    return DayCostTable(best, idx)


def _combo_vector(policy, alloc: Allocation, demand, weights, S) -> tuple[_ComboTables, np.ndarray]:
    tables = _combo_tables(policy, S, weights)
    vec = tables.marks_cost.copy()
    for j, R in enumerate(alloc.machines, start=1):
        vec += _unit_costs(tables, j, R, demand, weights)
    return tables, vec


def build_schedule(combo: MarkCombo, policy: CohortPolicy, alloc: Allocation, demand: DayDemand,
                   weights: PenaltyWeights, S: int) -> DaySchedule:
    """Greedy cheapest-first fill of every unit under fixed marks."""
    X = [[0] * S for _ in TYPES]
    unserved = [demand[t] for t in TYPES]
    for pool in combo_pools(combo, policy, weights):
        R = alloc[pool.unit]
        order = _fill_order(pool)
        sizes = [demand[t] for t in pool.types]
        counts = _slot_counts(R, S, sizes)
        for k, s in enumerate(order):
            for g, t in enumerate(pool.types):
                n = int(counts[k, g])
                if n and pool.session_cost[s] < weights.pi_of(t):
                    X[t - 1][s - 1] += n
                    unserved[t - 1] -= n
    marks = tuple(tuple(s in unit for s in range(1, S + 1)) for unit in combo.unit_sessions())
    cutoff = None
    if policy is CohortPolicy.TWO_UNIT and combo.block2 is not None:
        cutoff = combo.split
    return DaySchedule(tuple(map(tuple, X)), marks, tuple(unserved), cutoff)


class OverlapTally(NamedTuple):
    q: int
    g: int
    w: int


def count_overlaps(schedule: DaySchedule, policy: CohortPolicy) -> OverlapTally:
    """Patients in sessions where conflicting cohorts run at the same time."""
    X, N = schedule.assigned, schedule.marks
    q = g = w = 0
    for s in range(schedule.sessions):
        x1, x2, x3, x4 = (X[t][s] for t in range(4))
        if policy is CohortPolicy.THREE_UNIT:
            if N[0][s] and N[1][s]:
                q += x1 + x2 + x3
            if N[0][s] and N[2][s]:
                g += x1 + x2 + x4
            if N[1][s] and N[2][s]:
                w += x3 + x4
        elif N[0][s] and N[1][s]:
            if s + 1 <= (schedule.type4_cutoff or 0):
                g += x1 + x2 + x4
            else:
                q += x1 + x2 + x3
    return OverlapTally(q, g, w)


def schedule_cost(schedule: DaySchedule, policy: CohortPolicy, weights: PenaltyWeights) -> ScheduleCost:
    q, g, w = count_overlaps(schedule, policy)
    sessions = sum(map(sum, schedule.marks))
    return ScheduleCost.from_parts(q, g, w, schedule.unserved, sessions, weights)


@functools.lru_cache(maxsize=200_000)
def solve_day(policy: CohortPolicy, alloc: Allocation, demand: DayDemand, weights: PenaltyWeights,
              config: ClinicConfig) -> tuple[DaySchedule, ScheduleCost]:
    """Minimum-penalty schedule for one day under a fixed allocation."""
    alloc.check(policy, config)
    S = config.sessions_per_day
    if demand.total == 0:
        return DaySchedule.empty(policy, S), ScheduleCost()
    tables, vec = _combo_vector(policy, alloc, demand, weights, S)
    best = int(np.argmin(vec))
    combo = tables.combos[best]
    schedule = build_schedule(combo, policy, alloc, demand, weights, S)
    cost = schedule_cost(schedule, policy, weights)
    if not np.isclose(cost.total, vec[best], rtol=1e-12, atol=1e-9):
        raise AssertionError(f"schedule cost {cost.total} disagrees with combo cost {vec[best]}")
    return schedule, cost


def best_combo(policy: CohortPolicy, alloc: Allocation, demand: DayDemand, weights: PenaltyWeights,
               config: ClinicConfig) -> MarkCombo:
    tables, vec = _combo_vector(policy, alloc, demand, weights, config.sessions_per_day)
    return tables.combos[int(np.argmin(vec))]
