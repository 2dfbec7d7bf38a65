"""Seeded random small day instances shared by the oracle-based tests."""

import numpy as np

from cohortcap.domain import Allocation, ClinicConfig, CohortPolicy, DayDemand, PenaltyWeights


def random_instance(rng: np.random.Generator):
    policy = CohortPolicy.THREE_UNIT if rng.random() < 0.5 else CohortPolicy.TWO_UNIT
    S = int(rng.integers(2, 5))
    total = int(rng.integers(1, 5))
    caps = tuple(int(c) for c in rng.integers(0, total + 1, size=policy.n_units))
    # allocation inside the caps and the machine budget
    while True:
        R = tuple(int(rng.integers(0, c + 1)) for c in caps)
        if sum(R) <= total:
            break
    budget = int(rng.integers(0, 13))
    cuts = np.sort(rng.integers(0, budget + 1, size=3))
    parts = np.diff(np.concatenate(([0], cuts, [budget])))
    demand = DayDemand(*(int(x) for x in rng.permutation(parts)))
    a = [int(x) for x in rng.integers(0, 60, size=3)]
    pi = tuple(int(x) for x in rng.integers(10 * max(a + [1]), 10 * max(a + [1]) + 500, size=4))
    weights = PenaltyWeights(a[0], a[1], a[2], pi, int(rng.integers(0, 6)))
    config = ClinicConfig(total_machines=total, unit_caps=caps, sessions_per_day=S)
    return policy, Allocation(R), demand, weights, config
