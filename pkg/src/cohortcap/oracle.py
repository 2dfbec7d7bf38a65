"""Exhaustive reference solver for small day instances.

Shares nothing with :mod:`cohortcap.solver` beyond the domain types.  Every
0/1 mark matrix is generated and filtered through the ordering and
contiguity constraints as written; for two-unit cohorting every cutoff
0..|S| is tried.  With the marks fixed, overlap tallies are the smallest
values the big-M inequalities allow, and the patient counts are searched
exhaustively per unit by dynamic programming over sessions.
"""

from __future__ import annotations

import functools
import itertools
from typing import Optional

from cohortcap.domain import (
    Allocation,
    ClinicConfig,
    CohortPolicy,
    DayDemand,
    PenaltyWeights,
    ScheduleCost,
    ValidationError,
)

MAX_PATIENTS = 12
MAX_MACHINES = 4


def _prefix_ok(row) -> bool:
    # N_1s >= N_1,s+1
    return all(row[s] >= row[s + 1] for s in range(len(row) - 1))


def _consecutive_ok(row) -> bool:
    # sum_{s' >= s+2} N_s' <= |S| (1 - N_s + N_{s+1})
    S = len(row)
    return all(sum(row[s + 2:]) <= S * (1 - row[s] + row[s + 1]) for s in range(S - 2))


def _valid_mark_rows(S: int, first: bool):
    ok = _prefix_ok if first else _consecutive_ok
    return [row for row in itertools.product((0, 1), repeat=S) if ok(row)]


def _min_unit_cost(coeffs: tuple[tuple[float, ...], ...], allowed: tuple[tuple[bool, ...], ...],
                   demands: tuple[int, ...], pis: tuple[float, ...], R: int) -> float:
    """min sum_s sum_i coeff[i][s] x_is + sum_i pi_i (H_i - sum_s x_is)
    over integer x with sum_i x_is <= R and x_is = 0 unless allowed[i][s]."""
    S = len(coeffs[0])
    n = len(demands)
    states = {(0,) * n: 0.0}
    for s in range(S):
        nxt: dict[tuple[int, ...], float] = {}
        ranges = [range(0, min(R, demands[i]) + 1) if allowed[i][s] else range(1) for i in range(n)]
        for served, cost in states.items():
            for x in itertools.product(*ranges):
                if sum(x) > R:
                    continue
                new = tuple(a + b for a, b in zip(served, x))
                if any(new[i] > demands[i] for i in range(n)):
                    continue
                c = cost + sum(coeffs[i][s] * x[i] for i in range(n))
                if c < nxt.get(new, float("inf")):
                    nxt[new] = c
        states = nxt
    return min(cost + sum(p * (h - v) for p, h, v in zip(pis, demands, served))
               for served, cost in states.items())


def brute_force_day(policy: CohortPolicy, alloc: Allocation, demand: DayDemand,
                    weights: PenaltyWeights, config: ClinicConfig) -> ScheduleCost:
    """Optimal day cost by exhaustive search (total only is meaningful)."""
    alloc.check(policy, config)
    if demand.total > MAX_PATIENTS or config.total_machines > MAX_MACHINES:
        raise ValidationError(
            f"instance too large for brute force (demand {demand.total} > {MAX_PATIENTS} "
            f"or machines {config.total_machines} > {MAX_MACHINES})"
        )
    S = config.sessions_per_day
    a1, a2, a3, eps = weights.alpha1, weights.alpha2, weights.alpha3, weights.epsilon
    H = demand.as_tuple()
    pi = weights.pi
    rows1 = _valid_mark_rows(S, first=True)
    rows_other = _valid_mark_rows(S, first=False)
    unit_cost = functools.lru_cache(maxsize=None)(_min_unit_cost)

    best: Optional[float] = None
    if policy is CohortPolicy.THREE_UNIT:
        for n1, n2, n3 in itertools.product(rows1, rows_other, rows_other):
            U = [n1[s] * n2[s] for s in range(S)]   # 1 + U >= N1 + N2
            D = [n1[s] * n3[s] for s in range(S)]   # 1 + D >= N1 + N3
            V = [n2[s] * n3[s] for s in range(S)]   # 1 + V >= N2 + N3
            # Q >= X1+X2+X3 when U, G >= X1+X2+X4 when D, W >= X3+X4 when V
            c12 = tuple(a1 * U[s] + a2 * D[s] for s in range(S))
            c3 = tuple(a1 * U[s] + a3 * V[s] for s in range(S))
            c4 = tuple(a2 * D[s] + a3 * V[s] for s in range(S))
            on1, on2, on3 = (tuple(bool(v) for v in n) for n in (n1, n2, n3))
            total = eps * (sum(n1) + sum(n2) + sum(n3))
            total += unit_cost((c12, c12), (on1, on1), (H[0], H[1]), (pi[0], pi[1]), alloc[1])
            total += unit_cost((c3,), (on2,), (H[2],), (pi[2],), alloc[2])
            total += unit_cost((c4,), (on3,), (H[3],), (pi[3],), alloc[3])
            if best is None or total < best:
                best = total
    else:
        for n1, n2 in itertools.product(rows1, rows_other):
            for cut in range(S + 1):
                # Y_s = 1 for s < cut: infected only after the cutoff,
                # every suspected patient served by it
                susp = tuple(bool(n2[s]) and s + 1 <= cut for s in range(S))
                inf_ = tuple(bool(n2[s]) and s + 1 > cut for s in range(S))
                U = [n1[s] * inf_[s] for s in range(S)]
                D = [n1[s] * susp[s] for s in range(S)]
                c12 = tuple(a1 * U[s] + a2 * D[s] for s in range(S))
                c3 = tuple(a1 * n1[s] for s in range(S))
                c4 = tuple(a2 * n1[s] for s in range(S))
                on1 = tuple(bool(v) for v in n1)
                total = eps * (sum(n1) + sum(n2))
                total += unit_cost((c12, c12), (on1, on1), (H[0], H[1]), (pi[0], pi[1]), alloc[1])
                total += unit_cost((c3, c4), (inf_, susp), (H[2], H[3]), (pi[2], pi[3]), alloc[2])
                if best is None or total < best:
                    best = total
    return ScheduleCost(total=best)
