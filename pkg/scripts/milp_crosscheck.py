#!/usr/bin/env python3
"""Cross-check the exact solver against a direct big-M MIP of one realized
week (first and second stage together), solved with scipy's HiGHS.

The three-unit MIP is built constraint-for-constraint from the model.  For
two-unit cohorting the overlap links need a reading, since the three-unit
links refer to a quarantine-unit mark that does not exist; ``--reading``
selects one:

  phase   a co-marked session counts towards G while suspected patients are
          still being treated (Y_{s-1} = 1) and towards Q afterwards
          (the reading used by cohortcap.solver)
  double  both links keyed on the isolated-unit mark, so a co-marked session
          is charged to Q and G at once
  nolink  the G link keyed on a mark that is never set, so G is always 0

Usage: python scripts/milp_crosscheck.py [--policy two-unit] [--weeks 1 2 ...]
Needs scipy (not a runtime dependency of the package).
"""

from __future__ import annotations

import argparse
import sys
import time

import numpy as np
from scipy.optimize import Bounds, LinearConstraint, milp
from scipy.sparse import lil_matrix

from cohortcap.capacity import optimize
from cohortcap.domain import ClinicConfig, CohortPolicy, PenaltyWeights
from cohortcap.ingest import full_week, load_demand_csv
from cohortcap.scenario import realized_scenario


class Model:
    def __init__(self):
        self.lb, self.ub, self.integral, self.cost = [], [], [], []
        self.rows: list[tuple[dict[int, float], float, float]] = []

    def var(self, lb=0.0, ub=np.inf, cost=0.0, binary=False) -> int:
        self.lb.append(lb)
        self.ub.append(1.0 if binary else ub)
        self.integral.append(1)
        self.cost.append(cost)
        return len(self.lb) - 1

    def add(self, terms: dict[int, float], lo=-np.inf, hi=np.inf):
        self.rows.append((terms, lo, hi))

    def solve(self, time_limit=600.0):
        A = lil_matrix((len(self.rows), len(self.lb)))
        lo, hi = np.empty(len(self.rows)), np.empty(len(self.rows))
        for r, (terms, a, b) in enumerate(self.rows):
            for v, c in terms.items():
                A[r, v] += c
            lo[r], hi[r] = a, b
        return milp(np.array(self.cost), integrality=np.array(self.integral),
                    bounds=Bounds(self.lb, self.ub), constraints=LinearConstraint(A.tocsr(), lo, hi),
                    options={"time_limit": time_limit, "mip_rel_gap": 0})


def week_model(policy: CohortPolicy, days, w: PenaltyWeights, cfg: ClinicConfig, reading: str = "phase"):
    m = Model()
    S = range(cfg.sessions_per_day)
    nS = cfg.sessions_per_day
    J = range(policy.n_units)
    Chat = cfg.total_machines
    bigQ = nS * Chat
    R = [m.var(ub=cfg.unit_caps[j]) for j in J]
    m.add({r: 1 for r in R}, hi=Chat)
    for H in days:
        X = [[m.var() for _ in S] for _ in range(4)]
        F = [m.var(cost=w.pi[i]) for i in range(4)]
        N = [[m.var(binary=True, cost=w.epsilon) for _ in S] for _ in J]
        for i in range(4):
            m.add({**{X[i][s]: 1 for s in S}, F[i]: 1}, lo=H[i], hi=H[i])
        for s in S:
            m.add({X[0][s]: 1, X[1][s]: 1, R[0]: -1}, hi=0)
            m.add({X[0][s]: 1, X[1][s]: 1, N[0][s]: -Chat}, hi=0)
        for s in range(nS - 1):
            m.add({N[0][s]: 1, N[0][s + 1]: -1}, lo=0)
        for j in J[1:]:
            for s in range(nS - 2):
                terms = {N[j][t]: 1 for t in range(s + 2, nS)}
                terms[N[j][s]] = terms.get(N[j][s], 0) + nS
                terms[N[j][s + 1]] = terms.get(N[j][s + 1], 0) - nS
                m.add(terms, hi=nS)
        Q = [m.var(cost=w.alpha1) for _ in S]
        G = [m.var(cost=w.alpha2) for _ in S]
        U = [m.var(binary=True) for _ in S]
        D = [m.var(binary=True) for _ in S]
        for s in S:
            # Q >= X1+X2+X3 - M(1-U),  G >= X1+X2+X4 - M(1-D)
            m.add({Q[s]: 1, X[0][s]: -1, X[1][s]: -1, X[2][s]: -1, U[s]: -bigQ}, lo=-bigQ)
            m.add({G[s]: 1, X[0][s]: -1, X[1][s]: -1, X[3][s]: -1, D[s]: -bigQ}, lo=-bigQ)
        if policy is CohortPolicy.THREE_UNIT:
            Wv = [m.var(cost=w.alpha3) for _ in S]
            V = [m.var(binary=True) for _ in S]
            for s in S:
                m.add({X[2][s]: 1, R[1]: -1}, hi=0)
                m.add({X[3][s]: 1, R[2]: -1}, hi=0)
                m.add({X[2][s]: 1, N[1][s]: -Chat}, hi=0)
                m.add({X[3][s]: 1, N[2][s]: -Chat}, hi=0)
                m.add({U[s]: 1, N[0][s]: -1, N[1][s]: -1}, lo=-1)
                m.add({V[s]: 1, N[1][s]: -1, N[2][s]: -1}, lo=-1)
                m.add({D[s]: 1, N[0][s]: -1, N[2][s]: -1}, lo=-1)
                m.add({Wv[s]: 1, X[2][s]: -1, X[3][s]: -1, V[s]: -bigQ}, lo=-bigQ)
        else:
            Y = [m.var(binary=True) for _ in range(nS + 1)]      # Y[0] is the dummy session
            m4 = max(H[3], 1)
            m3 = max(H[2], 1)
            for s in S:
                m.add({X[2][s]: 1, X[3][s]: 1, R[1]: -1}, hi=0)
                m.add({X[2][s]: 1, X[3][s]: 1, N[1][s]: -Chat}, hi=0)
                # infected only once Y_{s-1} = 0
                m.add({X[2][s]: 1, Y[s]: m3}, hi=m3)
            for s in range(nS + 1):
                # H4 - sum_{s' <= s} X4 - F4 <= M * Y_s
                terms = {X[3][t]: -1 for t in range(s)}
                terms[F[3]] = -1
                terms[Y[s]] = -m4
                m.add(terms, hi=-H[3])
            for s in S:
                if reading == "phase":
                    m.add({D[s]: 1, N[0][s]: -1, N[1][s]: -1, Y[s]: -1}, lo=-2)
                    m.add({U[s]: 1, N[0][s]: -1, N[1][s]: -1, Y[s]: 1}, lo=-1)
                elif reading == "double":
                    m.add({U[s]: 1, N[0][s]: -1, N[1][s]: -1}, lo=-1)
                    m.add({D[s]: 1, N[0][s]: -1, N[1][s]: -1}, lo=-1)
                elif reading == "nolink":
                    m.add({U[s]: 1, N[0][s]: -1, N[1][s]: -1}, lo=-1)
                else:
                    raise ValueError(reading)
    return m, R


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--policy", default="two-unit")
    ap.add_argument("--weeks", type=int, nargs="*", default=list(range(1, 9)))
    ap.add_argument("--reading", default="phase", choices=["phase", "double", "nolink"])
    args = ap.parse_args(argv)
    policy = CohortPolicy.parse(args.policy)
    cfg = ClinicConfig.for_policy(policy)
    w = PenaltyWeights()
    history = load_demand_csv()
    ok = True
    print("week,milp_allocation,milp_z,solver_allocation,solver_z,seconds")
    for week in args.weeks:
        t0 = time.perf_counter()
        model, R = week_model(policy, [d.as_tuple() for d in full_week(history, week)], w, cfg, args.reading)
        res = model.solve()
        secs = time.perf_counter() - t0
        ours = optimize(policy, cfg, w, realized_scenario(history, week, cfg))
        alloc = " ".join(str(int(round(res.x[r]))) for r in R)
        z = round(res.fun)
        print(f"{week},{alloc},{z},{' '.join(map(str, ours.allocation.machines))},{ours.expected_cost:.0f},{secs:.1f}")
        if args.reading == "phase" and z != ours.expected_cost:
            ok = False
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
