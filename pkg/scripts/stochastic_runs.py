#!/usr/bin/env python3
"""Seed sweep of the plan-then-realize experiment (weeks 6-8, PI80/PI90) for
both cohorting policies.  Prints one CSV row per run and per-cell summaries:
allocations chosen, mean expected overlaps and the realized tallies.

    python scripts/stochastic_runs.py --seeds 20 > sweep.csv
"""

import argparse
import collections
import sys

import numpy as np

from cohortcap.domain import ClinicConfig, CohortPolicy, PenaltyWeights
from cohortcap.evaluate import plan_then_realize
from cohortcap.ingest import load_demand_csv
from cohortcap.scenario import RNG_NAME


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--seeds", type=int, default=20)
    ap.add_argument("--scenarios", type=int, default=30)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args(argv)
    history = load_demand_csv()
    w = PenaltyWeights()
    print(f"# generator {RNG_NAME}, seeds 1..{args.seeds}, {args.scenarios} scenarios")
    print("policy,week,pi,seed,allocation,e_q,e_g,e_w,expected_z,realized_q,realized_g,realized_w,realized_z")
    cells = collections.defaultdict(list)
    for policy in CohortPolicy:
        cfg = ClinicConfig.for_policy(policy)
        for week in (6, 7, 8):
            for level in (80, 90):
                for seed in range(1, args.seeds + 1):
                    rep = plan_then_realize(history, week, level, args.scenarios, seed, policy, cfg, w,
                                            workers=args.workers)
                    e = rep.plan.expected_overlaps
                    r = rep.realized_overlaps
                    print(f"{policy.value},{week},{level},{seed},{' '.join(map(str, rep.allocation.machines))},"
                          f"{e[0]:.2f},{e[1]:.2f},{e[2]:.2f},{rep.plan.expected_cost:.1f},"
                          f"{r[0]},{r[1]},{r[2]},{rep.realized.expected_cost:.0f}")
                    cells[(policy.value, week, level)].append(rep)
    print("#")
    print("# summary: policy week pi | most common allocation (share) | mean E[overlaps] | mean expected Z")
    for (policy, week, level), reps in cells.items():
        allocs = collections.Counter(r.allocation.machines for r in reps)
        top, n = allocs.most_common(1)[0]
        eo = np.mean([r.plan.expected_overlaps for r in reps], axis=0)
        ez = np.mean([r.plan.expected_cost for r in reps])
        print(f"# {policy} {week} PI{level} | {top} ({n}/{len(reps)}) | "
              f"{' '.join(f'{v:.2f}' for v in eo)} | {ez:.0f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
