"""Fixed-width text grids of daily schedules, one row per session and one
column per machine."""

from __future__ import annotations

import csv
import io
from typing import Optional, Sequence

from cohortcap.domain import Allocation, ClinicConfig, CohortPolicy, DaySchedule, PenaltyWeights
from cohortcap.solver import count_overlaps, schedule_cost

UNIT_NAMES = {1: "Standard", 2: "Isolated", 3: "Quarantine"}
EMPTY = "."


def fmt_num(x: float) -> str:
    if float(x).is_integer():
        return f"{int(x):,}"
    return f"{x:,.2f}"


def session_cells(schedule: DaySchedule, alloc: Allocation, policy: CohortPolicy,
                  session: int) -> list[list[str]]:
    """Cell labels per unit for one 1-based session: patient type codes,
    then blanks up to the unit's machine count."""
    cells = []
    for j in range(1, policy.n_units + 1):
        row = []
        for t in policy.types_in_unit(j):
            row += [str(int(t))] * schedule.assigned[t - 1][session - 1]
        row += [EMPTY] * (alloc[j] - len(row))
        cells.append(row)
    return cells


def session_flags(schedule: DaySchedule, policy: CohortPolicy, session: int) -> str:
    """Overlap codes for one session: Q (1,2 with 3), G (1,2 with 4), W (3 with 4)."""
    S = schedule.sessions
    only = DaySchedule(
        tuple(tuple(v if s == session - 1 else 0 for s, v in enumerate(row)) for row in schedule.assigned),
        tuple(tuple(v if s == session - 1 else False for s, v in enumerate(row)) for row in schedule.marks),
        (0, 0, 0, 0),
        schedule.type4_cutoff,
    )
    q, g, w = count_overlaps(only, policy)
    assert only.sessions == S
    return "".join(code for code, n in (("Q", q), ("G", g), ("W", w)) if n > 0)


def render_day(schedule: DaySchedule, alloc: Allocation, policy: CohortPolicy, config: ClinicConfig,
               weights: Optional[PenaltyWeights] = None, title: Optional[str] = None) -> str:
    weights = weights or PenaltyWeights()
    S = config.sessions_per_day
    widths = [max(len(UNIT_NAMES[j]) + 5, 2 * alloc[j] - 1) for j in range(1, policy.n_units + 1)]
    head = " | ".join(f"{UNIT_NAMES[j]}({alloc[j]})".ljust(w) for j, w in zip(range(1, policy.n_units + 1), widths))
    lines = []
    if title:
        lines.append(title)
    lines.append(f"{'S':>2} | {head} | overlap")
    lines.append("-" * len(lines[-1]))
    for s in range(1, S + 1):
        units = session_cells(schedule, alloc, policy, s)
        body = " | ".join(" ".join(row).ljust(w) for row, w in zip(units, widths))
        flags = session_flags(schedule, policy, s)
        lines.append(f"{s:>2} | {body} | {('* ' + flags) if flags else ''}".rstrip())
    cost = schedule_cost(schedule, policy, weights)
    unserved = sum(schedule.unserved)
    lines.append(
        f"overlaps (1,2)x3={cost.overlap_12x3} (1,2)x4={cost.overlap_12x4} 3x4={cost.overlap_3x4}"
        f"  sessions={cost.sessions_used}  unserved={unserved}"
    )
    lines.append(f"Daily penalty = {fmt_num(cost.total)}")
    return "\n".join(lines)


def render_week(schedules: Sequence[DaySchedule], alloc: Allocation, policy: CohortPolicy,
                config: ClinicConfig, weights: Optional[PenaltyWeights] = None) -> str:
    return "\n\n".join(render_day(s, alloc, policy, config, weights, title=f"Day {d}")
                       for d, s in enumerate(schedules, start=1))


def schedule_cells_csv(schedules: Sequence[DaySchedule], alloc: Allocation, policy: CohortPolicy) -> str:
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["day", "session", "unit", "machine_slot", "patient_type"])
    for d, sched in enumerate(schedules, start=1):
        for s in range(1, sched.sessions + 1):
            for j, row in enumerate(session_cells(sched, alloc, policy, s), start=1):
                for slot, label in enumerate(row, start=1):
                    w.writerow([d, s, j, slot, "" if label == EMPTY else label])
    return out.getvalue()
