"""Command-line front end: ``forecast``, ``plan``, ``reproduce``, ``render``.

Exit codes: 0 ok, 1 validation or reproduction failure, 2 internal error.
Tabular output is CSV; every report starts with ``#`` metadata lines giving
the version, seed and random generator.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

from cohortcap import __version__
from cohortcap import reference_values as ref
from cohortcap.capacity import evaluate_fixed, optimize
from cohortcap.domain import (
    HOSPITAL_ALLOCATION,
    DEFAULT_CAPS,
    Allocation,
    ClinicConfig,
    CohortPolicy,
    DayDemand,
    PenaltyWeights,
    ValidationError,
)
from cohortcap.evaluate import (
    FORECAST_TYPES,
    compare_policies,
    forecast_week,
    hospital_vs_optimal,
    plan_then_realize,
    truncated_pct,
    utilization_series,
)
from cohortcap.forecast import PILevel
from cohortcap.ingest import DATA_ENV, ParseError, full_week, load_demand_csv
from cohortcap.render import render_day, schedule_cells_csv
from cohortcap.scenario import RNG_NAME, ChronicRegime, realized_scenario, single

EXIT_OK, EXIT_INVALID, EXIT_INTERNAL = 0, 1, 2
WEEKS = tuple(range(1, 9))
STOCHASTIC_WEEKS = (6, 7, 8)


class UsageError(ValidationError):
    pass


class _Parser(argparse.ArgumentParser):
    # bad flags are a validation failure (1), not argparse's default 2
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


# ---------------------------------------------------------------- config

@dataclass(frozen=True)
class RunConfig:
    weights: PenaltyWeights = PenaltyWeights()
    total_machines: int = 14
    unit_caps: dict = field(default_factory=lambda: {p: DEFAULT_CAPS[p] for p in CohortPolicy})
    sessions_per_day: int = 4
    days_per_week: int = 6
    chronic: ChronicRegime = ChronicRegime()
    hospital_allocation: tuple[int, ...] = HOSPITAL_ALLOCATION

    def clinic(self, policy: CohortPolicy) -> ClinicConfig:
        cfg = ClinicConfig(self.total_machines, self.unit_caps[policy], self.sessions_per_day, self.days_per_week)
        cfg.check_policy(policy)
        return cfg

    def as_dict(self) -> dict:
        w = self.weights
        return {
            "weights": {"alpha1": w.alpha1, "alpha2": w.alpha2, "alpha3": w.alpha3,
                        "pi": list(w.pi), "epsilon": w.epsilon},
            "total_machines": self.total_machines,
            "unit_caps": {p.value: list(c) for p, c in self.unit_caps.items()},
            "sessions_per_day": self.sessions_per_day,
            "days_per_week": self.days_per_week,
            "chronic": {"mwf": self.chronic.mwf, "tts": self.chronic.tts},
            "hospital_allocation": list(self.hospital_allocation),
        }


CONFIG_KEYS = {"weights", "total_machines", "unit_caps", "sessions_per_day", "days_per_week",
               "chronic", "hospital_allocation"}


def config_from_dict(data: dict, base: RunConfig = RunConfig()) -> RunConfig:
    unknown = set(data) - CONFIG_KEYS
    if unknown:
        raise ValidationError(f"unknown config keys: {sorted(unknown)}")
    cfg = base
    if "weights" in data:
        w = dict(data["weights"])
        bad = set(w) - {"alpha1", "alpha2", "alpha3", "pi", "epsilon"}
        if bad:
            raise ValidationError(f"unknown weight keys: {sorted(bad)}")
        cur = cfg.weights
        cfg = replace(cfg, weights=PenaltyWeights(
            w.get("alpha1", cur.alpha1), w.get("alpha2", cur.alpha2), w.get("alpha3", cur.alpha3),
            w.get("pi", cur.pi), w.get("epsilon", cur.epsilon)))
    if "unit_caps" in data:
        caps = dict(cfg.unit_caps)
        for k, v in data["unit_caps"].items():
            caps[CohortPolicy.parse(k)] = tuple(int(c) for c in v)
        cfg = replace(cfg, unit_caps=caps)
    if "chronic" in data:
        c = data["chronic"]
        cfg = replace(cfg, chronic=ChronicRegime(int(c.get("mwf", cfg.chronic.mwf)),
                                                 int(c.get("tts", cfg.chronic.tts))))
    for key in ("total_machines", "sessions_per_day", "days_per_week"):
        if key in data:
            cfg = replace(cfg, **{key: int(data[key])})
    if "hospital_allocation" in data:
        cfg = replace(cfg, hospital_allocation=tuple(int(r) for r in data["hospital_allocation"]))
    return cfg


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.replace(" ", "").split(",") if x)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def load_config(args) -> RunConfig:
    cfg = RunConfig()
    if getattr(args, "config", None):
        try:
            with open(args.config, encoding="utf-8") as fh:
                data = json.load(fh)
        except OSError as e:
            raise ValidationError(f"cannot read config {args.config}: {e.strerror}")
        except json.JSONDecodeError as e:
            raise ValidationError(f"config {args.config} is not valid JSON: {e}")
        if not isinstance(data, dict):
            raise ValidationError("config must be a JSON object")
        cfg = config_from_dict(data)
    over: dict = {}
    weights = {k: getattr(args, k) for k in ("alpha1", "alpha2", "alpha3", "epsilon")
               if getattr(args, k, None) is not None}
    if getattr(args, "penalty", None) is not None:
        weights["pi"] = args.penalty
    if weights:
        over["weights"] = weights
    for key in ("total_machines", "sessions_per_day", "days_per_week"):
        if getattr(args, key, None) is not None:
            over[key] = getattr(args, key)
    if getattr(args, "caps", None) is not None:
        over["unit_caps"] = {args.policy: args.caps}
    chronic = {k: getattr(args, k) for k in ("mwf", "tts") if getattr(args, k, None) is not None}
    if chronic:
        over["chronic"] = chronic
    return config_from_dict(over, cfg) if over else cfg


# ---------------------------------------------------------------- output

def meta_lines(seed: Optional[int], command: str) -> list[str]:
    return [f"# cohortcap {__version__}", f"# command: {command}",
            f"# seed: {'none' if seed is None else seed}", f"# generator: {RNG_NAME}"]


def _csv(rows: Sequence[Sequence]) -> str:
    out = io.StringIO()
    csv.writer(out, lineterminator="\n").writerows(rows)
    return out.getvalue()


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return str(int(x)) if x.is_integer() else f"{x:.4f}".rstrip("0")
    if isinstance(x, tuple):
        return " ".join(_fmt(v) for v in x)
    if isinstance(x, Allocation):
        return " ".join(str(r) for r in x.machines)
    return str(x)


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _history(args):
    try:
        history = load_demand_csv(args.data)
    except OSError as e:
        raise ValidationError(f"cannot read demand data {e.filename}: {e.strerror}")
    if not len(history):
        raise ValidationError("demand data is empty")
    return history


# ---------------------------------------------------------------- commands

def cmd_forecast(args) -> int:
    history = _history(args)
    rows = [["type", "level", "smoothing", "point", "rmse", "lower", "upper", "value", "mass"]]
    for level in PILevel:
        fc = forecast_week(history, args.week, level)
        for t in FORECAST_TYPES:
            fit, pi, dist = fc.fits[t], fc.intervals[t], fc.dists[t]
            head = [int(t), level.value, f"{fit.smoothing:.3f}", f"{fit.point_forecast:.4f}",
                    f"{fit.rmse:.4f}", f"{pi.lower:.2f}", f"{pi.upper:.2f}"]
            for v, p in dist.support:
                rows.append(head + [v, f"{p:.3f}"])
    _emit("\n".join(meta_lines(None, f"forecast --week {args.week}")) + "\n" + _csv(rows), args.out)
    return EXIT_OK


def _plan_json(report: dict) -> str:
    return json.dumps(report, indent=2) + "\n"


def cmd_plan(args) -> int:
    cfg = load_config(args)
    policy = CohortPolicy.parse(args.policy)
    clinic = cfg.clinic(policy)
    weights = cfg.weights
    history = _history(args)
    command = f"plan --policy {policy.value} --mode {args.mode} --week {args.week}"
    report = {"meta": {"version": __version__, "seed": None, "generator": RNG_NAME, "command": command},
              "config": cfg.as_dict(), "policy": policy.value, "mode": args.mode, "week": args.week}
    if args.mode == "realized":
        sc = realized_scenario(history, args.week, clinic)
        result = optimize(policy, clinic, weights, sc, workers=args.workers)
        hosp = None
        if len(cfg.hospital_allocation) == policy.n_units:
            hosp = evaluate_fixed(Allocation.checked(cfg.hospital_allocation, policy, clinic),
                                  policy, clinic, weights, sc)
        report.update(allocation=list(result.allocation.machines), expected_cost=result.expected_cost,
                      expected_overlaps=list(result.expected_overlaps),
                      realized_cost=result.expected_cost,
                      realized_overlaps=list(result.per_scenario[0].overlaps))
        if hosp is not None:
            report.update(hospital_allocation=list(hosp.allocation.machines), hospital_cost=hosp.expected_cost,
                          hospital_overlaps=list(hosp.per_scenario[0].overlaps))
        schedules, alloc = result.schedules[0], result.allocation
    else:
        if args.week < 2:
            raise ValidationError("stochastic mode needs a target week >= 2")
        rep = plan_then_realize(history, args.week, args.pi, args.scenarios, args.seed, policy, clinic,
                                weights, cfg.chronic, workers=args.workers)
        report["meta"]["seed"] = args.seed
        report["meta"]["command"] = command + f" --pi {args.pi} --scenarios {args.scenarios} --seed {args.seed}"
        report.update(pi=rep.pi_level.value, scenarios=args.scenarios,
                      allocation=list(rep.allocation.machines), expected_cost=rep.plan.expected_cost,
                      expected_overlaps=list(rep.plan.expected_overlaps),
                      realized_cost=rep.realized.expected_cost,
                      realized_overlaps=list(rep.realized_overlaps))
        schedules, alloc = rep.realized.schedules[0], rep.allocation
        result = rep.plan
    report["per_scenario"] = [{"scenario": k, "total": c.total, "overlaps": list(c.overlaps),
                               "unserved": c.unserved_patients, "sessions": c.sessions_used}
                              for k, c in enumerate(result.per_scenario, start=1)]
    report["allocations_searched"] = result.n_allocations
    # wall time stays out of the report so reports are bit-identical across runs
    print(f"search time {result.seconds:.3f} s over {result.n_allocations} allocations", file=sys.stderr)

    lines = [f"policy            {policy.value}",
             f"allocation        {_fmt(alloc)}",
             f"expected cost     {report['expected_cost']:,.2f}",
             f"expected overlaps {_fmt(tuple(float(v) for v in report['expected_overlaps']))}",
             f"realized cost     {report['realized_cost']:,.0f}",
             f"realized overlaps {_fmt(tuple(report['realized_overlaps']))}"]
    if "hospital_cost" in report:
        lines.append(f"hospital cost     {report['hospital_cost']:,.0f} at {_fmt(tuple(report['hospital_allocation']))}")
    text = "\n".join(meta_lines(report["meta"]["seed"], report["meta"]["command"]) + lines) + "\n"
    if args.render:
        text += "\n" + "\n\n".join(
            render_day(s, alloc, policy, clinic, weights, title=f"Week {args.week} day {d} (realized)")
            for d, s in enumerate(schedules, start=1)) + "\n"
    sys.stdout.write(text)
    if args.out:
        if args.out.endswith(".csv"):
            body = "\n".join(meta_lines(report["meta"]["seed"], report["meta"]["command"])) + "\n"
            body += _csv([[k, json.dumps(v) if isinstance(v, (list, dict)) else v]
                          for k, v in report.items() if k != "meta"])
            _emit(body, args.out)
        else:
            _emit(_plan_json(report), args.out)
    if args.cells:
        _emit(schedule_cells_csv(schedules, alloc, policy), args.cells)
    return EXIT_OK


@dataclass
class Check:
    name: str
    expected: object
    got: object

    @property
    def ok(self) -> bool:
        return self.expected == self.got


def _table4(history, cfg: RunConfig):
    policy = CohortPolicy.THREE_UNIT
    clinic = cfg.clinic(policy)
    hosp = Allocation.checked(cfg.hospital_allocation, policy, clinic)
    rows = hospital_vs_optimal(history, WEEKS, hosp, policy, clinic, cfg.weights)
    out = [["week", "hospital_o12x3", "hospital_o12x4", "hospital_o3x4", "hospital_z",
            "optimal_allocation", "optimal_o12x3", "optimal_o12x4", "optimal_o3x4", "optimal_z",
            "improvement_pct"]]
    checks = []
    for r in rows:
        out.append([r.week, *r.hospital_overlaps, _fmt(r.hospital_z), _fmt(r.optimal_allocation),
                    *r.optimal_overlaps, _fmt(r.optimal_z), r.improvement_pct])
        if r.week == "Total":
            checks += [Check("total hospital Z", ref.HOSPITAL_TOTAL[1], r.hospital_z),
                       Check("total optimal Z", ref.THREE_UNIT_TOTAL_Z, r.optimal_z)]
        else:
            (ov, z) = ref.HOSPITAL_WEEKS[r.week]
            checks += [Check(f"week {r.week} hospital overlaps", ov, tuple(r.hospital_overlaps)),
                       Check(f"week {r.week} hospital Z", z, r.hospital_z),
                       Check(f"week {r.week} optimal Z", ref.THREE_UNIT_OPTIMAL[r.week][2], r.optimal_z)]
    return out, checks


def _table6(history, cfg: RunConfig):
    rows = compare_policies(history, WEEKS, cfg.weights, cfg.clinic(CohortPolicy.THREE_UNIT),
                            cfg.clinic(CohortPolicy.TWO_UNIT))
    out = [["week", "three_allocation", "three_o12x3", "three_o12x4", "three_o3x4", "three_z",
            "two_allocation", "two_o12x3", "two_o12x4", "two_z", "difference_pct"]]
    checks = []
    for r in rows:
        out.append([r.week, _fmt(r.three_allocation), *r.three_overlaps, _fmt(r.three_z),
                    _fmt(r.two_allocation), *r.two_overlaps, _fmt(r.two_z), _fmt(r.difference_pct)])
        if r.week == "Total":
            checks += [Check("total two-unit Z", ref.TWO_UNIT_TOTAL[1], r.two_z),
                       Check("total two-unit overlaps", ref.TWO_UNIT_TOTAL[0], tuple(r.two_overlaps))]
        else:
            checks.append(Check(f"week {r.week} two-unit Z", ref.TWO_UNIT_OPTIMAL[r.week][2], r.two_z))
    return out, checks


def _stochastic(history, cfg: RunConfig, policy: CohortPolicy, seed: int, scenarios: int, workers: int):
    clinic = cfg.clinic(policy)
    out = [["week", "pi", "seed", "scenarios", "allocation", "e_o12x3", "e_o12x4", "e_o3x4",
            "expected_z", "realized_o12x3", "realized_o12x4", "realized_o3x4", "realized_z"]]
    for week in STOCHASTIC_WEEKS:
        for level in PILevel:
            rep = plan_then_realize(history, week, level, scenarios, seed, policy, clinic, cfg.weights,
                                    cfg.chronic, workers=workers)
            e = rep.plan.expected_overlaps
            out.append([week, level.value, seed, scenarios, _fmt(rep.allocation),
                        *(f"{v:.2f}" for v in e), f"{rep.plan.expected_cost:.2f}",
                        *rep.realized_overlaps, _fmt(rep.realized.expected_cost)])
    return out, []


def _fig5(history, cfg: RunConfig):
    policy = CohortPolicy.THREE_UNIT
    clinic = cfg.clinic(policy)
    hosp = Allocation.checked(cfg.hospital_allocation, policy, clinic)
    rows = utilization_series(history, WEEKS, hosp, policy, clinic, cfg.weights)
    out = [["week", "unit", "hospital_machines", "hospital_pct", "optimal_machines", "optimal_pct"]]
    for r in rows:
        for j in range(policy.n_units):
            out.append([r.week, j + 1, hosp.machines[j], _fmt(truncated_pct(r.hospital[j])),
                        r.optimal_allocation.machines[j], _fmt(truncated_pct(r.optimal[j]))])
    return out, []


def cmd_reproduce(args) -> int:
    cfg = load_config(args)
    history = _history(args)
    tables = ["4", "5", "6", "7", "fig5"] if args.table == "all" else [args.table]
    text, checks = [], []
    seeded = any(t in ("5", "7") for t in tables)
    text += meta_lines(args.seed if seeded else None, f"reproduce --table {args.table}")
    for t in tables:
        if t == "4":
            rows, c = _table4(history, cfg)
        elif t == "6":
            rows, c = _table6(history, cfg)
        elif t == "5":
            rows, c = _stochastic(history, cfg, CohortPolicy.THREE_UNIT, args.seed, args.scenarios, args.workers)
        elif t == "7":
            rows, c = _stochastic(history, cfg, CohortPolicy.TWO_UNIT, args.seed, args.scenarios, args.workers)
        else:
            rows, c = _fig5(history, cfg)
        if len(tables) > 1:
            text.append(f"# table {t}")
        text.append(_csv(rows).rstrip("\n"))
        checks += c
    _emit("\n".join(text) + "\n", args.out)
    failed = [c for c in checks if not c.ok]
    for c in checks:
        print(f"{'PASS' if c.ok else 'FAIL'} {c.name}: expected {_fmt(c.expected)} got {_fmt(c.got)}",
              file=sys.stderr)
    if checks:
        print(f"{len(checks) - len(failed)}/{len(checks)} exact checks passed", file=sys.stderr)
    return EXIT_INVALID if failed else EXIT_OK


def cmd_render(args) -> int:
    cfg = load_config(args)
    policy = CohortPolicy.parse(args.policy)
    clinic = cfg.clinic(policy)
    if args.demand is not None:
        if len(args.demand) != 4:
            raise ValidationError("--demand needs four counts: acute,chronic,infected,suspected")
        days = [DayDemand(*args.demand)]
        labels = ["custom demand"]
    else:
        if args.week is None:
            raise ValidationError("give --week (with optional --day) or --demand")
        week = full_week(_history(args), args.week, clinic.days_per_week)
        picks = [args.day] if args.day else list(range(1, len(week) + 1))
        if any(not 1 <= d <= len(week) for d in picks):
            raise ValidationError(f"--day must lie in 1..{len(week)}")
        days = [week[d - 1] for d in picks]
        labels = [f"week {args.week} day {d}" for d in picks]
    if args.alloc is not None:
        alloc = Allocation.checked(args.alloc, policy, clinic)
    else:
        alloc = optimize(policy, clinic, cfg.weights, single(days)).allocation
    from cohortcap.solver import solve_day
    schedules = [solve_day(policy, alloc, d, cfg.weights, clinic)[0] for d in days]
    blocks = [render_day(s, alloc, policy, clinic, cfg.weights,
                         title=f"{label}: demand {_fmt(d.as_tuple())}, allocation {_fmt(alloc)}")
              for s, d, label in zip(schedules, days, labels)]
    _emit("\n".join(meta_lines(None, "render")) + "\n" + "\n\n".join(blocks) + "\n", args.out)
    if args.cells:
        _emit(schedule_cells_csv(schedules, alloc, policy), args.cells)
    return EXIT_OK


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--data", default=os.environ.get(DATA_ENV),
                        help=f"demand CSV (default: ${DATA_ENV}, else the bundled clinic data)")
    common.add_argument("--out", help="write the report here instead of stdout")

    model = _Parser(add_help=False)
    model.add_argument("--config", help="JSON config file; flags override it")
    model.add_argument("--alpha1", type=float)
    model.add_argument("--alpha2", type=float)
    model.add_argument("--alpha3", type=float)
    model.add_argument("--penalty", type=float, help="penalty per unserved patient (every type)")
    model.add_argument("--epsilon", type=float)
    model.add_argument("--total-machines", type=int)
    model.add_argument("--caps", type=_int_list, help="per-unit machine caps, e.g. 11,8,5")
    model.add_argument("--sessions", dest="sessions_per_day", type=int)
    model.add_argument("--days", dest="days_per_week", type=int)
    model.add_argument("--mwf", type=int, help="chronic patients on Mon/Wed/Fri")
    model.add_argument("--tts", type=int, help="chronic patients on Tue/Thu/Sat")
    model.add_argument("--workers", type=int, default=1)

    p = _Parser(prog="cohortcap", description="Cohorted dialysis capacity planning")
    p.add_argument("--version", action="version", version=f"cohortcap {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    f = sub.add_parser("forecast", parents=[common], help="SES intervals and demand distributions")
    f.add_argument("--week", type=int, required=True, help="target week")
    f.set_defaults(func=cmd_forecast)

    pl = sub.add_parser("plan", parents=[common, model], help="choose an allocation for one week")
    pl.add_argument("--policy", default="three-unit", choices=[c.value for c in CohortPolicy])
    pl.add_argument("--mode", default="realized", choices=["realized", "stochastic"])
    pl.add_argument("--week", type=int, required=True)
    pl.add_argument("--pi", default="80", choices=["80", "90"],
                    help="prediction-interval level for stochastic mode")
    pl.add_argument("--scenarios", type=int, default=30)
    pl.add_argument("--seed", type=int, default=0)
    pl.add_argument("--render", action="store_true", help="print the realized daily schedules")
    pl.add_argument("--cells", help="CSV dump of the realized schedule cells")
    pl.set_defaults(func=cmd_plan)

    r = sub.add_parser("reproduce", parents=[common, model], help="case-study tables as CSV")
    r.add_argument("--table", required=True, choices=["4", "5", "6", "7", "fig5", "all"])
    r.add_argument("--seed", type=int, default=1)
    r.add_argument("--scenarios", type=int, default=30)
    r.set_defaults(func=cmd_reproduce, policy="three-unit")

    rd = sub.add_parser("render", parents=[common, model], help="text grid of daily schedules")
    rd.add_argument("--policy", default="three-unit", choices=[c.value for c in CohortPolicy])
    rd.add_argument("--week", type=int)
    rd.add_argument("--day", type=int)
    rd.add_argument("--demand", type=_int_list, help="one day's demand: acute,chronic,infected,suspected")
    rd.add_argument("--alloc", type=_int_list, help="machines per unit; default is the day's optimum")
    rd.add_argument("--cells", help="CSV dump of the schedule cells")
    rd.set_defaults(func=cmd_render)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID
    except (ValidationError, ParseError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID
    except SystemExit as e:  # --help / --version
        return int(e.code or 0)
    except Exception as e:  # pragma: no cover - surfaced as internal error
        print(f"internal error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
