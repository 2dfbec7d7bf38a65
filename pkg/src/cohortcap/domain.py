"""Core value types: patient types, cohorting policies, clinic parameters,
demand scenarios, allocations and day schedules.

Sessions are numbered 1..sessions_per_day in everything user-facing; the
tuples inside :class:`DaySchedule` are 0-indexed by ``session - 1``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Iterator, Optional, Sequence


class ValidationError(ValueError):
    """Raised when an input violates a model constraint."""


class PatientType(enum.IntEnum):
    ACUTE = 1
    CHRONIC = 2
    INFECTED = 3
    SUSPECTED = 4


TYPES = tuple(PatientType)


class CohortPolicy(enum.Enum):
    THREE_UNIT = "three-unit"
    TWO_UNIT = "two-unit"

    @property
    def n_units(self) -> int:
        return 3 if self is CohortPolicy.THREE_UNIT else 2

    def unit_of(self, ptype: PatientType) -> int:
        """1-based unit index treating ``ptype``."""
        ptype = PatientType(ptype)
        if ptype <= PatientType.CHRONIC:
            return 1
        if self is CohortPolicy.TWO_UNIT:
            return 2
        return 2 if ptype is PatientType.INFECTED else 3

    def types_in_unit(self, unit: int) -> tuple[PatientType, ...]:
        return tuple(t for t in TYPES if self.unit_of(t) == unit)

    @classmethod
    def parse(cls, text: str) -> "CohortPolicy":
        key = text.strip().lower().replace("_", "-")
        for p in cls:
            if p.value == key or p.name.lower().replace("_", "-") == key:
                return p
        raise ValueError(f"unknown policy {text!r}; expected 'three-unit' or 'two-unit'")


DEFAULT_CAPS = {
    CohortPolicy.THREE_UNIT: (11, 8, 5),
    CohortPolicy.TWO_UNIT: (11, 8),
}

HOSPITAL_ALLOCATION = (7, 5, 2)


@dataclass(frozen=True)
class ClinicConfig:
    total_machines: int = 14
    unit_caps: tuple[int, ...] = DEFAULT_CAPS[CohortPolicy.THREE_UNIT]
    sessions_per_day: int = 4
    days_per_week: int = 6

    def __post_init__(self):
        object.__setattr__(self, "unit_caps", tuple(int(c) for c in self.unit_caps))
        if self.total_machines < 1:
            raise ValidationError("total_machines must be >= 1")
        if any(c < 0 for c in self.unit_caps):
            raise ValidationError("unit caps must be >= 0")
        if self.sessions_per_day < 1 or self.days_per_week < 1:
            raise ValidationError("sessions_per_day and days_per_week must be >= 1")

    @classmethod
    def for_policy(cls, policy: CohortPolicy, **overrides) -> "ClinicConfig":
        overrides.setdefault("unit_caps", DEFAULT_CAPS[policy])
        return cls(**overrides)

    def check_policy(self, policy: CohortPolicy) -> None:
        if len(self.unit_caps) != policy.n_units:
            raise ValidationError(
                f"{policy.value} needs {policy.n_units} unit caps, got {len(self.unit_caps)}"
            )


@dataclass(frozen=True)
class PenaltyWeights:
    alpha1: float = 1000
    alpha2: float = 1000
    alpha3: float = 100
    pi: tuple[float, float, float, float] = (100_000, 100_000, 100_000, 100_000)
    epsilon: float = 2

    def __post_init__(self):
        pi = self.pi
        if isinstance(pi, (int, float)):
            pi = (pi,) * 4
        object.__setattr__(self, "pi", tuple(pi))
        if len(self.pi) != 4:
            raise ValidationError("pi needs one entry per patient type")
        if min(self.alpha1, self.alpha2, self.alpha3, self.epsilon, *self.pi) < 0:
            raise ValidationError("penalty weights must be non-negative")

    def pi_of(self, ptype: PatientType) -> float:
        return self.pi[int(ptype) - 1]

    def scaled(self, factor: float) -> "PenaltyWeights":
        return PenaltyWeights(
            self.alpha1 * factor,
            self.alpha2 * factor,
            self.alpha3 * factor,
            tuple(p * factor for p in self.pi),
            self.epsilon * factor,
        )


@dataclass(frozen=True)
class DayDemand:
    """Patients of each type needing dialysis on one day."""

    acute: int = 0
    chronic: int = 0
    infected: int = 0
    suspected: int = 0

    def __post_init__(self):
        for name in ("acute", "chronic", "infected", "suspected"):
            v = getattr(self, name)
            if int(v) != v or v < 0:
                raise ValidationError(f"demand {name}={v!r} must be a non-negative integer")
            object.__setattr__(self, name, int(v))

    def __iter__(self) -> Iterator[int]:
        return iter((self.acute, self.chronic, self.infected, self.suspected))

    def __getitem__(self, ptype: PatientType) -> int:
        return self.as_tuple()[int(ptype) - 1]

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.acute, self.chronic, self.infected, self.suspected)

    @property
    def total(self) -> int:
        return sum(self.as_tuple())


@dataclass(frozen=True)
class Scenario:
    probability: float
    days: tuple[DayDemand, ...]

    def __post_init__(self):
        object.__setattr__(self, "days", tuple(self.days))
        if not 0 < self.probability <= 1 + 1e-12:
            raise ValidationError(f"scenario probability {self.probability} not in (0, 1]")


@dataclass(frozen=True)
class ScenarioSet:
    scenarios: tuple[Scenario, ...]

    def __post_init__(self):
        object.__setattr__(self, "scenarios", tuple(self.scenarios))
        if not self.scenarios:
            raise ValidationError("a scenario set needs at least one scenario")
        total = math.fsum(s.probability for s in self.scenarios)
        if abs(total - 1.0) > 1e-9:
            raise ValidationError(f"scenario probabilities sum to {total}, not 1")
        lengths = {len(s.days) for s in self.scenarios}
        if len(lengths) != 1:
            raise ValidationError("scenarios disagree on the number of days")

    def __len__(self) -> int:
        return len(self.scenarios)

    def __iter__(self) -> Iterator[Scenario]:
        return iter(self.scenarios)

    def check_days(self, config: ClinicConfig) -> None:
        n = len(self.scenarios[0].days)
        if n != config.days_per_week:
            raise ValidationError(f"scenarios have {n} days, config expects {config.days_per_week}")


@dataclass(frozen=True)
class Allocation:
    """Machines assigned to each unit."""

    machines: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "machines", tuple(self.machines))
        for r in self.machines:
            if int(r) != r or r < 0:
                raise ValidationError(f"machine count {r!r} must be a non-negative integer")
        object.__setattr__(self, "machines", tuple(int(r) for r in self.machines))

    def __iter__(self) -> Iterator[int]:
        return iter(self.machines)

    def __getitem__(self, unit: int) -> int:
        """Machines in 1-based ``unit``."""
        return self.machines[unit - 1]

    def __str__(self) -> str:
        return "(" + ", ".join(map(str, self.machines)) + ")"

    @classmethod
    def checked(cls, machines: Sequence[int], policy: CohortPolicy, config: ClinicConfig) -> "Allocation":
        alloc = cls(tuple(machines))
        alloc.check(policy, config)
        return alloc

    def check(self, policy: CohortPolicy, config: ClinicConfig) -> None:
        config.check_policy(policy)
        if len(self.machines) != policy.n_units:
            raise ValidationError(
                f"allocation {self} has {len(self.machines)} units, {policy.value} needs {policy.n_units}"
            )
        for j, (r, cap) in enumerate(zip(self.machines, config.unit_caps), start=1):
            if r > cap:
                raise ValidationError(f"unit {j}: {r} machines exceeds cap {cap}")
        if sum(self.machines) > config.total_machines:
            raise ValidationError(
                f"allocation {self} uses {sum(self.machines)} machines, only {config.total_machines} available"
            )


@dataclass(frozen=True)
class ScheduleCost:
    overlap_12x3: int = 0
    overlap_12x4: int = 0
    overlap_3x4: int = 0
    unserved_penalty: float = 0
    sessions_used: int = 0
    total: float = 0
    unserved_patients: int = 0

    @classmethod
    def from_parts(cls, q: int, g: int, w: int, unserved: Sequence[int], sessions: int,
                   weights: PenaltyWeights) -> "ScheduleCost":
        unserved_pen = sum(weights.pi_of(t) * f for t, f in zip(TYPES, unserved))
        total = (weights.alpha1 * q + weights.alpha2 * g + weights.alpha3 * w
                 + unserved_pen + weights.epsilon * sessions)
        return cls(q, g, w, unserved_pen, sessions, total, sum(unserved))

    def __add__(self, other: "ScheduleCost") -> "ScheduleCost":
        return ScheduleCost(
            self.overlap_12x3 + other.overlap_12x3,
            self.overlap_12x4 + other.overlap_12x4,
            self.overlap_3x4 + other.overlap_3x4,
            self.unserved_penalty + other.unserved_penalty,
            self.sessions_used + other.sessions_used,
            self.total + other.total,
            self.unserved_patients + other.unserved_patients,
        )

    @property
    def overlaps(self) -> tuple[int, int, int]:
        return (self.overlap_12x3, self.overlap_12x4, self.overlap_3x4)

    def recomputed_total(self, weights: PenaltyWeights) -> float:
        return (weights.alpha1 * self.overlap_12x3 + weights.alpha2 * self.overlap_12x4
                + weights.alpha3 * self.overlap_3x4 + self.unserved_penalty
                + weights.epsilon * self.sessions_used)


@dataclass(frozen=True)
class IntDist:
    """Finite distribution over non-negative integers."""

    support: tuple[tuple[int, float], ...]
    _cdf: tuple[float, ...] = field(default=(), repr=False, compare=False)

    def __post_init__(self):
        support = tuple((int(v), float(m)) for v, m in self.support)
        object.__setattr__(self, "support", support)
        if not support:
            raise ValidationError("empty distribution")
        values = [v for v, _ in support]
        if values[0] < 0 or any(b <= a for a, b in zip(values, values[1:])):
            raise ValidationError("support values must be non-negative and strictly increasing")
        if any(m <= 0 for _, m in support):
            raise ValidationError("masses must be positive")
        total = math.fsum(m for _, m in support)
        if abs(total - 1.0) > 1e-9:
            raise ValidationError(f"masses sum to {total}")
        cdf, acc = [], 0.0
        for _, m in support:
            acc += m
            cdf.append(acc)
        cdf[-1] = 1.0
        object.__setattr__(self, "_cdf", tuple(cdf))

    @classmethod
    def point(cls, value: int) -> "IntDist":
        return cls(((value, 1.0),))

    def as_dict(self) -> dict[int, float]:
        return dict(self.support)

    def mass(self, value: int) -> float:
        return self.as_dict().get(value, 0.0)

    def mean(self) -> float:
        return math.fsum(v * m for v, m in self.support)

    def value_at(self, u: float) -> int:
        """Inverse CDF for ``u`` in [0, 1)."""
        for (v, _), c in zip(self.support, self._cdf):
            if u < c:
                return v
        return self.support[-1][0]


@dataclass(frozen=True)
class DaySchedule:
    """Treatment plan for one day.

    assigned[i][s]  patients of type i+1 in session s+1
    marks[j][s]     unit j+1 runs session s+1
    type4_cutoff    two-unit only: last session of the isolated unit's
                    suspected-patient part; infected patients go strictly
                    after it.  0 means the suspected part is empty.
    """

    assigned: tuple[tuple[int, ...], ...]
    marks: tuple[tuple[bool, ...], ...]
    unserved: tuple[int, int, int, int]
    type4_cutoff: Optional[int] = None

    @property
    def sessions(self) -> int:
        return len(self.assigned[0])

    @classmethod
    def empty(cls, policy: CohortPolicy, sessions: int) -> "DaySchedule":
        return cls(
            tuple((0,) * sessions for _ in TYPES),
            tuple((False,) * sessions for _ in range(policy.n_units)),
            (0, 0, 0, 0),
            None,
        )

    def unit_load(self, policy: CohortPolicy, unit: int, session: int) -> int:
        return sum(self.assigned[t - 1][session - 1] for t in policy.types_in_unit(unit))

    def served(self, ptype: PatientType) -> int:
        return sum(self.assigned[int(ptype) - 1])


def _is_block(flags: Sequence[bool]) -> bool:
    idx = [s for s, f in enumerate(flags) if f]
    return not idx or idx[-1] - idx[0] + 1 == len(idx)


def check_schedule(schedule: DaySchedule, policy: CohortPolicy, config: ClinicConfig,
                   demand: DayDemand, alloc: Allocation) -> tuple[bool, str]:
    """Return ``(True, "ok")`` or ``(False, <first violated constraint>)``."""
    S = config.sessions_per_day
    X, N = schedule.assigned, schedule.marks
    if len(X) != 4 or any(len(row) != S for row in X):
        return False, "shape: assigned must be 4 x sessions_per_day"
    if len(N) != policy.n_units or any(len(row) != S for row in N):
        return False, "shape: marks must be units x sessions_per_day"
    if len(alloc.machines) != policy.n_units:
        return False, "shape: allocation length"
    if any(x < 0 for row in X for x in row) or any(f < 0 for f in schedule.unserved):
        return False, "non-negativity"
    for t in TYPES:
        if sum(X[t - 1]) + schedule.unserved[t - 1] != demand[t]:
            return False, f"balance: type {int(t)} served + unserved != demand"
    for t in TYPES:
        j = policy.unit_of(t)
        for s in range(S):
            if X[t - 1][s] > 0 and not N[j - 1][s]:
                return False, f"marking: type {int(t)} in session {s + 1} without unit {j} mark"
    if any(N[0][s + 1] and not N[0][s] for s in range(S - 1)):
        return False, "prefix: standard unit sessions must start at session 1"
    for j in range(2, policy.n_units + 1):
        if not _is_block(N[j - 1]):
            return False, f"contiguity: unit {j} sessions must be consecutive"
    for j in range(1, policy.n_units + 1):
        for s in range(1, S + 1):
            if schedule.unit_load(policy, j, s) > alloc[j]:
                return False, f"capacity: unit {j} session {s} exceeds {alloc[j]} machines"
    if policy is CohortPolicy.TWO_UNIT:
        c = schedule.type4_cutoff
        if c is None:
            if any(N[1]):
                return False, "sequencing: isolated unit marked without a cutoff"
        else:
            if not 0 <= c <= S:
                return False, "sequencing: cutoff out of range"
            if any(X[3][s] > 0 for s in range(c, S)):
                return False, "sequencing: suspected patient after cutoff"
            if any(X[2][s] > 0 for s in range(0, c)):
                return False, "sequencing: infected patient at or before cutoff"
    elif schedule.type4_cutoff is not None:
        return False, "sequencing: cutoff only applies to two-unit schedules"
    return True, "ok"
