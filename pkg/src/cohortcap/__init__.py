"""Two-stage capacity planning for a cohorted dialysis clinic."""

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
)

__version__ = "0.1.0"

__all__ = [
    "Allocation",
    "ClinicConfig",
    "CohortPolicy",
    "DayDemand",
    "DaySchedule",
    "IntDist",
    "PatientType",
    "PenaltyWeights",
    "Scenario",
    "ScenarioSet",
    "ScheduleCost",
]
