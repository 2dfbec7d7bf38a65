"""Simple exponential smoothing, prediction intervals and their
discretization to integer demand distributions."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from cohortcap.domain import IntDist, ValidationError

MWF_DAYS = (1, 3, 5)
TTS_DAYS = (2, 4, 6)


class PILevel(enum.Enum):
    PI80 = 80
    PI90 = 90

    @property
    def k(self) -> float:
        return {PILevel.PI80: 1.28, PILevel.PI90: 1.64}[self]

    @classmethod
    def parse(cls, value) -> "PILevel":
        if isinstance(value, PILevel):
            return value
        return cls(int(str(value).upper().removeprefix("PI")))


@dataclass(frozen=True)
class SesFit:
    smoothing: float
    point_forecast: float
    rmse: float

    def __post_init__(self):
        if not 0 <= self.smoothing <= 1:
            raise ValidationError("smoothing must lie in [0, 1]")
        if self.rmse < 0:
            raise ValidationError("rmse must be >= 0")


@dataclass(frozen=True)
class PredictionInterval:
    lower: float
    upper: float
    level: Optional[PILevel] = None

    @property
    def degenerate(self) -> bool:
        return not self.upper > self.lower

    @property
    def width(self) -> float:
        return self.upper - self.lower


def ses_path(series: Sequence[float], smoothing: float) -> np.ndarray:
    """One-step-ahead forecasts ŷ_1..ŷ_{n+1}, starting from ŷ_1 = y_1."""
    y = np.asarray(series, dtype=float)
    out = np.empty(len(y) + 1)
    out[0] = y[0]
    for t in range(len(y)):
        out[t + 1] = smoothing * y[t] + (1 - smoothing) * out[t]
    return out


def _rmse(y: np.ndarray, path: np.ndarray) -> float:
    # the t=1 error is zero by construction but still counts towards n
    return float(np.sqrt(np.mean((y - path[:-1]) ** 2)))


def fit_ses(series: Sequence[float], smoothing: Optional[float] = None, step: float = 0.001) -> SesFit:
    """Fit SES by grid search on the smoothing constant, minimizing RMSE.

    Pass ``smoothing`` to skip the search.
    """
    y = np.asarray(series, dtype=float)
    if y.ndim != 1 or len(y) < 2:
        raise ValidationError("SES needs a series of at least two observations")
    if smoothing is not None:
        path = ses_path(y, smoothing)
        return SesFit(float(smoothing), float(path[-1]), _rmse(y, path))

    grid = np.linspace(0.0, 1.0, int(round(1 / step)) + 1)
    # vectorized recursion over the whole grid
    level = np.full(grid.shape, y[0])
    sq = np.zeros(grid.shape)
    for obs in y:
        sq += (obs - level) ** 2
        level = grid * obs + (1 - grid) * level
    rmse = np.sqrt(sq / len(y))
    best = int(np.argmin(rmse))
    return SesFit(float(grid[best]), float(level[best]), float(rmse[best]))


def prediction_interval(fit: SesFit, level) -> PredictionInterval:
    level = PILevel.parse(level)
    half = level.k * fit.rmse
    return PredictionInterval(fit.point_forecast - half, fit.point_forecast + half, level)


def discretize_uniform(interval: PredictionInterval) -> IntDist:
    """Round a uniform variable on (lower, upper) to the nearest integer,
    with negative values sent to 0.

    Integer n >= 1 collects the mass of [n - 0.5, n + 0.5); 0 collects
    everything below 0.5.
    """
    lo, hi = interval.lower, interval.upper
    if interval.degenerate:
        return IntDist.point(_round_half_up(max(0.0, lo)))
    width = hi - lo
    masses = {}
    if lo < 0.5:
        masses[0] = (min(hi, 0.5) - lo) / width
    first = max(1, _round_half_up(lo))
    last = _round_half_up(hi)
    for n in range(first, last + 1):
        m = (min(hi, n + 0.5) - max(lo, n - 0.5)) / width
        if m > 0:
            masses[n] = m
    masses = {v: m for v, m in masses.items() if m > 0}
    total = math.fsum(masses.values())
    return IntDist(tuple((v, m / total) for v, m in sorted(masses.items())))


def _round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


def chronic_demand(weekday: int, mwf: int = 12, tts: int = 8) -> int:
    """Chronic patients on ``weekday`` (1 = Monday .. 6 = Saturday)."""
    if weekday in MWF_DAYS:
        return mwf
    if weekday in TTS_DAYS:
        return tts
    if weekday == 7:
        raise ValidationError("no dialysis planning on Sundays")
    raise ValidationError(f"weekday {weekday} outside 1..6")
