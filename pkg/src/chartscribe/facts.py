"""Statistical content of chart descriptions.

Extrema, mean, population standard deviation, median, type-7 quartiles,
IQR outliers, monotonicity, trend intervals with slopes, significant
intervals, Pearson correlation, and pie proportions.

Trend handling follows a monotonic-first rule: a series whose deltas
never change sign is one trend interval; only non-monotonic series are
segmented into maximal same-sign delta runs.
"""

from __future__ import annotations

import statistics
from dataclasses import dataclass
from enum import Enum
from typing import Optional

from .errors import (
    ConstantInputError,
    EmptySeriesError,
    NegativeValueError,
    TooShortError,
    UnknownVariableError,
    ZeroTotalError,
)
from .model import ChartType, ColumnKind, Series

# Deltas at most this far from zero count as constant; CSV data is exact,
# the tolerance only guards float artifacts.
ZERO_TOLERANCE = 1e-12

# Defaults for significant_intervals; the CLI and service expose both.
DEFAULT_INTERVAL_THRESHOLD = 4
DEFAULT_TOP_K = 3


class Direction(Enum):
    RISING = "rising"
    FALLING = "falling"
    CONSTANT = "constant"


class Monotonicity(Enum):
    INCREASING = "increasing"
    DECREASING = "decreasing"
    CONSTANT = "constant"


@dataclass(frozen=True)
class Extrema:
    max_value: float
    max_label: str
    min_value: float
    min_label: str
    max_row: int
    min_row: int


@dataclass(frozen=True)
class TrendInterval:
    start: int
    end: int  # inclusive, end > start
    direction: Direction
    slope: float


@dataclass(frozen=True)
class FactsBundle:
    extrema: Extrema
    mean: float
    stddev: float
    median: float
    outliers: tuple[tuple[int, float], ...]
    monotonic: Optional[Monotonicity] = None
    intervals: tuple[TrendInterval, ...] = ()
    significant: tuple[TrendInterval, ...] = ()
    correlation: Optional[float] = None
    pie_shares: Optional[tuple[float, ...]] = None
    dropped_points: int = 0


@dataclass(frozen=True)
class FactsConfig:
    interval_threshold: int = DEFAULT_INTERVAL_THRESHOLD
    top_k: int = DEFAULT_TOP_K


def _require_nonempty(s: Series) -> None:
    if len(s) == 0:
        raise EmptySeriesError("series has no data points")


def extrema(s: Series) -> Extrema:
    """Max/min with first occurrence winning on ties."""
    _require_nonempty(s)
    max_row = 0
    min_row = 0
    for i, v in enumerate(s.y):
        if v > s.y[max_row]:
            max_row = i
        if v < s.y[min_row]:
            min_row = i
    return Extrema(
        max_value=s.y[max_row],
        max_label=s.labels[max_row],
        min_value=s.y[min_row],
        min_label=s.labels[min_row],
        max_row=max_row,
        min_row=min_row,
    )


def mean(s: Series) -> float:
    _require_nonempty(s)
    return statistics.fmean(s.y)


def stddev(s: Series) -> float:
    """Population standard deviation (divide by n)."""
    _require_nonempty(s)
    return statistics.pstdev(s.y)


def median(s: Series) -> float:
    _require_nonempty(s)
    return statistics.median(s.y)


def quartiles(s: Series) -> tuple[float, float, float]:
    """Linear interpolation of sorted order statistics at p*(n-1) ("type 7")."""
    _require_nonempty(s)
    if len(s) == 1:
        v = s.y[0]
        return (v, v, v)
    q1, q2, q3 = statistics.quantiles(s.y, n=4, method="inclusive")
    return (q1, q2, q3)


def iqr_outliers(s: Series) -> tuple[tuple[int, float], ...]:
    """Points outside [q1 - 1.5*IQR, q3 + 1.5*IQR], in row order."""
    q1, _, q3 = quartiles(s)
    iqr = q3 - q1
    lo = q1 - 1.5 * iqr
    hi = q3 + 1.5 * iqr
    return tuple((i, v) for i, v in enumerate(s.y) if v < lo or v > hi)


def _delta_sign(d: float) -> int:
    if abs(d) <= ZERO_TOLERANCE:
        return 0
    return 1 if d > 0 else -1


def is_monotonic(s: Series) -> Optional[Monotonicity]:
    """Non-strict monotonicity of y; None when deltas change sign."""
    if len(s) < 2:
        raise TooShortError("monotonicity needs at least 2 points")
    signs = {_delta_sign(b - a) for a, b in zip(s.y, s.y[1:])}
    if signs <= {0}:
        return Monotonicity.CONSTANT
    if signs <= {0, 1}:
        return Monotonicity.INCREASING
    if signs <= {0, -1}:
        return Monotonicity.DECREASING
    return None


def _axis_positions(s: Series) -> list[float]:
    """Numeric positions on the independent axis for slope computation.

    Categorical x uses ordinal indices; temporal x uses days since the
    first timestamp; numeric x is used as-is.
    """
    if s.x_kind is ColumnKind.CATEGORICAL:
        return [float(i) for i in range(len(s))]
    if s.x_kind is ColumnKind.TEMPORAL:
        t0 = s.x[0]
        return [(t - t0).total_seconds() / 86400.0 for t in s.x]
    return [float(v) for v in s.x]


def _slope(pos: list[float], s: Series, start: int, end: int) -> float:
    dx = pos[end] - pos[start]
    if dx == 0:
        dx = float(end - start)  # degenerate axis positions: fall back to ordinals
    return (s.y[end] - s.y[start]) / dx


def segment_trend(s: Series) -> tuple[TrendInterval, ...]:
    """Intervals of rising, falling, or constant values tiling [0, n-1].

    A monotonic series is a single interval.  Otherwise intervals are
    maximal runs of same-sign consecutive deltas sharing endpoints, so
    interval i+1 starts where interval i ends.
    """
    if len(s) < 2:
        raise TooShortError("trend segmentation needs at least 2 points")
    pos = _axis_positions(s)
    n = len(s)

    mono = is_monotonic(s)
    if mono is not None:
        direction = {
            Monotonicity.INCREASING: Direction.RISING,
            Monotonicity.DECREASING: Direction.FALLING,
            Monotonicity.CONSTANT: Direction.CONSTANT,
        }[mono]
        return (TrendInterval(0, n - 1, direction, _slope(pos, s, 0, n - 1)),)

    signs = [_delta_sign(b - a) for a, b in zip(s.y, s.y[1:])]
    intervals = []
    run_start = 0
    for i in range(1, len(signs) + 1):
        if i == len(signs) or signs[i] != signs[run_start]:
            direction = {1: Direction.RISING, -1: Direction.FALLING, 0: Direction.CONSTANT}[
                signs[run_start]
            ]
            intervals.append(TrendInterval(run_start, i, direction, _slope(pos, s, run_start, i)))
            run_start = i
    return tuple(intervals)


def significant_intervals(
    intervals: tuple[TrendInterval, ...],
    k: int = DEFAULT_TOP_K,
    threshold: int = DEFAULT_INTERVAL_THRESHOLD,
) -> tuple[TrendInterval, ...]:
    """All intervals when at most ``threshold``; else the k steepest.

    The k intervals with largest absolute slope (ties to the earlier
    start) are returned re-sorted by start index.
    """
    if len(intervals) <= threshold:
        return tuple(intervals)
    ranked = sorted(intervals, key=lambda iv: (-abs(iv.slope), iv.start))
    top = ranked[:k]
    return tuple(sorted(top, key=lambda iv: iv.start))


def correlation(x: list[float], y: list[float]) -> float:
    """Pearson r over numeric vectors of equal length."""
    if len(x) != len(y):
        raise ValueError("x and y must have equal length")
    if len(x) < 2:
        raise TooShortError("correlation needs at least 2 points")
    try:
        return statistics.correlation(x, y)
    except statistics.StatisticsError as exc:
        raise ConstantInputError(str(exc)) from None


def pie_proportions(s: Series) -> tuple[float, ...]:
    """Shares y_i / sum(y) in row order; requires nonnegative values."""
    _require_nonempty(s)
    for v in s.y:
        if v < 0:
            raise NegativeValueError(f"negative slice value: {v}")
    total = sum(s.y)
    if total == 0:
        raise ZeroTotalError("all slice values are zero")
    return tuple(v / total for v in s.y)


def compute_facts(bundle, variable: str, config: FactsConfig | None = None) -> FactsBundle:
    """Assemble every applicable fact for one dependent variable.

    Trend and correlation apply only when the independent axis is numeric
    or temporal; pie shares only for pie charts.  Correlation is omitted
    (None) when either vector is constant.
    """
    from .ingestion import build_series  # local import to avoid a cycle

    config = config or FactsConfig()
    if variable not in bundle.table.column_names():
        raise UnknownVariableError(variable)
    s, dropped = build_series(bundle, variable)

    trendable = s.x_kind in (ColumnKind.NUMERIC, ColumnKind.TEMPORAL) and len(s) >= 2

    monotonic = None
    intervals: tuple[TrendInterval, ...] = ()
    significant: tuple[TrendInterval, ...] = ()
    corr = None
    if trendable:
        monotonic = is_monotonic(s)
        intervals = segment_trend(s)
        significant = significant_intervals(intervals, config.top_k, config.interval_threshold)
        try:
            corr = correlation(_axis_positions(s), list(s.y))
        except ConstantInputError:
            corr = None

    pie_shares = None
    if bundle.metadata.chart_type is ChartType.PIE:
        pie_shares = pie_proportions(s)

    return FactsBundle(
        extrema=extrema(s),
        mean=mean(s),
        stddev=stddev(s),
        median=median(s),
        outliers=iqr_outliers(s),
        monotonic=monotonic,
        intervals=intervals,
        significant=significant,
        correlation=corr,
        pie_shares=pie_shares,
        dropped_points=dropped,
    )
