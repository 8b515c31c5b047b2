"""
Wealth paths, high-water marks, drawdowns and full-period statistics.

Wealth is normalised to 1 at inception. The inception value is implicit:
it is not stored as an observation but it does count toward the high-water
mark, so a series whose first return is negative starts underwater.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import DegenerateInput, InsufficientData
from .series import ReturnSeries

INCEPTION = -1  # index of the implicit W_0 = 1 observation


@dataclass(frozen=True, eq=False)
class WealthPath:
    dates: tuple
    wealth: np.ndarray
    hwm: np.ndarray
    drawdown: np.ndarray

    def __len__(self) -> int:
        return len(self.wealth)

    def wealth_at(self, i: int) -> float:
        """Wealth at observation ``i``; ``INCEPTION`` gives the initial 1.0."""
        if i == INCEPTION:
            return 1.0
        if not 0 <= i < len(self.wealth):
            raise IndexError(i)
        return float(self.wealth[i])

    def date_at(self, i: int):
        return None if i == INCEPTION else self.dates[i]


def wealth_path(series: ReturnSeries) -> WealthPath:
    wealth = np.cumprod(1.0 + series.returns)
    hwm = np.maximum.accumulate(np.maximum(wealth, 1.0))
    drawdown = 1.0 - wealth / hwm
    # exact zero at the high-water mark, never -0.0 or 1e-17 noise
    drawdown[wealth == hwm] = 0.0
    for arr in (wealth, hwm, drawdown):
        arr.setflags(write=False)
    return WealthPath(series.dates, wealth, hwm, drawdown)


def longest_underwater(path: WealthPath) -> int:
    """Longest run of consecutive observations with positive drawdown."""
    best = run = 0
    for dd in path.drawdown:
        run = run + 1 if dd > 0 else 0
        best = max(best, run)
    return best


def arithmetic_mean(returns) -> float:
    return float(np.mean(returns))


def geometric_return(returns) -> float:
    """Per-period geometric return, computed through logs to avoid overflow."""
    r = np.asarray(returns, dtype=float)
    return math.expm1(float(np.sum(np.log1p(r))) / len(r))


def _constant(r: np.ndarray) -> bool:
    # checked on the raw values: the mean of equal floats can be off by an
    # ulp, which would otherwise leave spurious nonzero deviations
    return bool(np.all(r == r[0]))


def _standardized(r: np.ndarray) -> np.ndarray:
    dev = r - r.mean()
    sd = math.sqrt(float(np.mean(dev**2)))
    if _constant(r) or sd == 0.0:
        raise DegenerateInput("standardized moment of a zero-variance series is undefined")
    return dev / sd


def volatility(returns, ddof: int = 1) -> float:
    r = np.asarray(returns, dtype=float)
    if len(r) < 2:
        raise InsufficientData("volatility needs at least 2 observations")
    if _constant(r):
        return 0.0
    return float(np.std(r, ddof=ddof))


def skewness(returns) -> float:
    """Standardized third central moment ``m3 / m2**1.5`` (moment form, no bias correction)."""
    r = np.asarray(returns, dtype=float)
    if len(r) < 2:
        raise InsufficientData("skewness needs at least 2 observations")
    return float(np.mean(_standardized(r) ** 3))


def coskewness(portfolio, benchmark) -> float:
    """Standardized cross third moment ``E[dP dB^2] / (sigma_P sigma_B^2)``.

    Population moments throughout, so that ``coskewness(x, x) == skewness(x)``.
    Accepts ``ReturnSeries`` or plain arrays of equal length.
    """
    p = np.asarray(getattr(portfolio, "returns", portfolio), dtype=float)
    b = np.asarray(getattr(benchmark, "returns", benchmark), dtype=float)
    if len(p) != len(b):
        raise InsufficientData("coskewness needs aligned legs of equal length")
    if len(p) < 3:
        raise InsufficientData("coskewness needs at least 3 observations")
    try:
        zp, zb = _standardized(p), _standardized(b)
    except DegenerateInput:
        raise DegenerateInput("coskewness undefined for a zero-variance leg") from None
    return float(np.mean(zp * zb**2))


@dataclass(frozen=True)
class SummaryStats:
    """Full-period statistics, per period unless prefixed ``annualized_``.

    ``volatility`` is the sample (n-1) standard deviation. ``drag_approx`` uses
    the population variance, since the drag relation is a moment statement.
    Fields that cannot be computed are ``None`` and carry an entry in
    ``reasons``.
    """

    periods: int
    periods_per_year: int
    arithmetic_mean: float
    geometric_return: float
    mean_log_growth: float
    volatility: Optional[float]
    annualized_return: float
    annualized_volatility: Optional[float]
    drag_approx: float
    skewness: Optional[float]
    max_drawdown: float
    longest_underwater: int
    terminal_wealth: float
    reasons: dict = field(default_factory=dict)


def summary_stats(series: ReturnSeries) -> SummaryStats:
    r = series.returns
    n = len(r)
    ppy = series.periods_per_year
    path = wealth_path(series)
    reasons = {}

    mu = arithmetic_mean(r)
    g = geometric_return(r)
    var_pop = 0.0 if _constant(r) else float(np.mean((r - mu) ** 2))

    vol = ann_vol = skew = None
    if n < 2:
        reasons["volatility"] = reasons["annualized_volatility"] = "insufficient_data"
        reasons["skewness"] = "insufficient_data"
    else:
        vol = volatility(r)
        ann_vol = vol * math.sqrt(ppy)
        try:
            skew = skewness(r)
        except DegenerateInput:
            reasons["skewness"] = "degenerate_input"

    return SummaryStats(
        periods=n,
        periods_per_year=ppy,
        arithmetic_mean=mu,
        geometric_return=g,
        mean_log_growth=float(np.mean(np.log1p(r))),
        volatility=vol,
        annualized_return=math.expm1(ppy * math.log1p(g)),
        annualized_volatility=ann_vol,
        drag_approx=mu - 0.5 * var_pop,
        skewness=skew,
        max_drawdown=float(path.drawdown.max()),
        longest_underwater=longest_underwater(path),
        terminal_wealth=float(path.wealth[-1]),
        reasons=reasons,
    )
