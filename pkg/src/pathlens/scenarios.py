"""
Exposure-rule transforms of a benchmark and design-cost accounting.

Two rules are supported: constant scaling (symmetric de-risking) and
volatility targeting. Exposure at ``t`` only ever uses returns strictly
before ``t``. Turnover is reported but never charged against returns.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from .capture import DEFAULT_EPSILON, CaptureStats, capture_stats
from .episodes import DEFAULT_THRESHOLD
from .errors import DomainError, InsufficientData
from .pathcalc import SummaryStats, summary_stats
from .recovery import recovery_profiles
from .series import AlignedPair, Frequency, ReturnSeries

DEFAULT_LOOKBACK = {
    Frequency.DAILY: 21,
    Frequency.WEEKLY: 13,
    Frequency.MONTHLY: 12,
    Frequency.QUARTERLY: 4,
}


@dataclass(frozen=True)
class ExposureRule:
    kind: str
    weight: float = 1.0
    target_vol: float = 0.10
    lookback: Optional[int] = None
    cap: float = 1.5

    def __post_init__(self):
        if self.kind == "constant":
            if not (math.isfinite(self.weight) and self.weight >= 0):
                raise DomainError(f"constant weight must be >= 0, got {self.weight!r}")
        elif self.kind == "vol_target":
            if not self.target_vol > 0:
                raise DomainError("target_vol must be > 0")
            if self.lookback is not None and self.lookback < 2:
                raise DomainError("lookback must be >= 2")
            if not self.cap >= 0:
                raise DomainError("cap must be >= 0")
        else:
            raise DomainError(f"unknown rule kind {self.kind!r}")

    @classmethod
    def constant(cls, weight: float) -> "ExposureRule":
        return cls("constant", weight=weight)

    @classmethod
    def vol_target(cls, target_vol=0.10, lookback=None, cap=1.5) -> "ExposureRule":
        return cls("vol_target", target_vol=target_vol, lookback=lookback, cap=cap)

    def resolved(self, frequency) -> "ExposureRule":
        """Copy with the frequency-default lookback filled in."""
        if self.kind != "vol_target" or self.lookback is not None:
            return self
        return replace(self, lookback=DEFAULT_LOOKBACK[Frequency.parse(frequency)])

    def describe(self) -> dict:
        if self.kind == "constant":
            return {"kind": "constant", "weight": self.weight}
        return {
            "kind": "vol_target",
            "target_vol": self.target_vol,
            "lookback": self.lookback,
            "cap": self.cap,
        }


def parse_rule(text: str) -> ExposureRule:
    """Parse ``constant:W`` or ``voltarget:TARGET[,LOOKBACK[,CAP]]``."""
    kind, _, params = text.partition(":")
    kind = kind.strip().lower().replace("-", "_")
    try:
        values = [p.strip() for p in params.split(",")] if params.strip() else []
        if kind == "constant":
            if len(values) != 1:
                raise DomainError("constant rule takes exactly one weight, e.g. constant:0.7")
            return ExposureRule.constant(float(values[0]))
        if kind in ("voltarget", "vol_target"):
            if len(values) > 3:
                raise DomainError("voltarget rule is voltarget:TARGET[,LOOKBACK[,CAP]]")
            target = float(values[0]) if values else 0.10
            lookback = int(values[1]) if len(values) > 1 else None
            cap = float(values[2]) if len(values) > 2 else 1.5
            return ExposureRule.vol_target(target, lookback, cap)
    except ValueError as exc:
        raise DomainError(f"bad rule spec {text!r}: {exc}") from None
    raise DomainError(f"unknown rule kind in {text!r} (expected constant or voltarget)")


def exposures(benchmark: ReturnSeries, rule: ExposureRule) -> np.ndarray:
    b = benchmark.returns
    n = len(b)
    if rule.kind == "constant":
        return np.full(n, float(rule.weight))

    lookback = rule.resolved(benchmark.frequency).lookback
    if n <= lookback:
        raise InsufficientData(f"vol_target needs more than {lookback} observations, got {n}")
    ann = math.sqrt(benchmark.periods_per_year)
    w = np.empty(n)
    w[:lookback] = min(rule.cap, 1.0)
    for t in range(lookback, n):
        sigma = float(np.std(b[t - lookback : t], ddof=1)) * ann
        w[t] = rule.cap if sigma == 0.0 else min(rule.cap, rule.target_vol / sigma)
    return w


def apply_rule(benchmark: ReturnSeries, rule: ExposureRule, label: Optional[str] = None) -> tuple:
    """Scaled return stream ``w_t * B_t`` and the exposure sequence ``w_t``."""
    w = exposures(benchmark, rule)
    scaled = benchmark.with_returns(w * benchmark.returns, label=label or rule.kind)
    w.setflags(write=False)
    return scaled, w


@dataclass(frozen=True)
class DesignCosts:
    turnover: float
    tracking_error: float
    mean_exposure: float
    reasons: dict = field(default_factory=dict)


def design_costs(portfolio: ReturnSeries, benchmark: ReturnSeries, weights) -> DesignCosts:
    """Annual turnover of exposure, annualized tracking error and mean exposure."""
    w = np.asarray(weights, dtype=float)
    n = len(w)
    ppy = benchmark.periods_per_year
    years = n / ppy
    turnover = float(np.abs(np.diff(w)).sum()) / years
    active = portfolio.returns - benchmark.returns
    te = float(np.std(active, ddof=1)) * math.sqrt(ppy) if n >= 2 else 0.0
    return DesignCosts(turnover, te, float(w.mean()))


@dataclass(frozen=True)
class DesignRow:
    label: str
    rule: ExposureRule
    summary: SummaryStats
    capture: CaptureStats
    profiles: list
    costs: DesignCosts


def evaluate_design(
    benchmark: ReturnSeries,
    label: str,
    rule: ExposureRule,
    threshold: float = DEFAULT_THRESHOLD,
    epsilon: float = DEFAULT_EPSILON,
) -> DesignRow:
    rule = rule.resolved(benchmark.frequency)
    scaled, w = apply_rule(benchmark, rule, label=label)
    pair = AlignedPair(scaled, benchmark)
    return DesignRow(
        label=label,
        rule=rule,
        summary=summary_stats(scaled),
        capture=capture_stats(pair, epsilon),
        profiles=recovery_profiles(pair, threshold, epsilon),
        costs=design_costs(scaled, benchmark, w),
    )


def compare_designs(
    benchmark: ReturnSeries,
    rules,
    threshold: float = DEFAULT_THRESHOLD,
    epsilon: float = DEFAULT_EPSILON,
) -> list:
    """Evaluate each ``(label, rule)`` against the benchmark, preserving input order."""
    rules = list(rules)
    if not rules:
        raise DomainError("compare_designs needs at least one rule")
    return [evaluate_design(benchmark, label, rule, threshold, epsilon) for label, rule in rules]
