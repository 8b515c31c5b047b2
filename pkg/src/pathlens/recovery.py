"""
Recovery arithmetic and per-episode recovery-efficiency profiles.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .capture import DEFAULT_EPSILON, CaptureStats, capture_over_window
from .episodes import (
    DEFAULT_THRESHOLD,
    Episode,
    benchmark_window_drawdown,
    portfolio_recovery_index,
    segment_episodes,
    underwater_duration,
    underwater_extended,
)
from .errors import DomainError, Undefined
from .pathcalc import wealth_path
from .series import AlignedPair

TABLE1_DEPTHS = (0.05, 0.10, 0.15, 0.20, 0.25, 0.30, 0.40, 0.50, 0.60, 0.80)


def _check_depth(d, name="d") -> float:
    d = float(d)
    if not 0.0 <= d < 1.0:
        raise DomainError(f"{name} must lie in [0, 1), got {d!r}")
    return d


def required_recovery(d: float) -> float:
    """Gain needed to regain a prior peak after losing fraction ``d``."""
    d = _check_depth(d)
    return d / (1.0 - d)


@dataclass(frozen=True)
class RecoveryRow:
    depth: float
    value_after: float
    required: float


def recovery_table(depths=TABLE1_DEPTHS) -> list:
    depths = [_check_depth(d, "depth") for d in depths]
    return [RecoveryRow(d, 1.0 - d, required_recovery(d)) for d in depths]


def burden_reduction(d_benchmark: float, d_portfolio: float) -> float:
    """``1 - R(d_portfolio) / R(d_benchmark)``; positive when the portfolio lightened the recovery burden."""
    db = _check_depth(d_benchmark, "d_benchmark")
    dp = _check_depth(d_portfolio, "d_portfolio")
    if db == 0.0:
        raise Undefined("burden reduction is undefined for a zero benchmark drawdown")
    return 1.0 - required_recovery(dp) / required_recovery(db)


@dataclass(frozen=True)
class RecoveryProfile:
    episode_id: int
    episode: Episode
    d_benchmark: float
    d_portfolio: float
    r_benchmark: float
    r_portfolio: float
    br: Optional[float]
    underwater: int
    underwater_extended: int
    underwater_extended_truncated: bool
    uc_recovery: Optional[float]
    recovery_capture: Optional[CaptureStats]
    portfolio_recovery_index: Optional[int]
    portfolio_recovery_date: object
    truncated: bool
    provisional: bool
    reasons: dict = field(default_factory=dict)


def profile_for_episode(
    pair: AlignedPair,
    episode: Episode,
    episode_id: int,
    portfolio_path=None,
    epsilon: float = DEFAULT_EPSILON,
) -> RecoveryProfile:
    ppath = portfolio_path if portfolio_path is not None else wealth_path(pair.portfolio)
    reasons = {}
    d_b = episode.depth
    d_p = benchmark_window_drawdown(ppath, episode)
    try:
        br = burden_reduction(d_b, d_p)
    except Undefined:
        br = None
        reasons["br"] = "undefined_br"
    uw = underwater_duration(ppath, episode)
    uw_ext, uw_ext_trunc = underwater_extended(ppath, episode)

    uc_rec = rec_cap = None
    if episode.truncated:
        reasons["uc_recovery"] = "truncated_episode"
    else:
        # recovery leg: returns that move wealth from the trough up to the recovery date
        rec_cap = capture_over_window(
            pair, range(episode.trough_index + 1, episode.recovery_index + 1), epsilon
        )
        uc_rec = rec_cap.uc_geometric
        if uc_rec is None:
            reasons["uc_recovery"] = rec_cap.reasons.get("uc_geometric", "insufficient_data")

    p_rec = portfolio_recovery_index(ppath, episode)
    if p_rec is None:
        reasons["portfolio_recovery_index"] = (
            "truncated_episode" if uw_ext_trunc else "not_submerged"
        )
    return RecoveryProfile(
        episode_id=episode_id,
        episode=episode,
        d_benchmark=d_b,
        d_portfolio=d_p,
        r_benchmark=required_recovery(d_b),
        r_portfolio=required_recovery(d_p),
        br=br,
        underwater=uw,
        underwater_extended=uw_ext,
        underwater_extended_truncated=uw_ext_trunc,
        uc_recovery=uc_rec,
        recovery_capture=rec_cap,
        portfolio_recovery_index=p_rec,
        portfolio_recovery_date=None if p_rec is None else ppath.dates[p_rec],
        truncated=episode.truncated,
        provisional=episode.truncated,
        reasons=reasons,
    )


def recovery_profiles(
    pair: AlignedPair, threshold: float = DEFAULT_THRESHOLD, epsilon: float = DEFAULT_EPSILON
) -> list:
    """One profile per benchmark-defined episode at or beyond ``threshold``."""
    bpath = wealth_path(pair.benchmark)
    ppath = wealth_path(pair.portfolio)
    return [
        profile_for_episode(pair, ep, k, ppath, epsilon)
        for k, ep in enumerate(segment_episodes(bpath, threshold), start=1)
    ]
