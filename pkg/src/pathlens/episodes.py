"""
Submergence episode segmentation.

An episode runs from a high-water mark, through the stretch where wealth is
below that mark, to the first observation at or above it again. Boundary
conventions:

* the peak is the latest index attaining the pre-episode high;
* recovery is the first index with wealth >= the peak value;
* the trough is the earliest index of minimum wealth;
* an episode still open at the end of the sample is ``truncated`` and its
  depth is the depth observed so far.

Indices refer to observations of the path; ``INCEPTION`` (-1) denotes the
implicit starting wealth of 1.0.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .errors import DomainError, WindowOutOfRange
from .pathcalc import INCEPTION, WealthPath

DEFAULT_THRESHOLD = 0.10
# depths are ratios of cumulative products; a drawdown of exactly the
# threshold must not be dropped for a last-bit rounding difference
THRESHOLD_TOL = 1e-12


@dataclass(frozen=True)
class Episode:
    peak_index: int
    trough_index: int
    recovery_index: Optional[int]
    depth: float
    underwater_periods: int
    truncated: bool
    peak_date: object = None
    trough_date: object = None
    recovery_date: object = None

    @property
    def resolved(self) -> bool:
        return self.recovery_index is not None

    def end_index(self, path_length: int) -> int:
        """Last index of the episode window (sample end when unresolved)."""
        return self.recovery_index if self.recovery_index is not None else path_length - 1


def _make_episode(path: WealthPath, peak: int, trough: int, recovery: Optional[int], n: int) -> Episode:
    peak_val = path.wealth_at(peak)
    depth = 1.0 - path.wealth_at(trough) / peak_val
    end = recovery if recovery is not None else n
    return Episode(
        peak_index=peak,
        trough_index=trough,
        recovery_index=recovery,
        depth=depth,
        underwater_periods=end - peak - 1,
        truncated=recovery is None,
        peak_date=path.date_at(peak),
        trough_date=path.date_at(trough),
        recovery_date=None if recovery is None else path.date_at(recovery),
    )


def all_submergences(path: WealthPath) -> list:
    """Every maximal underwater stretch, regardless of depth."""
    w = path.wealth
    n = len(w)
    out = []
    peak, peak_val = INCEPTION, 1.0
    trough = None
    for t in range(n):
        wt = w[t]
        if wt >= peak_val:
            if trough is not None:
                out.append(_make_episode(path, peak, trough, t, n))
                trough = None
            peak, peak_val = t, wt
        elif trough is None or wt < w[trough]:
            trough = t
    if trough is not None:
        out.append(_make_episode(path, peak, trough, None, n))
    return out


def segment_episodes(path: WealthPath, threshold: float = DEFAULT_THRESHOLD) -> list:
    """Submergence episodes with depth >= ``threshold``, in chronological order."""
    if not 0.0 < threshold < 1.0:
        raise DomainError(f"threshold must lie in (0, 1), got {threshold!r}")
    return [e for e in all_submergences(path) if e.depth >= threshold - THRESHOLD_TOL]


def _check_window(path: WealthPath, episode: Episode) -> int:
    end = episode.end_index(len(path))
    if episode.peak_index < INCEPTION or end >= len(path) or end < episode.peak_index:
        raise WindowOutOfRange(
            f"episode window [{episode.peak_index}, {end}] outside path of length {len(path)}"
        )
    return end


def benchmark_window_drawdown(portfolio_path: WealthPath, episode: Episode) -> float:
    """Portfolio drawdown measured from its own value at the episode peak date."""
    end = _check_window(portfolio_path, episode)
    start = episode.peak_index
    base = portfolio_path.wealth_at(start)
    lo = portfolio_path.wealth[max(start, 0) : end + 1].min()
    return max(0.0, 1.0 - min(float(lo), base) / base)


def underwater_extended(portfolio_path: WealthPath, episode: Episode) -> tuple:
    """(periods below the episode-start value, truncated) with the window extended.

    Counting continues past the benchmark recovery until the portfolio first
    regains its episode-start value. ``truncated`` is True when the sample
    ends first.
    """
    end = _check_window(portfolio_path, episode)
    base = portfolio_path.wealth_at(episode.peak_index)
    w = portfolio_path.wealth
    count = int((w[episode.peak_index + 1 : end + 1] < base).sum())
    if episode.truncated:
        return count, bool(w[end] < base)
    t = end
    if w[t] >= base:
        return count, False
    t += 1
    while t < len(w):
        if w[t] >= base:
            return count, False
        count += 1
        t += 1
    return count, True


def underwater_duration(portfolio_path: WealthPath, episode: Episode, extended: bool = False) -> int:
    """Periods in the episode window with portfolio wealth below its episode-start value."""
    if extended:
        return underwater_extended(portfolio_path, episode)[0]
    end = _check_window(portfolio_path, episode)
    base = portfolio_path.wealth_at(episode.peak_index)
    return int((portfolio_path.wealth[episode.peak_index + 1 : end + 1] < base).sum())


def portfolio_recovery_index(portfolio_path: WealthPath, episode: Episode) -> Optional[int]:
    """First index at which the portfolio regains its episode-start value after dipping below it.

    None if the portfolio never went below it or has not recovered by the
    end of the sample.
    """
    _check_window(portfolio_path, episode)
    base = portfolio_path.wealth_at(episode.peak_index)
    below = False
    for t in range(episode.peak_index + 1, len(portfolio_path)):
        wt = portfolio_path.wealth[t]
        if wt < base:
            below = True
        elif below:
            return t
    return None
