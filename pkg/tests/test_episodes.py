import numpy as np
import pytest
from hypothesis import given, strategies as st

from pathlens.episodes import (
    INCEPTION,
    Episode,
    all_submergences,
    benchmark_window_drawdown,
    portfolio_recovery_index,
    segment_episodes,
    underwater_duration,
    underwater_extended,
)
from pathlens.errors import DomainError, WindowOutOfRange
from pathlens.pathcalc import wealth_path

import oracles
from conftest import E1_BENCHMARK, E1_PORTFOLIO, random_walk, series


def _as_tuples(episodes):
    return [(e.peak_index, e.trough_index, e.recovery_index, e.depth, e.underwater_periods) for e in episodes]


def test_worked_example_single_episode():
    path = wealth_path(series([0.10, -0.20, 0.05, 0.10, 0.12]))
    (ep,) = segment_episodes(path, 0.10)
    assert ep.peak_index == 0 and path.wealth[0] == pytest.approx(1.10)
    assert ep.trough_index == 1 and path.wealth[1] == pytest.approx(0.88)
    assert ep.depth == pytest.approx(0.20, abs=1e-12)
    assert ep.recovery_index == 4 and path.wealth[4] == pytest.approx(1.1384, abs=1e-4)
    assert ep.underwater_periods == 3
    assert not ep.truncated


def test_monotone_path_has_no_episodes():
    assert segment_episodes(wealth_path(series([0.01, 0.02, 0.0, 0.03])), 0.05) == []


def test_truncated_final_episode():
    # 1.2 then down 30% and stays there
    path = wealth_path(series([0.20, -0.30, 0.0]))
    (ep,) = segment_episodes(path, 0.10)
    assert ep.truncated and ep.recovery_index is None and ep.recovery_date is None
    assert ep.depth == pytest.approx(0.30, abs=1e-12)
    assert path.drawdown[-1] == pytest.approx(0.30, abs=1e-12)
    assert ep.underwater_periods == 2


def test_episode_from_inception():
    path = wealth_path(series([-0.20, 0.10, 0.20]))
    (ep,) = segment_episodes(path, 0.10)
    assert ep.peak_index == INCEPTION and ep.peak_date is None
    assert ep.trough_index == 0 and ep.recovery_index == 2
    assert ep.underwater_periods == 2


def test_peak_ties_go_to_latest_and_recovery_at_equality():
    # wealth 1.25, 1.25, 1.0, 1.25: peak is index 1; recovery at exact equality
    path = wealth_path(series([0.25, 0.0, -0.2, 0.25]))
    (ep,) = segment_episodes(path, 0.10)
    assert ep.peak_index == 1
    assert path.wealth[3] == path.wealth[1]
    assert ep.recovery_index == 3


def test_trough_ties_go_to_earliest():
    path = wealth_path(series([0.0, -0.5, 0.0, 0.0, 1.0]))
    (ep,) = segment_episodes(path, 0.10)
    assert ep.trough_index == 1


def test_threshold_domain():
    path = wealth_path(series([0.1]))
    for bad in (0.0, 1.0, -0.1, 1.5):
        with pytest.raises(DomainError):
            segment_episodes(path, bad)


def test_sub_threshold_stretches_not_merged():
    # two separate 5% dips around a 20% dip
    rets = [0.1, -0.05, 0.06, -0.2, 0.3, -0.05, 0.1]
    path = wealth_path(series(rets))
    eps = segment_episodes(path, 0.10)
    assert len(all_submergences(path)) == 3
    assert len(eps) == 1 and eps[0].depth == pytest.approx(1 - 0.8, abs=1e-12)


@pytest.mark.parametrize("threshold", [0.05, 0.10, 0.20])
def test_matches_brute_force(rng, threshold):
    for _ in range(150):
        n = int(rng.integers(1, 201))
        rets = random_walk(rng, n, scale=float(rng.choice([0.01, 0.04, 0.1])))
        path = wealth_path(series(rets))
        expected = oracles.brute_force_episodes(path.wealth.tolist(), threshold)
        assert _as_tuples(segment_episodes(path, threshold)) == expected


@given(st.lists(st.floats(min_value=-0.5, max_value=0.5), min_size=1, max_size=60))
def test_episode_invariants(rets):
    path = wealth_path(series(rets))
    eps = segment_episodes(path, 0.01)
    last_end = -2
    for e in eps:
        a, m, b = e.peak_index, e.trough_index, e.recovery_index
        assert a > last_end - 1  # disjoint and ordered; a recovery can be the next peak
        assert e.depth >= 0.01 - 1e-12
        assert e.depth == pytest.approx(1 - path.wealth_at(m) / path.wealth_at(a), abs=0)
        top = path.wealth_at(a)
        end = b if b is not None else len(path)
        assert all(path.wealth[t] < top for t in range(a + 1, end))
        if b is not None:
            assert a < m < b
            assert path.wealth[b] >= top
        last_end = end
    assert [e.truncated for e in eps].count(True) <= 1
    if eps and eps[-1].truncated:
        assert path.drawdown[-1] > 0


@given(
    st.lists(st.floats(min_value=-0.5, max_value=0.5), min_size=1, max_size=50),
    st.floats(min_value=0.01, max_value=0.5),
    st.floats(min_value=0.01, max_value=0.5),
)
def test_lower_threshold_only_adds(rets, t1, t2):
    lo, hi = sorted((t1, t2))
    path = wealth_path(series(rets))
    assert set(_as_tuples(segment_episodes(path, hi))) <= set(_as_tuples(segment_episodes(path, lo)))


@given(
    st.lists(st.floats(min_value=-0.5, max_value=0.5), min_size=1, max_size=40),
    st.lists(st.floats(min_value=-0.5, max_value=0.5), min_size=0, max_size=40),
)
def test_prefix_stability(prefix, suffix):
    before = [e for e in segment_episodes(wealth_path(series(prefix)), 0.05) if not e.truncated]
    after = segment_episodes(wealth_path(series(prefix + suffix)), 0.05)
    assert _as_tuples(after[: len(before)]) == _as_tuples(before)


# ---------------------------------------------------------------------------
# portfolio measured on benchmark windows


def _e1():
    b = wealth_path(series(E1_BENCHMARK))
    p = wealth_path(series(E1_PORTFOLIO))
    (ep,) = segment_episodes(b, 0.10)
    return b, p, ep


def test_window_drawdown_identity():
    b, _, ep = _e1()
    assert benchmark_window_drawdown(b, ep) == ep.depth


def test_window_drawdown_e1():
    _, p, ep = _e1()
    # portfolio 1.08 -> 0.972: exactly 10% below the episode-start value
    assert benchmark_window_drawdown(p, ep) == pytest.approx(0.10, abs=1e-12)


def test_window_drawdown_clamped_for_rising_portfolio():
    _, _, ep = _e1()
    rising = wealth_path(series([0.01, 0.01, 0.01, 0.01, 0.01]))
    assert benchmark_window_drawdown(rising, ep) == 0.0


def test_underwater_e1():
    b, p, ep = _e1()
    # portfolio 0.972 and 1.01088 are below 1.08; 1.0917504 at index 3 is above
    assert underwater_duration(p, ep) == 2
    assert underwater_duration(b, ep) == ep.underwater_periods
    assert underwater_extended(p, ep) == (2, False)
    assert portfolio_recovery_index(p, ep) == 3


def test_underwater_never_below():
    _, _, ep = _e1()
    rising = wealth_path(series([0.01] * 5))
    assert underwater_duration(rising, ep) == 0
    assert underwater_duration(rising, ep, extended=True) == 0
    assert portfolio_recovery_index(rising, ep) is None


def test_underwater_extended_runs_past_benchmark_recovery():
    b = wealth_path(series([0.10, -0.20, 0.30, 0.0, 0.0, 0.0]))
    (ep,) = segment_episodes(b, 0.10)
    assert ep.recovery_index == 2
    slow = wealth_path(series([0.10, -0.20, 0.05, 0.05, 0.05, 0.05]))
    # 0.88, 0.924, 0.9702, 1.01871, 1.0696... all below 1.10 through the end
    assert underwater_duration(slow, ep) == 2
    assert underwater_extended(slow, ep) == (5, True)
    recovers = wealth_path(series([0.10, -0.20, 0.05, 0.05, 0.05, 0.30]))
    assert underwater_extended(recovers, ep) == (4, False)
    assert portfolio_recovery_index(recovers, ep) == 5


def test_window_out_of_range():
    b, _, ep = _e1()
    short = wealth_path(series([0.1, 0.1]))
    with pytest.raises(WindowOutOfRange):
        benchmark_window_drawdown(short, ep)
    with pytest.raises(WindowOutOfRange):
        underwater_duration(short, ep)
    bogus = Episode(5, 6, 9, 0.2, 3, False)
    with pytest.raises(WindowOutOfRange):
        underwater_duration(b, bogus)
