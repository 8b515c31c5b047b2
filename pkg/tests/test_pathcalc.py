import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from pathlens.errors import DegenerateInput, InsufficientData
from pathlens.pathcalc import (
    coskewness,
    geometric_return,
    longest_underwater,
    skewness,
    summary_stats,
    volatility,
    wealth_path,
)

import oracles
from conftest import series

returns_lists = st.lists(st.floats(min_value=-0.95, max_value=1.5), min_size=1, max_size=60)


def test_wealth_path_hand_example():
    p = wealth_path(series([0.10, -0.20, 0.05]))
    # 1.1, 1.1*0.8, 1.1*0.8*1.05
    np.testing.assert_allclose(p.wealth, [1.10, 0.88, 0.924], rtol=0, atol=1e-15)
    np.testing.assert_allclose(p.hwm, [1.10, 1.10, 1.10], rtol=0, atol=1e-15)
    np.testing.assert_allclose(p.drawdown, [0.0, 0.2, 0.16], rtol=0, atol=1e-15)


def test_wealth_path_zero_return():
    p = wealth_path(series([0.0]))
    assert p.wealth.tolist() == [1.0]
    assert p.drawdown.tolist() == [0.0]


def test_first_return_negative_starts_underwater():
    # inception wealth 1.0 counts toward the high-water mark
    p = wealth_path(series([-0.1, 0.05]))
    assert p.hwm.tolist() == [1.0, 1.0]
    assert p.drawdown[0] == pytest.approx(0.1, abs=1e-15)


@given(returns_lists)
def test_wealth_path_invariants(rets):
    p = wealth_path(series(rets))
    np.testing.assert_allclose(p.wealth, oracles.wealth(rets), rtol=1e-12)
    assert np.all(p.wealth > 0)
    assert np.all(p.hwm >= p.wealth)
    assert np.all(np.diff(p.hwm) >= 0)
    assert np.all((p.drawdown >= 0) & (p.drawdown < 1))
    assert np.array_equal(p.drawdown == 0, p.wealth == p.hwm)


@given(returns_lists, st.randoms(use_true_random=False))
def test_permutation_leaves_terminal_wealth_and_g(rets, rnd):
    shuffled = list(rets)
    rnd.shuffle(shuffled)
    a, b = summary_stats(series(rets)), summary_stats(series(shuffled))
    assert b.terminal_wealth == pytest.approx(a.terminal_wealth, rel=1e-12)
    assert b.geometric_return == pytest.approx(a.geometric_return, rel=1e-12, abs=1e-15)


def test_permutation_changes_max_drawdown():
    a = summary_stats(series([0.10, -0.10, 0.10, -0.10]))
    b = summary_stats(series([0.10, 0.10, -0.10, -0.10]))
    assert a.terminal_wealth == pytest.approx(b.terminal_wealth, rel=1e-15)
    # 1.1 -> 0.9801 versus 1.21 -> 0.9801
    assert a.max_drawdown == pytest.approx(1 - 0.9801 / 1.1, abs=1e-12)
    assert b.max_drawdown == pytest.approx(1 - 0.9801 / 1.21, abs=1e-12)
    assert a.max_drawdown != pytest.approx(b.max_drawdown, abs=0.05)


def test_summary_alternating_ten_percent():
    s = summary_stats(series([0.10, -0.10]))
    assert s.arithmetic_mean == pytest.approx(0.0, abs=1e-17)
    assert s.geometric_return == pytest.approx(math.sqrt(0.99) - 1, abs=1e-15)
    assert s.geometric_return == pytest.approx(-0.0050126, abs=1e-7)
    assert s.volatility == pytest.approx(0.1414214, abs=1e-7)
    # population variance 0.01 drives the drag term
    assert s.drag_approx == pytest.approx(-0.005, abs=1e-15)
    assert s.mean_log_growth == pytest.approx(0.5 * math.log(0.99), abs=1e-15)
    assert abs(s.mean_log_growth - s.drag_approx) < 3e-5


def test_summary_constant_series():
    s = summary_stats(series([0.01] * 12))
    assert s.arithmetic_mean == pytest.approx(0.01, abs=1e-15)
    assert s.geometric_return == pytest.approx(0.01, abs=1e-15)
    assert s.volatility == 0.0
    assert s.drag_approx == pytest.approx(0.01, abs=1e-15)
    assert s.skewness is None and s.reasons["skewness"] == "degenerate_input"
    with pytest.raises(DegenerateInput):
        skewness([0.01] * 12)


def test_summary_single_observation():
    s = summary_stats(series([0.05]))
    assert s.volatility is None and s.reasons["volatility"] == "insufficient_data"
    assert s.annualized_return == pytest.approx(1.05**12 - 1, rel=1e-13)
    with pytest.raises(InsufficientData):
        volatility([0.05])


def test_annualization():
    rets = [0.01, 0.02, -0.005, 0.0]
    s = summary_stats(series(rets))
    g = (1.01 * 1.02 * 0.995) ** 0.25 - 1
    assert s.annualized_return == pytest.approx((1 + g) ** 12 - 1, rel=1e-12)
    assert s.annualized_volatility == pytest.approx(np.std(rets, ddof=1) * math.sqrt(12), rel=1e-12)


@given(returns_lists)
def test_reconstruction(rets):
    s = summary_stats(series(rets))
    assert (1 + s.geometric_return) ** len(rets) == pytest.approx(s.terminal_wealth, rel=1e-12)


@given(st.lists(st.floats(min_value=-0.5, max_value=0.5), min_size=2, max_size=60))
def test_geometric_not_above_arithmetic(rets):
    s = summary_stats(series(rets))
    assert s.geometric_return <= s.arithmetic_mean + 1e-15


@given(st.lists(st.floats(min_value=-0.01, max_value=0.01), min_size=1, max_size=80))
def test_drag_approximation_error_bound(rets):
    # log(1+r) = r - r^2/2 + O(r^3), so the gap to mu - sigma^2/2 is the dropped
    # mu^2/2 term plus a cubic Taylor remainder
    s = summary_stats(series(rets))
    m = max(abs(x) for x in rets)
    bound = s.arithmetic_mean**2 / 2 + m**3 / (3 * (1 - m) ** 3) + 1e-15
    assert abs(s.mean_log_growth - s.drag_approx) <= bound


def test_drag_approximation_misses_mean_squared_term():
    # a constant 1% series sits 5e-5 away from mu - sigma^2/2: within the
    # |r| <= 1% band the approximation is only 1e-5 accurate for near-zero means
    s = summary_stats(series([0.01] * 24))
    assert s.mean_log_growth - s.drag_approx == pytest.approx(math.log1p(0.01) - 0.01, rel=1e-9)
    assert abs(s.mean_log_growth - s.drag_approx) > 1e-5


@given(st.lists(st.floats(min_value=-0.6, max_value=0.6), min_size=1, max_size=40))
def test_longest_underwater_matches_scan(rets):
    p = wealth_path(series(rets))
    assert longest_underwater(p) == oracles.longest_run_scan(p.drawdown.tolist())
    assert summary_stats(series(rets)).max_drawdown == p.drawdown.max()


def test_skewness_known_value():
    # three points 0, 0, 3: m2 = 2, m3 = 2, skew = 2 / 2**1.5
    assert skewness([0.0, 0.0, 0.03]) == pytest.approx(1 / math.sqrt(2), rel=1e-12)


def test_coskewness_self_is_skewness(rng):
    x = rng.normal(0, 0.03, 50)
    assert coskewness(x, x) == pytest.approx(skewness(x), rel=1e-12)


def test_coskewness_constant_portfolio_is_degenerate():
    # a constant leg has zero variance, so the standardized moment is undefined
    with pytest.raises(DegenerateInput):
        coskewness([0.01, 0.01, 0.01, 0.01], [0.05, -0.05, 0.05, -0.05])


def test_coskewness_symmetric_benchmark_zero():
    # symmetric two-point benchmark: (B - mB)^2 is constant, so the cross moment vanishes
    p = [0.02, -0.01, 0.03, 0.00]
    b = [0.05, -0.05, 0.05, -0.05]
    assert coskewness(p, b) == pytest.approx(0.0, abs=1e-15)


def test_coskewness_matches_triple_sum(rng):
    for _ in range(20):
        p = rng.normal(0.01, 0.04, 50)
        b = rng.standard_t(4, 50) * 0.03
        assert coskewness(p, b) == pytest.approx(oracles.coskewness_triple_sum(p.tolist(), b.tolist()), rel=1e-12)


def test_coskewness_needs_three():
    with pytest.raises(InsufficientData):
        coskewness([0.1, 0.2], [0.1, 0.3])


@given(returns_lists)
def test_geometric_return_overflow_safe(rets):
    g = geometric_return(rets)
    assert math.isfinite(g) and g > -1
