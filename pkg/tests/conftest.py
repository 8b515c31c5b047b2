from datetime import date, timedelta

import numpy as np
import pytest
from hypothesis import settings

from pathlens.series import AlignedPair, ReturnSeries

settings.register_profile("default", deadline=None, max_examples=100)
settings.load_profile("default")

E1_BENCHMARK = [0.10, -0.20, 0.05, 0.10, 0.12]
E1_PORTFOLIO = [0.08, -0.10, 0.04, 0.08, 0.09]


def month_ends(n, start=date(2000, 1, 31)):
    """n distinct increasing dates, one per month."""
    out = []
    y, m = start.year, start.month
    for _ in range(n):
        nxt = date(y + (m // 12), m % 12 + 1, 1)
        out.append(nxt - timedelta(days=1))
        y, m = nxt.year, nxt.month
    return out


def series(returns, frequency="monthly", label="s"):
    return ReturnSeries(month_ends(len(returns)), returns, frequency, label)


def pair(portfolio, benchmark):
    return AlignedPair(series(portfolio, label="p"), series(benchmark, label="b"))


def random_walk(rng, n, scale=0.05):
    return np.clip(rng.normal(0.002, scale, size=n), -0.9, None)


@pytest.fixture
def rng():
    return np.random.default_rng(20261019)


@pytest.fixture
def e1_pair():
    return pair(E1_PORTFOLIO, E1_BENCHMARK)


def random_report(rng):
    """A report over a randomized pair, exercising the null-producing branches."""
    from pathlens.protocol import EpisodeBasis, ProtocolInputs, build_report
    from pathlens.scenarios import ExposureRule, apply_rule, compare_designs, design_costs

    n = int(rng.integers(1, 90))
    b = random_walk(rng, n, scale=float(rng.choice([0.01, 0.05, 0.12])))
    kind = rng.integers(0, 4)
    if kind == 0:
        b[rng.random(n) < 0.3] = 0.0  # zero-return benchmark periods
    elif kind == 1:
        b[:] = 0.01  # one-sided, constant benchmark
    p = np.clip(0.6 * b + rng.normal(0, 0.01, n), -0.9, None)
    if rng.random() < 0.15:
        p[:] = 0.004
    pr = pair(p, b)
    basis = list(EpisodeBasis)[int(rng.integers(0, 3))]
    inputs = ProtocolInputs("bench", "strat", drawdown_threshold=float(rng.choice([0.05, 0.10, 0.20])),
                            episode_basis=basis)
    costs = comparisons = None
    if rng.random() < 0.5:
        _, w = apply_rule(pr.benchmark, ExposureRule.constant(0.6))
        costs = design_costs(pr.portfolio, pr.benchmark, w)
    if n > 4 and rng.random() < 0.5:
        comparisons = compare_designs(
            pr.benchmark,
            [("sym", ExposureRule.constant(0.7)), ("vt", ExposureRule.vol_target(0.10, 3, 1.5))],
            inputs.drawdown_threshold,
        )
    return build_report(pr, inputs, costs=costs, comparisons=comparisons)


def assert_nulls_have_reasons(node, where="$"):
    from pathlens.protocol import REASON_CODES

    if isinstance(node, dict):
        for k, v in node.items():
            if v is None:
                assert f"{k}_reason" in node, f"{where}.{k} is null without a reason"
                assert node[f"{k}_reason"] in REASON_CODES, f"{where}.{k}_reason"
            else:
                assert_nulls_have_reasons(v, f"{where}.{k}")
    elif isinstance(node, list):
        for i, v in enumerate(node):
            assert v is not None, f"{where}[{i}] is null"
            assert_nulls_have_reasons(v, f"{where}[{i}]")


ACCEPTANCE_KEY = pytest.StashKey[list]()


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(ACCEPTANCE_KEY, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
