"""
Conditional upside/downside capture.

Periods are split by the sign of the benchmark return; zero-benchmark
periods belong to neither set. Three conventions are computed per side:

* geometric (headline): ratio of conditional geometric per-period returns
* arithmetic: ratio of conditional mean returns
* growth factor: ratio of conditional cumulative growth factors

A ratio is withheld (``None`` plus a reason code) when its side has no
observations or when the benchmark conditional return is smaller than
``epsilon`` in magnitude. Counts and the underlying conditional returns are
always reported.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import EmptyInput, WindowOutOfRange
from .series import AlignedPair

DEFAULT_EPSILON = 1e-6


@dataclass(frozen=True)
class CaptureStats:
    n_total: int
    n_plus: int
    n_minus: int
    n_zero: int
    epsilon: float
    uc_geometric: Optional[float]
    dc_geometric: Optional[float]
    uc_arithmetic: Optional[float]
    dc_arithmetic: Optional[float]
    growth_factor_up: Optional[float]
    growth_factor_down: Optional[float]
    asymmetry: Optional[float]
    asymmetry_arithmetic: Optional[float]
    portfolio_cond_up: Optional[float]
    portfolio_cond_down: Optional[float]
    benchmark_cond_up: Optional[float]
    benchmark_cond_down: Optional[float]
    portfolio_mean_up: Optional[float]
    portfolio_mean_down: Optional[float]
    benchmark_mean_up: Optional[float]
    benchmark_mean_down: Optional[float]
    guard_up: bool
    guard_down: bool
    reasons: dict = field(default_factory=dict)


def _geo(r: np.ndarray) -> float:
    return math.expm1(float(np.sum(np.log1p(r))) / len(r))


def _growth(r: np.ndarray) -> float:
    return math.exp(float(np.sum(np.log1p(r))))


def _side(p: np.ndarray, b: np.ndarray, eps: float) -> dict:
    n = len(b)
    if n == 0:
        return {"n": 0, "reason": "insufficient_data"}
    out = {
        "n": n,
        "p_geo": _geo(p),
        "b_geo": _geo(b),
        "p_mean": float(p.mean()),
        "b_mean": float(b.mean()),
        "growth": _growth(p) / _growth(b),
        "guard": False,
        "reason": None,
    }
    if abs(out["b_geo"]) < eps or abs(out["b_mean"]) < eps:
        out["guard"] = True
        out["reason"] = "guard_epsilon"
    else:
        out["geometric"] = out["p_geo"] / out["b_geo"]
        out["arithmetic"] = out["p_mean"] / out["b_mean"]
    return out


def _from_arrays(p: np.ndarray, b: np.ndarray, eps: float) -> CaptureStats:
    if len(b) == 0:
        raise EmptyInput("capture needs at least one observation")
    up = b > 0
    down = b < 0
    u = _side(p[up], b[up], eps)
    d = _side(p[down], b[down], eps)

    reasons = {}
    for side, name, res in (("up", "uc", u), ("down", "dc", d)):
        if res["reason"] is not None:
            reasons[f"{name}_geometric"] = res["reason"]
            reasons[f"{name}_arithmetic"] = res["reason"]
        if res["n"] == 0:
            for key in ("growth_factor", "portfolio_cond", "benchmark_cond", "portfolio_mean", "benchmark_mean"):
                reasons[f"{key}_{side}"] = "insufficient_data"

    asym = asym_a = None
    if "geometric" in u and "geometric" in d:
        asym = u["geometric"] - d["geometric"]
        asym_a = u["arithmetic"] - d["arithmetic"]
    else:
        reasons["asymmetry"] = reasons.get("uc_geometric") or reasons.get("dc_geometric")
        reasons["asymmetry_arithmetic"] = reasons["asymmetry"]

    return CaptureStats(
        n_total=len(b),
        n_plus=u["n"],
        n_minus=d["n"],
        n_zero=int(len(b) - u["n"] - d["n"]),
        epsilon=eps,
        uc_geometric=u.get("geometric"),
        dc_geometric=d.get("geometric"),
        uc_arithmetic=u.get("arithmetic"),
        dc_arithmetic=d.get("arithmetic"),
        growth_factor_up=u.get("growth"),
        growth_factor_down=d.get("growth"),
        asymmetry=asym,
        asymmetry_arithmetic=asym_a,
        portfolio_cond_up=u.get("p_geo"),
        portfolio_cond_down=d.get("p_geo"),
        benchmark_cond_up=u.get("b_geo"),
        benchmark_cond_down=d.get("b_geo"),
        portfolio_mean_up=u.get("p_mean"),
        portfolio_mean_down=d.get("p_mean"),
        benchmark_mean_up=u.get("b_mean"),
        benchmark_mean_down=d.get("b_mean"),
        guard_up=u.get("guard", False),
        guard_down=d.get("guard", False),
        reasons=reasons,
    )


def capture_stats(pair: AlignedPair, epsilon: float = DEFAULT_EPSILON) -> CaptureStats:
    return _from_arrays(pair.portfolio.returns, pair.benchmark.returns, epsilon)


def capture_over_window(pair: AlignedPair, window, epsilon: float = DEFAULT_EPSILON) -> CaptureStats:
    """Capture restricted to a window of return indices.

    ``window`` is a ``range`` (step 1) or a ``(start, stop)`` half-open pair.
    """
    if isinstance(window, range):
        if window.step != 1:
            raise WindowOutOfRange("window must be contiguous")
        start, stop = window.start, window.stop
    else:
        start, stop = window
    if not 0 <= start <= stop <= len(pair):
        raise WindowOutOfRange(f"window [{start}, {stop}) outside pair of length {len(pair)}")
    return _from_arrays(
        pair.portfolio.returns[start:stop], pair.benchmark.returns[start:stop], epsilon
    )
