"""
Recovery-efficiency report assembly.

A report has six parts: declared inputs, the full-period profile, the
benchmark-defined episodes with their recovery profiles, the portfolio's own
episodes, design costs, and optional design comparisons. ``ProtocolReport.to_dict``
produces the JSON document described by ``report.schema.json``; every
``null`` in it has a sibling ``<name>_reason`` string.
"""

from __future__ import annotations

import dataclasses
import enum
from dataclasses import dataclass, field
from typing import Optional

from .capture import DEFAULT_EPSILON, CaptureStats, capture_stats
from .episodes import DEFAULT_THRESHOLD, Episode, segment_episodes
from .errors import DegenerateInput, InsufficientData, MetadataMismatch
from .pathcalc import SummaryStats, coskewness, summary_stats, wealth_path
from .recovery import RecoveryProfile, recovery_profiles
from .scenarios import DesignCosts, DesignRow
from .series import AlignedPair, Frequency

REPORT_VERSION = "1.0.0"
REASON_CODES = (
    "insufficient_data",
    "guard_epsilon",
    "undefined_br",
    "truncated_episode",
    "degenerate_input",
    "not_submerged",
    "inception",
    "not_requested",
    "declared_unavailable",
)


class EpisodeBasis(str, enum.Enum):
    BENCHMARK_DEFINED = "benchmark_defined"
    PORTFOLIO_DEFINED = "portfolio_defined"
    BOTH = "both"


@dataclass(frozen=True)
class ProtocolInputs:
    benchmark_label: str
    strategy_label: str
    frequency: Optional[Frequency] = None
    sample_start: object = None
    sample_end: object = None
    fee_treatment: str = "not declared"
    data_source: str = "not declared"
    liquidity_assumptions: str = "not declared"
    drawdown_threshold: float = DEFAULT_THRESHOLD
    episode_basis: EpisodeBasis = EpisodeBasis.BOTH
    recovery_constraint: str = "not declared"
    capture_epsilon: float = DEFAULT_EPSILON

    def __post_init__(self):
        if not str(self.benchmark_label).strip() or not str(self.strategy_label).strip():
            raise ValueError("benchmark and strategy labels must be non-empty")
        if not 0.0 < self.drawdown_threshold < 1.0:
            raise ValueError(f"drawdown_threshold must lie in (0, 1), got {self.drawdown_threshold!r}")
        if self.frequency is not None:
            object.__setattr__(self, "frequency", Frequency.parse(self.frequency))
        object.__setattr__(self, "episode_basis", EpisodeBasis(self.episode_basis))


@dataclass(frozen=True)
class ProtocolReport:
    inputs: ProtocolInputs
    periods_per_year: int
    observations: int
    alignment: dict
    portfolio_summary: SummaryStats
    benchmark_summary: SummaryStats
    capture: CaptureStats
    coskewness: Optional[float]
    benchmark_episodes: Optional[list]
    own_episodes: Optional[list]
    costs: Optional[DesignCosts]
    comparisons: Optional[list]
    reasons: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return report_to_dict(self)


def build_report(
    pair: AlignedPair,
    inputs: ProtocolInputs,
    costs: Optional[DesignCosts] = None,
    comparisons: Optional[list] = None,
) -> ProtocolReport:
    """Run every diagnostic over ``pair`` and assemble the report.

    Inputs left as ``None`` (frequency, sample dates) are filled from the
    pair; declared values that disagree with it raise ``MetadataMismatch``.
    """
    if inputs.frequency is not None and inputs.frequency != pair.frequency:
        raise MetadataMismatch(
            f"inputs declare {inputs.frequency.value} but series are {pair.frequency.value}"
        )
    for name, actual in (("sample_start", pair.dates[0]), ("sample_end", pair.dates[-1])):
        declared = getattr(inputs, name)
        if declared is not None and declared != actual:
            raise MetadataMismatch(f"inputs declare {name}={declared} but series has {actual}")
    inputs = dataclasses.replace(
        inputs,
        frequency=pair.frequency,
        sample_start=pair.dates[0],
        sample_end=pair.dates[-1],
    )

    reasons = {}
    threshold = inputs.drawdown_threshold
    basis = inputs.episode_basis

    try:
        cosk = coskewness(pair.portfolio, pair.benchmark)
    except InsufficientData:
        cosk = None
        reasons["coskewness"] = "insufficient_data"
    except DegenerateInput:
        cosk = None
        reasons["coskewness"] = "degenerate_input"

    bench_eps = own_eps = None
    if basis in (EpisodeBasis.BENCHMARK_DEFINED, EpisodeBasis.BOTH):
        bench_eps = recovery_profiles(pair, threshold, inputs.capture_epsilon)
    else:
        reasons["benchmark_episodes"] = "not_requested"
    if basis in (EpisodeBasis.PORTFOLIO_DEFINED, EpisodeBasis.BOTH):
        own_eps = segment_episodes(wealth_path(pair.portfolio), threshold)
    else:
        reasons["own_episodes"] = "not_requested"
    if costs is None:
        reasons["costs"] = "declared_unavailable"
    if comparisons is None:
        reasons["comparisons"] = "not_requested"

    return ProtocolReport(
        inputs=inputs,
        periods_per_year=pair.periods_per_year,
        observations=len(pair),
        alignment={
            "mode": "inner_join" if pair.dropped else "strict",
            "dropped_portfolio": int(pair.dropped.get("portfolio", 0)),
            "dropped_benchmark": int(pair.dropped.get("benchmark", 0)),
        },
        portfolio_summary=summary_stats(pair.portfolio),
        benchmark_summary=summary_stats(pair.benchmark),
        capture=capture_stats(pair, inputs.capture_epsilon),
        coskewness=cosk,
        benchmark_episodes=bench_eps,
        own_episodes=own_eps,
        costs=costs,
        comparisons=comparisons,
        reasons=reasons,
    )


# ---------------------------------------------------------------------------
# dict conversion


def _scalar(v):
    if isinstance(v, enum.Enum):
        return v.value
    if hasattr(v, "isoformat"):
        return v.isoformat()
    if hasattr(v, "item"):  # numpy scalar
        return v.item()
    return v


def _put(out: dict, key: str, value, reasons: dict, fallback: Optional[str] = None):
    out[key] = _scalar(value)
    if value is None:
        reason = reasons.get(key, fallback)
        if reason is None:
            raise ValueError(f"null field {key!r} has no reason code")
        if reason not in REASON_CODES:
            raise ValueError(f"unknown reason code {reason!r} for {key!r}")
        out[f"{key}_reason"] = reason


def _fields(obj, reasons=None, skip=()) -> dict:
    reasons = getattr(obj, "reasons", {}) if reasons is None else reasons
    out = {}
    for f in dataclasses.fields(obj):
        if f.name == "reasons" or f.name in skip:
            continue
        _put(out, f.name, getattr(obj, f.name), reasons)
    return out


def summary_to_dict(s: SummaryStats) -> dict:
    return _fields(s)


def capture_to_dict(c: CaptureStats) -> dict:
    return _fields(c)


def episode_to_dict(e: Episode) -> dict:
    out = {
        "peak_index": e.peak_index,
        "trough_index": e.trough_index,
    }
    _put(out, "recovery_index", e.recovery_index, {}, "truncated_episode")
    _put(out, "peak_date", e.peak_date, {}, "inception")
    out["trough_date"] = _scalar(e.trough_date)
    _put(out, "recovery_date", e.recovery_date, {}, "truncated_episode")
    out["depth"] = e.depth
    out["underwater_periods"] = e.underwater_periods
    out["truncated"] = e.truncated
    return out


def profile_to_dict(p: RecoveryProfile) -> dict:
    out = {"episode_id": p.episode_id, "episode": episode_to_dict(p.episode)}
    for name in (
        "d_benchmark",
        "d_portfolio",
        "r_benchmark",
        "r_portfolio",
        "br",
        "underwater",
        "underwater_extended",
        "underwater_extended_truncated",
        "uc_recovery",
    ):
        _put(out, name, getattr(p, name), p.reasons)
    if p.recovery_capture is None:
        out["recovery_capture"] = None
        out["recovery_capture_reason"] = "truncated_episode"
    else:
        out["recovery_capture"] = capture_to_dict(p.recovery_capture)
    _put(out, "portfolio_recovery_index", p.portfolio_recovery_index, p.reasons)
    _put(out, "portfolio_recovery_date", p.portfolio_recovery_date, p.reasons,
         p.reasons.get("portfolio_recovery_index"))
    out["truncated"] = p.truncated
    out["provisional"] = p.provisional
    return out


def costs_to_dict(c: Optional[DesignCosts]) -> dict:
    if c is None:
        return {"status": "declared_unavailable"}
    out = {"status": "supplied"}
    out.update(_fields(c))
    return out


def design_row_to_dict(row: DesignRow) -> dict:
    return {
        "label": row.label,
        "rule": row.rule.describe(),
        "summary": summary_to_dict(row.summary),
        "capture": capture_to_dict(row.capture),
        "episodes": [profile_to_dict(p) for p in row.profiles],
        "costs": costs_to_dict(row.costs),
    }


def headline(report: ProtocolReport) -> dict:
    """The seven full-period figures the protocol requires up front."""
    s, c = report.portfolio_summary, report.capture
    out = {}
    _put(out, "annualized_return", s.annualized_return, s.reasons)
    _put(out, "annualized_volatility", s.annualized_volatility, s.reasons)
    _put(out, "max_drawdown", s.max_drawdown, s.reasons)
    _put(out, "longest_underwater", s.longest_underwater, s.reasons)
    _put(out, "upside_capture", c.uc_geometric, {"upside_capture": c.reasons.get("uc_geometric")})
    _put(out, "downside_capture", c.dc_geometric, {"downside_capture": c.reasons.get("dc_geometric")})
    _put(out, "capture_asymmetry", c.asymmetry, {"capture_asymmetry": c.reasons.get("asymmetry")})
    return out


def report_to_dict(report: ProtocolReport) -> dict:
    inp = report.inputs
    inputs = {
        "benchmark_label": inp.benchmark_label,
        "strategy_label": inp.strategy_label,
        "frequency": inp.frequency.value,
        "periods_per_year": report.periods_per_year,
        "sample_start": inp.sample_start.isoformat(),
        "sample_end": inp.sample_end.isoformat(),
        "observations": report.observations,
        "fee_treatment": inp.fee_treatment,
        "data_source": inp.data_source,
        "liquidity_assumptions": inp.liquidity_assumptions,
        "drawdown_threshold": inp.drawdown_threshold,
        "episode_basis": inp.episode_basis.value,
        "capture_epsilon": inp.capture_epsilon,
        "recovery_constraint": inp.recovery_constraint,
        "alignment": dict(report.alignment),
    }
    full = {
        "headline": headline(report),
        "portfolio": summary_to_dict(report.portfolio_summary),
        "benchmark": summary_to_dict(report.benchmark_summary),
        "capture": capture_to_dict(report.capture),
        "auxiliary": {},
    }
    _put(full["auxiliary"], "coskewness", report.coskewness, report.reasons)

    doc = {"report_version": REPORT_VERSION, "inputs": inputs, "full_period": full}
    if report.benchmark_episodes is None:
        _put(doc, "benchmark_episodes", None, report.reasons)
    else:
        doc["benchmark_episodes"] = [profile_to_dict(p) for p in report.benchmark_episodes]
    if report.own_episodes is None:
        _put(doc, "own_episodes", None, report.reasons)
    else:
        doc["own_episodes"] = [episode_to_dict(e) for e in report.own_episodes]
    doc["costs"] = costs_to_dict(report.costs)
    if report.comparisons is None:
        _put(doc, "comparisons", None, report.reasons)
    else:
        doc["comparisons"] = [design_row_to_dict(r) for r in report.comparisons]
    return doc
