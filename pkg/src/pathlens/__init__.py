"""Path-dependent drawdown, recovery and capture diagnostics for return series."""

__version__ = "0.1.0"

from .capture import CaptureStats, capture_over_window, capture_stats
from .episodes import (
    Episode,
    benchmark_window_drawdown,
    segment_episodes,
    underwater_duration,
)
from .pathcalc import SummaryStats, WealthPath, coskewness, skewness, summary_stats, wealth_path
from .protocol import EpisodeBasis, ProtocolInputs, ProtocolReport, build_report
from .recovery import (
    TABLE1_DEPTHS,
    RecoveryProfile,
    burden_reduction,
    recovery_profiles,
    recovery_table,
    required_recovery,
)
from .render import render, validate_report
from .scenarios import DesignCosts, ExposureRule, apply_rule, compare_designs
from .series import AlignedPair, Frequency, ReturnSeries, align, load_csv, write_csv
