"""
Command-line interface.

Exit codes: 0 success, 1 input validation or parse failure, 2 usage error.
Only the requested artifact goes to stdout; diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional

from . import __version__
from .capture import DEFAULT_EPSILON, capture_stats
from .config import Config, ConfigError, load_config
from .episodes import DEFAULT_THRESHOLD, segment_episodes
from .errors import DomainError, PathlensError
from .pathcalc import wealth_path
from .protocol import REPORT_VERSION, EpisodeBasis, ProtocolInputs, build_report, capture_to_dict, design_row_to_dict
from .protocol import episode_to_dict, profile_to_dict
from .recovery import TABLE1_DEPTHS, recovery_table, recovery_profiles
from .render import (
    FORMATS,
    csv_table,
    dump_json,
    render,
    render_capture,
    render_episodes,
    render_recovery_table,
    comparisons_markdown,
    report_csv_sections,
)
from .scenarios import compare_designs, parse_rule
from .series import Frequency, align, load_csv

EXIT_OK, EXIT_INPUT, EXIT_USAGE = 0, 1, 2

SUBCOMMANDS = ("analyze", "table-r", "episodes", "capture", "compare")


class UsageError(Exception):
    pass


@dataclass
class CliConfig:
    subcommand: str
    portfolio: Optional[Path] = None
    benchmark: Optional[Path] = None
    frequency: Frequency = Frequency.MONTHLY
    threshold: float = DEFAULT_THRESHOLD
    fmt: str = "json"
    out: Optional[Path] = None
    strict: bool = True
    extended_underwater: bool = False
    epsilon: float = DEFAULT_EPSILON
    periods_per_year: Optional[int] = None
    depths: tuple = TABLE1_DEPTHS
    rules: list = field(default_factory=list)
    protocol: dict = field(default_factory=dict)
    config_path: Optional[Path] = None


# ---------------------------------------------------------------------------
# argument parsing


def _threshold(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not 0.0 < value < 1.0:
        raise argparse.ArgumentTypeError(f"threshold must lie in (0, 1), got {text}")
    return value


def _depths(text: str) -> tuple:
    out = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        try:
            d = float(part)
        except ValueError:
            raise argparse.ArgumentTypeError(f"not a number: {part!r}") from None
        if not 0.0 <= d < 1.0:
            raise argparse.ArgumentTypeError(f"depth must lie in [0, 1), got {part}")
        out.append(d)
    return tuple(out)


def _add_shared(p: argparse.ArgumentParser, series=True):
    if series:
        p.add_argument("--portfolio", type=Path, help="portfolio returns CSV (date,return)")
        p.add_argument("--benchmark", type=Path, help="benchmark returns CSV (date,return)")
        p.add_argument("--frequency", choices=[f.value for f in Frequency], help="declared return frequency")
        p.add_argument("--threshold", type=_threshold, help="benchmark drawdown threshold in (0, 1)")
        p.add_argument("--allow-inner-join", action="store_true", default=None,
                       help="align on the intersection of dates instead of requiring equal date sets")
        p.add_argument("--extended-underwater", action="store_true", default=None,
                       help="headline the extended portfolio underwater count")
    p.add_argument("--format", choices=FORMATS, help="output format (default json)")
    p.add_argument("--out", type=Path, help="write to this path instead of stdout (a directory for csv)")
    p.add_argument("--config", type=Path, help="config file (falls back to $PATHLENS_CONFIG)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pathlens", description="Path-dependent drawdown, recovery and capture diagnostics.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="subcommand", metavar="SUBCOMMAND")
    sub.required = True

    p = sub.add_parser("analyze", help="full recovery-efficiency report for a portfolio against a benchmark")
    _add_shared(p)
    p.add_argument("--benchmark-label")
    p.add_argument("--strategy-label")
    p.add_argument("--fee-treatment")
    p.add_argument("--data-source")
    p.add_argument("--liquidity-assumptions")
    p.add_argument("--recovery-constraint")
    p.add_argument("--episode-basis", choices=[b.value for b in EpisodeBasis])
    p.add_argument("--rule", action="append", default=None, metavar="SPEC",
                   help="also compare a design rule against the benchmark (repeatable)")

    p = sub.add_parser("table-r", help="drawdown depth versus required recovery return")
    _add_shared(p, series=False)
    p.add_argument("--depths", type=_depths, help="comma-separated drawdown depths in [0, 1)")

    p = sub.add_parser("episodes", help="submergence episodes of one series, or benchmark-defined profiles of a pair")
    _add_shared(p)

    p = sub.add_parser("capture", help="conditional upside/downside capture")
    _add_shared(p)

    p = sub.add_parser("compare", help="compare exposure rules applied to the benchmark")
    _add_shared(p)
    p.add_argument("--rule", action="append", default=None, metavar="SPEC",
                   help="constant:W or voltarget:TARGET[,LOOKBACK[,CAP]], optionally LABEL=SPEC (repeatable)")
    return parser


def _parse_rule_arg(text: str, voltarget_defaults: dict) -> tuple:
    label, eq, spec = text.partition("=")
    if not eq:
        label, spec = text, text
    rule = parse_rule(spec)
    if rule.kind == "vol_target":
        given = len([v for v in spec.partition(":")[2].split(",") if v.strip()])
        try:
            if given < 1 and "target_vol" in voltarget_defaults:
                rule = replace(rule, target_vol=float(voltarget_defaults["target_vol"]))
            if given < 2 and "lookback" in voltarget_defaults:
                rule = replace(rule, lookback=int(voltarget_defaults["lookback"]))
            if given < 3 and "cap" in voltarget_defaults:
                rule = replace(rule, cap=float(voltarget_defaults["cap"]))
        except ValueError as exc:
            raise DomainError(f"config voltarget section: {exc}") from None
    return label.strip(), rule


def resolve_config(args: argparse.Namespace, cfg: Config) -> CliConfig:
    """Merge flags over config-file values over defaults."""
    sc = args.subcommand

    def pick(name, convert=str, default=None):
        value = getattr(args, name, None)
        if value is not None:
            return value
        raw = cfg.option(sc, name)
        if raw is None:
            return default
        try:
            return convert(raw)
        except (ValueError, argparse.ArgumentTypeError) as exc:
            raise UsageError(f"config value {sc}.{name} = {raw!r}: {exc}") from None

    def flag(name):
        value = getattr(args, name, None)
        if value is not None:
            return bool(value)
        raw = cfg.option(sc, name)
        return raw is not None and raw.strip().lower() in ("1", "true", "yes", "on")

    try:
        freq = Frequency.parse(pick("frequency", default="monthly"))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    ppy = cfg.get("periods_per_year", freq.value)
    try:
        ppy = int(ppy) if ppy is not None else None
        epsilon = float(cfg.get("capture", "epsilon", DEFAULT_EPSILON))
    except ValueError as exc:
        raise UsageError(f"config: {exc}") from None
    if ppy is not None and ppy <= 0:
        raise UsageError("config: periods_per_year must be positive")
    if not epsilon > 0:
        raise UsageError("config: capture.epsilon must be positive")

    out = CliConfig(
        subcommand=sc,
        portfolio=pick("portfolio", Path),
        benchmark=pick("benchmark", Path),
        frequency=freq,
        threshold=pick("threshold", _threshold, DEFAULT_THRESHOLD),
        fmt=pick("format", default="json"),
        out=pick("out", Path),
        strict=not flag("allow_inner_join"),
        extended_underwater=flag("extended_underwater"),
        epsilon=epsilon,
        periods_per_year=ppy,
        depths=pick("depths", _depths, TABLE1_DEPTHS),
        config_path=cfg.path,
    )
    if out.fmt not in FORMATS:
        raise UsageError(f"unknown format {out.fmt!r}")

    protocol = cfg.section("protocol")
    for key in ("benchmark_label", "strategy_label", "fee_treatment", "data_source",
                "liquidity_assumptions", "recovery_constraint", "episode_basis"):
        value = getattr(args, key, None)
        if value is not None:
            protocol[key] = value
    out.protocol = protocol

    vt = cfg.section("voltarget")
    specs = getattr(args, "rule", None)
    try:
        if specs:
            out.rules = [_parse_rule_arg(s, vt) for s in specs]
        else:
            out.rules = [_parse_rule_arg(f"{label}={spec}", vt) for label, spec in cfg.section("rule").items()]
    except DomainError as exc:
        raise UsageError(str(exc)) from None
    return out


# ---------------------------------------------------------------------------
# subcommands


def _require(conf: CliConfig, *names):
    missing = [n for n in names if getattr(conf, n) is None]
    if missing:
        raise UsageError(f"{conf.subcommand} requires " + ", ".join(f"--{m}" for m in missing))


def _load(conf: CliConfig, path: Path, label=None):
    return load_csv(path, conf.frequency, label=label, periods_per_year=conf.periods_per_year)


def _pair(conf: CliConfig):
    _require(conf, "portfolio", "benchmark")
    p = _load(conf, conf.portfolio, conf.protocol.get("strategy_label"))
    b = _load(conf, conf.benchmark, conf.protocol.get("benchmark_label"))
    return align(p, b, strict=conf.strict)


def _emit(conf: CliConfig, text: str, csv_files: Optional[dict] = None, stdout=None):
    if conf.out is None:
        (stdout or sys.stdout).write(text)
        return
    if conf.fmt == "csv" and csv_files is not None:
        conf.out.mkdir(parents=True, exist_ok=True)
        for name, body in csv_files.items():
            (conf.out / name).write_text(body, encoding="utf-8")
        return
    conf.out.write_text(text, encoding="utf-8")


def _swap_underwater(profiles) -> None:
    """Present the extended underwater count as the headline figure (markdown only)."""
    for p in profiles or []:
        p["underwater"], p["underwater_extended"] = p["underwater_extended"], p["underwater"]


def cmd_analyze(conf: CliConfig, stdout=None) -> int:
    pair = _pair(conf)
    prot = conf.protocol
    try:
        inputs = ProtocolInputs(
            benchmark_label=prot.get("benchmark_label") or pair.benchmark.label or "benchmark",
            strategy_label=prot.get("strategy_label") or pair.portfolio.label or "portfolio",
            frequency=conf.frequency,
            fee_treatment=prot.get("fee_treatment", "not declared"),
            data_source=prot.get("data_source", "not declared"),
            liquidity_assumptions=prot.get("liquidity_assumptions", "not declared"),
            drawdown_threshold=conf.threshold,
            episode_basis=prot.get("episode_basis", "both"),
            recovery_constraint=prot.get("recovery_constraint", "not declared"),
            capture_epsilon=conf.epsilon,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    comparisons = compare_designs(pair.benchmark, conf.rules, conf.threshold, conf.epsilon) if conf.rules else None
    report = build_report(pair, inputs, comparisons=comparisons)
    doc = report.to_dict()
    if conf.extended_underwater and conf.fmt == "markdown":
        _swap_underwater(doc["benchmark_episodes"])
    files = report_csv_sections(doc) if conf.fmt == "csv" else None
    _emit(conf, render(doc, conf.fmt), files, stdout)
    return EXIT_OK


def cmd_table_r(conf: CliConfig, stdout=None) -> int:
    rows = recovery_table(conf.depths)
    _emit(conf, render_recovery_table(rows, conf.fmt), None, stdout)
    return EXIT_OK


def cmd_episodes(conf: CliConfig, stdout=None) -> int:
    if conf.portfolio is not None and conf.benchmark is not None:
        pair = _pair(conf)
        doc = {
            "report_version": REPORT_VERSION,
            "threshold": conf.threshold,
            "profiles": [profile_to_dict(p) for p in recovery_profiles(pair, conf.threshold, conf.epsilon)],
        }
        if conf.extended_underwater and conf.fmt == "markdown":
            _swap_underwater(doc["profiles"])
    else:
        path = conf.benchmark if conf.benchmark is not None else conf.portfolio
        if path is None:
            raise UsageError("episodes requires --benchmark and/or --portfolio")
        series = _load(conf, path)
        doc = {
            "report_version": REPORT_VERSION,
            "series": series.label,
            "threshold": conf.threshold,
            "episodes": [episode_to_dict(e) for e in segment_episodes(wealth_path(series), conf.threshold)],
        }
    _emit(conf, render_episodes(doc, conf.fmt), None, stdout)
    return EXIT_OK


def cmd_capture(conf: CliConfig, stdout=None) -> int:
    pair = _pair(conf)
    doc = {"report_version": REPORT_VERSION, "capture": capture_to_dict(capture_stats(pair, conf.epsilon))}
    _emit(conf, render_capture(doc, conf.fmt), None, stdout)
    return EXIT_OK


def cmd_compare(conf: CliConfig, stdout=None) -> int:
    _require(conf, "benchmark")
    if not conf.rules:
        raise UsageError("compare requires at least one --rule")
    bench = _load(conf, conf.benchmark)
    rows = [design_row_to_dict(r) for r in compare_designs(bench, conf.rules, conf.threshold, conf.epsilon)]
    doc = {
        "report_version": REPORT_VERSION,
        "benchmark": bench.label,
        "threshold": conf.threshold,
        "comparisons": rows,
    }
    if conf.fmt == "json":
        text = dump_json(doc)
    elif conf.fmt == "csv":
        text = csv_table([{k: v for k, v in r.items() if k != "episodes"} | {"episode_count": len(r["episodes"])} for r in rows])
    else:
        text = comparisons_markdown(rows)
    _emit(conf, text, None, stdout)
    return EXIT_OK


COMMANDS = {
    "analyze": cmd_analyze,
    "table-r": cmd_table_r,
    "episodes": cmd_episodes,
    "capture": cmd_capture,
    "compare": cmd_compare,
}


def main(argv=None, stdout=None, stderr=None) -> int:
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = load_config(args.config)
    except FileNotFoundError as exc:
        print(f"pathlens: config file not found: {exc.filename}", file=stderr)
        return EXIT_USAGE
    except ConfigError as exc:
        print(f"pathlens: {exc}", file=stderr)
        return EXIT_USAGE
    try:
        conf = resolve_config(args, cfg)
        return COMMANDS[args.subcommand](conf, stdout)
    except UsageError as exc:
        print(f"pathlens {args.subcommand}: error: {exc}", file=stderr)
        return EXIT_USAGE
    except FileNotFoundError as exc:
        print(f"pathlens: no such file: {exc.filename}", file=stderr)
        return EXIT_INPUT
    except PathlensError as exc:
        print(f"pathlens: {type(exc).__name__}: {exc}", file=stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"pathlens: {exc}", file=stderr)
        return EXIT_INPUT


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
