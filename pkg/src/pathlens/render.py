"""
Text renderings of reports and tables: json, csv and markdown.

JSON keeps raw doubles and a fixed key order. Human formats show
percentages with one decimal place.
"""

from __future__ import annotations

import csv
import io
import json
from importlib import resources
from typing import Optional

FORMATS = ("json", "csv", "markdown")


def dump_json(doc) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False, allow_nan=False) + "\n"


def parse_json(text: str):
    return json.loads(text)


def load_schema() -> dict:
    return json.loads(resources.files("pathlens").joinpath("report.schema.json").read_text("utf-8"))


def validate_report(doc) -> None:
    """Raise ``jsonschema.ValidationError`` if ``doc`` does not match the shipped schema."""
    import jsonschema

    jsonschema.validate(doc, load_schema(), cls=jsonschema.Draft202012Validator)


# ---------------------------------------------------------------------------
# formatting helpers


def pct(x, digits: int = 1) -> str:
    if x is None:
        return "n/a"
    return f"{x * 100:.{digits}f}%"


def num(x, digits: int = 4) -> str:
    if x is None:
        return "n/a"
    if isinstance(x, bool):
        return "yes" if x else "no"
    if isinstance(x, int):
        return str(x)
    return f"{x:.{digits}f}"


def _cell(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return repr(x)
    return str(x)


def flatten(d: dict, prefix: str = "") -> dict:
    out = {}
    for k, v in d.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            out.update(flatten(v, key + "."))
        elif isinstance(v, list):
            out[key] = json.dumps(v, allow_nan=False)
        else:
            out[key] = v
    return out


def csv_table(rows: list, columns: Optional[list] = None) -> str:
    flat = [flatten(r) for r in rows]
    if columns is None:
        columns = []
        for r in flat:
            for k in r:
                if k not in columns:
                    columns.append(k)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for r in flat:
        writer.writerow([_cell(r.get(c)) for c in columns])
    return buf.getvalue()


def md_table(header: list, rows: list, align: Optional[str] = None) -> str:
    align = align or "l" + "r" * (len(header) - 1)
    marks = {"l": ":---", "r": "---:", "c": ":---:"}
    lines = [
        "| " + " | ".join(header) + " |",
        "| " + " | ".join(marks[a] for a in align) + " |",
    ]
    for row in rows:
        lines.append("| " + " | ".join(str(c) for c in row) + " |")
    return "\n".join(lines) + "\n"


def _why(d: dict, key: str, fmt=pct) -> str:
    v = d.get(key)
    if v is None:
        return f"n/a ({d.get(key + '_reason', 'undefined')})"
    return fmt(v)


# ---------------------------------------------------------------------------
# recovery table


def recovery_table_rows(rows) -> list:
    return [{"depth": r.depth, "value_after": r.value_after, "required_recovery": r.required} for r in rows]


def render_recovery_table(rows, fmt: str = "markdown") -> str:
    data = recovery_table_rows(rows)
    if fmt == "json":
        return dump_json({"recovery_table": data})
    if fmt == "csv":
        return csv_table(data, ["depth", "value_after", "required_recovery"])
    body = [[pct(r["depth"]), f"{r['value_after']:.2f}", pct(r["required_recovery"])] for r in data]
    return md_table(
        ["Drawdown depth D", "Portfolio value after drawdown", "Required recovery return R(D)"],
        body,
        "rrr",
    )


# ---------------------------------------------------------------------------
# episodes and capture documents


def render_episodes(doc: dict, fmt: str = "markdown") -> str:
    """``doc`` holds ``episodes`` (plain episodes) or ``profiles`` (benchmark-defined)."""
    if fmt == "json":
        return dump_json(doc)
    if "profiles" in doc:
        if fmt == "csv":
            return csv_table(doc["profiles"])
        return _md_profiles(doc["profiles"])
    if fmt == "csv":
        return csv_table(doc["episodes"], _EPISODE_COLUMNS)
    return _md_episodes(doc["episodes"])


def render_capture(doc: dict, fmt: str = "markdown") -> str:
    if fmt == "json":
        return dump_json(doc)
    cap = doc["capture"]
    if fmt == "csv":
        return csv_table([cap])
    return _md_capture(cap)


_EPISODE_COLUMNS = [
    "peak_index",
    "trough_index",
    "recovery_index",
    "recovery_index_reason",
    "peak_date",
    "peak_date_reason",
    "trough_date",
    "recovery_date",
    "recovery_date_reason",
    "depth",
    "underwater_periods",
    "truncated",
]


def _date_or(d: dict, key: str, default: str) -> str:
    v = d.get(key)
    return v if v is not None else default


def _md_episodes(episodes: list) -> str:
    if not episodes:
        return "_No episodes at or beyond the threshold._\n"
    rows = []
    for k, e in enumerate(episodes, start=1):
        rows.append([
            k,
            _date_or(e, "peak_date", "inception"),
            e["trough_date"],
            _date_or(e, "recovery_date", "unresolved"),
            pct(e["depth"]),
            e["underwater_periods"],
            "yes" if e["truncated"] else "no",
        ])
    return md_table(["#", "Peak", "Trough", "Recovery", "Depth", "Periods underwater", "Truncated"], rows)


def _md_profiles(profiles: list) -> str:
    if not profiles:
        return "_No benchmark episodes at or beyond the threshold._\n"
    rows = []
    for p in profiles:
        e = p["episode"]
        rows.append([
            p["episode_id"],
            _date_or(e, "peak_date", "inception"),
            e["trough_date"],
            _date_or(e, "recovery_date", "unresolved"),
            pct(p["d_benchmark"]),
            pct(p["d_portfolio"]),
            _why(p, "br"),
            p["underwater"],
            p["underwater_extended"] if not p["underwater_extended_truncated"] else f"{p['underwater_extended']}+",
            _why(p, "uc_recovery"),
            "provisional" if p["provisional"] else "",
        ])
    return md_table(
        [
            "#",
            "Benchmark peak",
            "Trough",
            "Recovery",
            "Benchmark DD",
            "Portfolio DD (window)",
            "Burden reduction",
            "Portfolio underwater",
            "Underwater (extended)",
            "Recovery upside capture",
            "Status",
        ],
        rows,
        "rlllrrrrrrl",
    )


def _md_capture(c: dict) -> str:
    rows = [
        ["Observations (up / down / zero)", f"{c['n_plus']} / {c['n_minus']} / {c['n_zero']}", ""],
        ["Geometric capture", _why(c, "uc_geometric"), _why(c, "dc_geometric")],
        ["Arithmetic capture", _why(c, "uc_arithmetic"), _why(c, "dc_arithmetic")],
        ["Growth-factor ratio", _why(c, "growth_factor_up", num), _why(c, "growth_factor_down", num)],
        ["Portfolio conditional return", _why(c, "portfolio_cond_up", lambda x: pct(x, 2)),
         _why(c, "portfolio_cond_down", lambda x: pct(x, 2))],
        ["Benchmark conditional return", _why(c, "benchmark_cond_up", lambda x: pct(x, 2)),
         _why(c, "benchmark_cond_down", lambda x: pct(x, 2))],
    ]
    out = md_table(["Capture", "Up", "Down"], rows)
    out += f"\nCapture asymmetry (geometric): {_why(c, 'asymmetry')}; "
    out += f"arithmetic: {_why(c, 'asymmetry_arithmetic')}. "
    out += f"Ratios withheld when the benchmark conditional return is below {c['epsilon']:g} in magnitude.\n"
    return out


# ---------------------------------------------------------------------------
# full report


def _summary_rows(p: dict, b: dict) -> list:
    spec = [
        ("Annualized return", "annualized_return", pct),
        ("Annualized volatility", "annualized_volatility", pct),
        ("Maximum drawdown", "max_drawdown", pct),
        ("Longest time underwater (periods)", "longest_underwater", num),
        ("Arithmetic mean (per period)", "arithmetic_mean", lambda x: pct(x, 2)),
        ("Geometric return (per period)", "geometric_return", lambda x: pct(x, 2)),
        ("Drag approximation mu - sigma^2/2", "drag_approx", lambda x: pct(x, 2)),
        ("Mean log growth", "mean_log_growth", lambda x: pct(x, 2)),
        ("Skewness", "skewness", lambda x: num(x, 3)),
    ]
    return [[label, _why(p, key, f), _why(b, key, f)] for label, key, f in spec]


def _md_costs(costs: dict) -> str:
    if costs["status"] == "declared_unavailable":
        return "Design costs: declared unavailable (not supplied with the inputs).\n"
    return md_table(
        ["Cost", "Value"],
        [
            ["Turnover (per year)", num(costs["turnover"], 3)],
            ["Tracking error (annualized)", pct(costs["tracking_error"])],
            ["Mean exposure", num(costs["mean_exposure"], 3)],
        ],
    )


def comparisons_markdown(rows: list) -> str:
    body = []
    for r in rows:
        s, c, k = r["summary"], r["capture"], r["costs"]
        brs = [p["br"] for p in r["episodes"] if p["br"] is not None]
        body.append([
            r["label"],
            _describe_rule(r["rule"]),
            _why(s, "annualized_return"),
            _why(s, "annualized_volatility"),
            _why(s, "max_drawdown"),
            s["longest_underwater"],
            _why(c, "uc_geometric"),
            _why(c, "dc_geometric"),
            _why(c, "asymmetry"),
            pct(sum(brs) / len(brs)) if brs else "n/a",
            num(k["turnover"], 2),
            pct(k["tracking_error"]),
        ])
    return md_table(
        ["Design", "Rule", "Ann. return", "Ann. vol", "Max DD", "Longest underwater",
         "Up capture", "Down capture", "Asymmetry", "Mean burden reduction", "Turnover/yr", "Tracking error"],
        body,
        "llrrrrrrrrrr",
    )


def _describe_rule(rule: dict) -> str:
    if rule["kind"] == "constant":
        return f"constant {rule['weight']:g}"
    return f"vol target {pct(rule['target_vol'])}, lookback {rule['lookback']}, cap {rule['cap']:g}"


def report_markdown(doc: dict) -> str:
    inp = doc["inputs"]
    fp = doc["full_period"]
    parts = [f"# Recovery-efficiency report: {inp['strategy_label']} vs {inp['benchmark_label']}\n"]

    parts.append("## 1. Inputs\n")
    al = inp["alignment"]
    parts.append(md_table(["Input", "Value"], [
        ["Benchmark", inp["benchmark_label"]],
        ["Strategy", inp["strategy_label"]],
        ["Frequency", f"{inp['frequency']} ({inp['periods_per_year']} periods/year)"],
        ["Sample", f"{inp['sample_start']} to {inp['sample_end']} ({inp['observations']} observations)"],
        ["Fee treatment", inp["fee_treatment"]],
        ["Data source", inp["data_source"]],
        ["Liquidity assumptions", inp["liquidity_assumptions"]],
        ["Drawdown threshold", pct(inp["drawdown_threshold"])],
        ["Episode basis", inp["episode_basis"]],
        ["Alignment", f"{al['mode']} (dropped {al['dropped_portfolio']} portfolio, {al['dropped_benchmark']} benchmark rows)"],
        ["Capture guard epsilon", f"{inp['capture_epsilon']:g}"],
    ], "ll"))

    parts.append("\n## 2. Full-period profile\n")
    h = fp["headline"]
    parts.append(md_table(["Metric", "Portfolio"], [
        ["Annualized return", _why(h, "annualized_return")],
        ["Annualized volatility", _why(h, "annualized_volatility")],
        ["Maximum drawdown", _why(h, "max_drawdown")],
        ["Longest time underwater (periods)", _why(h, "longest_underwater", num)],
        ["Upside capture", _why(h, "upside_capture")],
        ["Downside capture", _why(h, "downside_capture")],
        ["Capture asymmetry", _why(h, "capture_asymmetry")],
    ]))
    parts.append("\n" + md_table(["Statistic", "Portfolio", "Benchmark"], _summary_rows(fp["portfolio"], fp["benchmark"])))
    parts.append("\n" + _md_capture(fp["capture"]))
    parts.append(f"\nAuxiliary: coskewness of portfolio with benchmark = {_why(fp['auxiliary'], 'coskewness', lambda x: num(x, 3))}.\n")

    parts.append("\n## 3. Benchmark drawdown episodes\n")
    if doc["benchmark_episodes"] is None:
        parts.append(f"_Not computed ({doc['benchmark_episodes_reason']})._\n")
    else:
        parts.append(_md_profiles(doc["benchmark_episodes"]))

    parts.append("\n## 4. Portfolio submergence episodes\n")
    if doc["own_episodes"] is None:
        parts.append(f"_Not computed ({doc['own_episodes_reason']})._\n")
    else:
        parts.append(_md_episodes(doc["own_episodes"]))

    parts.append("\n## 5. Cost of the design\n")
    parts.append(_md_costs(doc["costs"]))

    parts.append("\n## 6. Recovery constraint and design comparison\n")
    parts.append(f"Recovery constraint: {inp['recovery_constraint']}\n\n")
    if doc["comparisons"] is None:
        parts.append(f"_No design comparison ({doc['comparisons_reason']})._\n")
    else:
        parts.append(comparisons_markdown(doc["comparisons"]))
    return "".join(parts)


def report_csv_sections(doc: dict) -> dict:
    """Map of file name to csv text, one file per populated section plus ``manifest.csv``."""
    inp = dict(doc["inputs"])
    al = inp.pop("alignment")
    inp.update({f"alignment.{k}": v for k, v in al.items()})
    sections = {
        "inputs": csv_table([{"key": k, "value": v} for k, v in inp.items()], ["key", "value"]),
    }
    fp = doc["full_period"]
    stats = []
    for key in fp["portfolio"]:
        stats.append({"statistic": key, "portfolio": fp["portfolio"][key], "benchmark": fp["benchmark"].get(key)})
    sections["full_period"] = csv_table(stats, ["statistic", "portfolio", "benchmark"])
    sections["headline"] = csv_table(
        [{"metric": k, "value": v} for k, v in fp["headline"].items()], ["metric", "value"]
    )
    sections["capture"] = csv_table(
        [{"metric": k, "value": v} for k, v in fp["capture"].items()], ["metric", "value"]
    )
    if doc["benchmark_episodes"] is not None:
        sections["benchmark_episodes"] = csv_table(doc["benchmark_episodes"])
    if doc["own_episodes"] is not None:
        sections["own_episodes"] = csv_table(doc["own_episodes"], _EPISODE_COLUMNS)
    sections["costs"] = csv_table([doc["costs"]])
    if doc["comparisons"] is not None:
        rows = []
        for r in doc["comparisons"]:
            row = {k: v for k, v in r.items() if k != "episodes"}
            row["episode_count"] = len(r["episodes"])
            rows.append(row)
        sections["comparisons"] = csv_table(rows)

    files = {f"{name}.csv": text for name, text in sections.items()}
    manifest = csv_table(
        [{"section": name, "file": f"{name}.csv", "rows": text.count("\n") - 1} for name, text in sections.items()],
        ["section", "file", "rows"],
    )
    return {"manifest.csv": manifest, **files}


def bundle_csv(files: dict) -> str:
    """Concatenate csv files into one stream, each preceded by a ``# file:`` line."""
    return "".join(f"# file: {name}\n{text}\n" for name, text in files.items())


def render(report, fmt: str = "json") -> str:
    """Render a ``ProtocolReport`` (or its dict form) as json, csv or markdown text."""
    doc = report if isinstance(report, dict) else report.to_dict()
    if fmt == "json":
        return dump_json(doc)
    if fmt == "csv":
        return bundle_csv(report_csv_sections(doc))
    if fmt == "markdown":
        return report_markdown(doc)
    raise ValueError(f"unknown format {fmt!r} (expected one of {', '.join(FORMATS)})")
