#!/usr/bin/env python3
"""Five-period worked pair: one benchmark episode traced through every diagnostic."""

from datetime import date

from pathlens import ProtocolInputs, ReturnSeries, align, build_report, render

BENCHMARK = [0.10, -0.20, 0.05, 0.10, 0.12]
PORTFOLIO = [0.08, -0.10, 0.04, 0.08, 0.09]
DATES = [date(2024, m, 28) for m in range(1, 6)]


def main():
    pair = align(
        ReturnSeries(DATES, PORTFOLIO, "monthly", "defensive"),
        ReturnSeries(DATES, BENCHMARK, "monthly", "market"),
    )
    report = build_report(pair, ProtocolInputs("market", "defensive", drawdown_threshold=0.10))
    (prof,) = report.benchmark_episodes
    print(f"benchmark depth  D^B = {prof.d_benchmark:.4f}  R = {prof.r_benchmark:.4f}")
    print(f"portfolio depth  D^P = {prof.d_portfolio:.4f}  R = {prof.r_portfolio:.4f}")
    print(f"burden reduction BR  = {prof.br:.4f}")
    print(f"underwater periods   = {prof.underwater} (extended {prof.underwater_extended})")
    print(f"recovery-leg upside capture = {prof.uc_recovery:.4f}")
    print()
    print(render(report, "markdown"), end="")


if __name__ == "__main__":
    main()
