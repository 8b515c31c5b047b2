"""
Dated return series: ingestion, validation and calendar alignment.

Returns are simple periodic returns stored as float64. Frequency is always
declared by the caller; it is never inferred from the spacing of dates.
"""

from __future__ import annotations

import csv
import enum
import math
from dataclasses import dataclass, field
from datetime import date
from pathlib import Path
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import AlignmentError, FrequencyMismatch, ParseError, ValidationError


class Frequency(str, enum.Enum):
    DAILY = "daily"
    WEEKLY = "weekly"
    MONTHLY = "monthly"
    QUARTERLY = "quarterly"

    @property
    def periods_per_year(self) -> int:
        return PERIODS_PER_YEAR[self]

    @classmethod
    def parse(cls, value) -> "Frequency":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).strip().lower())
        except ValueError:
            choices = ", ".join(f.value for f in cls)
            raise ValueError(f"unknown frequency {value!r} (expected one of: {choices})") from None


PERIODS_PER_YEAR = {
    Frequency.DAILY: 252,
    Frequency.WEEKLY: 52,
    Frequency.MONTHLY: 12,
    Frequency.QUARTERLY: 4,
}


def _frozen_array(values) -> np.ndarray:
    arr = np.array(values, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class ReturnSeries:
    """Ordered, validated sequence of (date, simple return) observations.

    Construction validates: non-empty, strictly increasing dates, every
    return finite and greater than -1.
    """

    dates: tuple
    returns: np.ndarray
    frequency: Frequency = Frequency.MONTHLY
    label: str = ""
    periods_per_year: Optional[int] = None

    def __post_init__(self):
        dates = tuple(self.dates)
        rets = _frozen_array(self.returns)
        freq = Frequency.parse(self.frequency)
        object.__setattr__(self, "dates", dates)
        object.__setattr__(self, "returns", rets)
        object.__setattr__(self, "frequency", freq)
        if self.periods_per_year is None:
            object.__setattr__(self, "periods_per_year", freq.periods_per_year)
        elif int(self.periods_per_year) <= 0:
            raise ValidationError("periods_per_year must be a positive integer")
        else:
            object.__setattr__(self, "periods_per_year", int(self.periods_per_year))

        if rets.ndim != 1:
            raise ValidationError("returns must be one-dimensional")
        if len(dates) == 0:
            raise ValidationError("series is empty")
        if len(dates) != len(rets):
            raise ValidationError(f"{len(dates)} dates but {len(rets)} returns")
        for i in range(1, len(dates)):
            if dates[i] == dates[i - 1]:
                raise ValidationError(f"duplicate date {dates[i].isoformat()}")
            if dates[i] < dates[i - 1]:
                raise ValidationError(f"dates not increasing at {dates[i].isoformat()}")
        if not np.all(np.isfinite(rets)):
            raise ValidationError("returns must be finite")
        bad = np.flatnonzero(rets <= -1.0)
        if bad.size:
            i = int(bad[0])
            raise ValidationError(
                f"return {rets[i]!r} on {dates[i].isoformat()} is <= -1 (wealth must stay positive)"
            )

    @classmethod
    def from_pairs(cls, pairs: Iterable, frequency="monthly", label="", periods_per_year=None):
        """Build from (date, return) pairs in any order; sorts by date."""
        pairs = sorted(pairs, key=lambda p: p[0])
        return cls(
            dates=tuple(p[0] for p in pairs),
            returns=[p[1] for p in pairs],
            frequency=frequency,
            label=label,
            periods_per_year=periods_per_year,
        )

    @property
    def observations(self) -> list:
        return list(zip(self.dates, self.returns.tolist()))

    def __len__(self) -> int:
        return len(self.dates)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ReturnSeries):
            return NotImplemented
        return (
            self.dates == other.dates
            and np.array_equal(self.returns, other.returns)
            and self.frequency == other.frequency
            and self.label == other.label
            and self.periods_per_year == other.periods_per_year
        )

    __hash__ = None

    def with_returns(self, returns, label=None) -> "ReturnSeries":
        """Same calendar and frequency, new return values."""
        return ReturnSeries(
            self.dates,
            returns,
            self.frequency,
            self.label if label is None else label,
            self.periods_per_year,
        )

    def head(self, n: int) -> "ReturnSeries":
        return ReturnSeries(
            self.dates[:n], self.returns[:n], self.frequency, self.label, self.periods_per_year
        )


def _parse_date(text: str, lineno: int, path) -> date:
    try:
        return date.fromisoformat(text.strip())
    except ValueError:
        raise ParseError(f"invalid ISO-8601 date {text!r}", line=lineno, path=path) from None


def _parse_return(text: str, lineno: int, path) -> float:
    s = text.strip()
    try:
        value = float(s)
    except ValueError:
        raise ParseError(f"invalid return {text!r}", line=lineno, path=path) from None
    if not math.isfinite(value):
        raise ParseError(f"non-finite return {text!r}", line=lineno, path=path)
    return value


def load_csv(path, frequency="monthly", label=None, periods_per_year=None) -> ReturnSeries:
    """Load a ``date,return`` CSV into a validated series.

    Rows may appear in any date order; the result is sorted. Raises
    ``ParseError`` (with the 1-based file line number) for malformed rows and
    ``ValidationError`` for duplicate dates, returns <= -1 or an empty file.
    """
    path = Path(path)
    freq = Frequency.parse(frequency)
    with path.open("r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise ValidationError(f"{path}: file is empty")
        if [h.strip().lower() for h in header] != ["date", "return"]:
            raise ParseError(f"expected header 'date,return', got {','.join(header)!r}", line=1, path=path)
        pairs = []
        seen = {}
        for row in reader:
            lineno = reader.line_num
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != 2:
                raise ParseError(f"expected 2 fields, got {len(row)}", line=lineno, path=path)
            d = _parse_date(row[0], lineno, path)
            r = _parse_return(row[1], lineno, path)
            if d in seen:
                raise ValidationError(
                    f"{path}:{lineno}: duplicate date {d.isoformat()} (first seen on line {seen[d]})"
                )
            if r <= -1.0:
                raise ValidationError(f"{path}:{lineno}: return {row[1].strip()} is <= -1")
            seen[d] = lineno
            pairs.append((d, r))
    if not pairs:
        raise ValidationError(f"{path}: no observations")
    return ReturnSeries.from_pairs(
        pairs, frequency=freq, label=path.stem if label is None else label, periods_per_year=periods_per_year
    )


def write_csv(series: ReturnSeries, path) -> None:
    """Write a series in the ``date,return`` format read by ``load_csv``.

    ``repr`` of a float is the shortest string that parses back to the same
    double, so write-then-load is bit-exact.
    """
    with Path(path).open("w", encoding="utf-8", newline="") as fh:
        fh.write("date,return\n")
        for d, r in zip(series.dates, series.returns.tolist()):
            fh.write(f"{d.isoformat()},{r!r}\n")


@dataclass(frozen=True, eq=False)
class AlignedPair:
    """Portfolio and benchmark legs on one shared calendar."""

    portfolio: ReturnSeries
    benchmark: ReturnSeries
    dropped: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.portfolio.dates != self.benchmark.dates:
            raise AlignmentError("legs of an AlignedPair must share identical dates")
        if self.portfolio.frequency != self.benchmark.frequency:
            raise FrequencyMismatch("legs of an AlignedPair must share a frequency")

    @property
    def dates(self) -> tuple:
        return self.portfolio.dates

    @property
    def frequency(self) -> Frequency:
        return self.portfolio.frequency

    @property
    def periods_per_year(self) -> int:
        return self.portfolio.periods_per_year

    def __len__(self) -> int:
        return len(self.portfolio)


def _subset(series: ReturnSeries, keep: Sequence) -> ReturnSeries:
    index = {d: i for i, d in enumerate(series.dates)}
    idx = [index[d] for d in keep]
    return ReturnSeries(
        tuple(keep), series.returns[idx], series.frequency, series.label, series.periods_per_year
    )


def align(portfolio: ReturnSeries, benchmark: ReturnSeries, strict: bool = True) -> AlignedPair:
    """Put two series on a common calendar.

    In strict mode (the default) the date sets must be identical. With
    ``strict=False`` the pair covers the intersection of the dates and the
    number of rows dropped from each leg is recorded on the result.
    """
    if portfolio.frequency != benchmark.frequency:
        raise FrequencyMismatch(
            f"portfolio is {portfolio.frequency.value}, benchmark is {benchmark.frequency.value}"
        )
    if portfolio.dates == benchmark.dates:
        return AlignedPair(portfolio, benchmark)
    pset, bset = set(portfolio.dates), set(benchmark.dates)
    common = sorted(pset & bset)
    if not common:
        raise AlignmentError("portfolio and benchmark share no dates")
    if strict:
        only_p = sorted(pset - bset)
        only_b = sorted(bset - pset)
        detail = []
        if only_p:
            detail.append(f"{len(only_p)} portfolio-only (first {only_p[0].isoformat()})")
        if only_b:
            detail.append(f"{len(only_b)} benchmark-only (first {only_b[0].isoformat()})")
        raise AlignmentError(
            "date sets differ: " + "; ".join(detail) + " (use inner-join alignment to intersect)"
        )
    dropped = {
        "portfolio": len(portfolio) - len(common),
        "benchmark": len(benchmark) - len(common),
    }
    return AlignedPair(_subset(portfolio, common), _subset(benchmark, common), dropped)
