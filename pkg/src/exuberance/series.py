"""Loading, validating and slicing valuation-ratio series."""
from __future__ import annotations

import csv
import datetime as dt
import io
import math
import os
import tempfile
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import (
    EmptyInput,
    EmptyRange,
    InputError,
    InputFileError,
    IrregularDates,
    MalformedRow,
    MissingColumn,
    MissingValue,
    NonMonotonicDates,
)

DAILY = "daily"
MONTHLY = "monthly"
FREQUENCIES = (DAILY, MONTHLY)

ISO_DATE = "%Y-%m-%d"
ISO_MONTH = "%Y-%m"


@dataclass(frozen=True)
class ColumnSchema:
    """How to read a delimited file.

    ``date_format=None`` accepts ``YYYY-MM-DD`` or ``YYYY-MM``, decided by the
    first data row and then enforced for the rest of the file.
    """

    date_column: str = "date"
    value_column: str = "value"
    date_format: Optional[str] = None
    delimiter: str = ","
    frequency: Optional[str] = None


@dataclass(frozen=True, eq=False)
class Series:
    timestamps: np.ndarray
    values: np.ndarray
    frequency: str = MONTHLY
    name: str = "series"

    def __post_init__(self):
        ts = np.asarray(self.timestamps, dtype="datetime64[D]").copy()
        vals = np.asarray(self.values, dtype=np.float64).copy()
        if ts.ndim != 1 or vals.ndim != 1 or ts.shape != vals.shape:
            raise InputError("timestamps and values must be 1-d and of equal length")
        if ts.size == 0:
            raise EmptyInput("series has no observations")
        if self.frequency not in FREQUENCIES:
            raise InputError(f"unknown frequency {self.frequency!r}")
        if not np.all(np.isfinite(vals)):
            bad = int(np.flatnonzero(~np.isfinite(vals))[0])
            raise InputError(f"non-finite value at position {bad}")
        _check_dates(ts, self.frequency)
        ts.flags.writeable = False
        vals.flags.writeable = False
        object.__setattr__(self, "timestamps", ts)
        object.__setattr__(self, "values", vals)

    def __len__(self):
        return self.values.shape[0]

    def __eq__(self, other):
        if not isinstance(other, Series):
            return NotImplemented
        return (
            self.name == other.name
            and self.frequency == other.frequency
            and np.array_equal(self.timestamps, other.timestamps)
            and np.array_equal(self.values, other.values)
        )

    __hash__ = None

    @property
    def T(self):
        return len(self)

    def date_str(self, i):
        """Timestamp ``i`` rendered at the series frequency."""
        d = self.timestamps[i].astype(object)
        return d.strftime(ISO_MONTH if self.frequency == MONTHLY and d.day == 1 else ISO_DATE)

    def with_values(self, values, name=None):
        return Series(self.timestamps, values, self.frequency, self.name if name is None else name)


def monthly_calendar(start, T):
    """``T`` consecutive month starts beginning at ``start`` (``YYYY-MM``)."""
    first = np.datetime64(start, "M")
    return (first + np.arange(T)).astype("datetime64[D]")


def _check_dates(ts, frequency):
    if ts.size < 2:
        return
    steps = np.diff(ts)
    if np.any(steps <= np.timedelta64(0, "D")):
        i = int(np.flatnonzero(steps <= np.timedelta64(0, "D"))[0]) + 1
        raise NonMonotonicDates(
            f"timestamp {ts[i]} at position {i} does not follow {ts[i - 1]}"
        )
    if frequency == MONTHLY:
        months = ts.astype("datetime64[M]")
        if np.any(np.diff(months) != np.timedelta64(1, "M")):
            i = int(np.flatnonzero(np.diff(months) != np.timedelta64(1, "M"))[0]) + 1
            raise IrregularDates(
                f"monthly series is not consecutive at position {i} ({ts[i - 1]} -> {ts[i]})"
            )


def _parse_date(text, fmt):
    d = dt.datetime.strptime(text, fmt).date()
    return np.datetime64(d, "D")


def _infer_frequency(ts, fmt):
    if fmt == ISO_MONTH:
        return MONTHLY
    if ts.size >= 2:
        months = ts.astype("datetime64[M]")
        days = ts - months.astype("datetime64[D]")
        if np.all(days == days[0]) and np.all(np.diff(months) == np.timedelta64(1, "M")):
            return MONTHLY
    return DAILY


def read_series(stream, schema=ColumnSchema(), name="series"):
    """Parse a delimited text stream into a validated :class:`Series`."""
    reader = csv.reader(stream, delimiter=schema.delimiter)
    try:
        header = next(reader)
    except StopIteration:
        raise EmptyInput("input has no header row") from None
    header = [h.strip() for h in header]
    for col in (schema.date_column, schema.value_column):
        if col not in header:
            raise MissingColumn(f"column {col!r} not in header {header}")
    di = header.index(schema.date_column)
    vi = header.index(schema.value_column)

    fmt = schema.date_format
    dates, values = [], []
    for row in reader:
        line = reader.line_num
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) <= max(di, vi):
            raise MalformedRow(f"expected at least {max(di, vi) + 1} fields, got {len(row)}", line)
        dtext = row[di].strip()
        vtext = row[vi].strip()
        if not dtext:
            raise MalformedRow("blank date", line)
        if not vtext:
            raise MissingValue("blank value (missing values are not imputed)", line)
        if fmt is None:
            fmt = ISO_DATE if len(dtext) > 7 else ISO_MONTH
        try:
            dates.append(_parse_date(dtext, fmt))
        except ValueError:
            raise MalformedRow(f"cannot parse date {dtext!r} with format {fmt!r}", line) from None
        try:
            v = float(vtext)
        except ValueError:
            raise MalformedRow(f"cannot parse value {vtext!r}", line) from None
        if not math.isfinite(v):
            raise MalformedRow(f"non-finite value {vtext!r}", line)
        values.append(v)

    if not values:
        raise EmptyInput("input has no data rows")
    ts = np.array(dates, dtype="datetime64[D]")
    frequency = schema.frequency or _infer_frequency(ts, fmt)
    return Series(ts, np.array(values), frequency, name)


def load_series(path, schema=ColumnSchema(), name=None):
    """Load and validate a series from a delimited UTF-8 file.

    Raises
    ------
    MalformedRow, MissingValue
        Unparseable or blank cell; the message carries the file line number.
    NonMonotonicDates
        Dates not strictly increasing (duplicates included).
    EmptyInput
        No header or no data rows.
    """
    if name is None:
        name = os.path.splitext(os.path.basename(str(path)))[0]
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            return read_series(fh, schema, name)
    except FileNotFoundError:
        raise InputFileError(f"input file not found: {path}") from None
    except UnicodeDecodeError as exc:
        raise InputFileError(f"input is not UTF-8: {exc}") from None


def dumps_series(series, delimiter=","):
    buf = io.StringIO()
    w = csv.writer(buf, delimiter=delimiter, lineterminator="\n")
    w.writerow(["date", "value"])
    for i in range(len(series)):
        w.writerow([series.date_str(i), repr(float(series.values[i]))])
    return buf.getvalue()


def write_text_atomic(path, text):
    path = os.fspath(path)
    d = os.path.dirname(os.path.abspath(path))
    os.makedirs(d, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def save_series(series, path, delimiter=","):
    """Write ``date,value`` with shortest round-trip float formatting."""
    write_text_atomic(path, dumps_series(series, delimiter))


def _as_day(value, upper=False):
    if isinstance(value, str) and len(value) == 7:
        month = np.datetime64(value, "M")
        if upper:
            return (month + 1).astype("datetime64[D]") - 1
        return month.astype("datetime64[D]")
    return np.datetime64(value, "D")


def slice_series(series, start, end):
    """Observations with ``start <= timestamp <= end``.

    Bounds may be dates, ``datetime64`` or strings; a ``YYYY-MM`` bound covers
    the whole month.
    """
    lo, hi = _as_day(start), _as_day(end, upper=True)
    if lo > hi:
        raise InputError(f"slice start {lo} is after end {hi}")
    mask = (series.timestamps >= lo) & (series.timestamps <= hi)
    if not mask.any():
        raise EmptyRange(f"no observations between {lo} and {hi}")
    return Series(series.timestamps[mask], series.values[mask], series.frequency, series.name)
