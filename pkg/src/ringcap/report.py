"""Verification reports: typed check entries, status vocabulary, and the
delimited on-disk format.

Every numerical check in the library reduces to one of two shapes:

* an inequality ``lhs <= rhs`` with ``margin = rhs - lhs``, or
* an equality ``lhs = rhs`` with ``margin = -|lhs - rhs|``,

so that in both cases "margin >= -tolerance" means the check holds.  A row's
``status`` refines the boolean: ``equality`` marks margins within tolerance
of zero, ``degenerate`` / ``hypothesis-not-met`` / ``info`` mark rows that
carry context rather than a verdict and never count as failures.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Sequence

from .errors import ValidationError

__all__ = [
    "STATUSES",
    "CheckEntry",
    "VerificationReport",
    "entry_equality",
    "entry_inequality",
    "entry_flagged",
    "CsvRow",
    "CSV_COLUMNS",
    "rows_from_report",
    "write_csv_rows",
    "read_csv_rows",
]

STATUSES = ("pass", "fail", "equality", "degenerate", "hypothesis-not-met", "info")


@dataclass(frozen=True)
class CheckEntry:
    """One verified comparison: named sides, margin, tolerance, verdict."""

    name: str
    lhs: float
    rhs: float
    margin: float
    tolerance: float
    passed: bool
    status: str = "pass"

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValidationError(f"unknown status {self.status!r}")
        if not (self.tolerance >= 0.0):
            raise ValidationError(f"tolerance must be nonnegative, got {self.tolerance}")


def entry_inequality(name: str, lhs: float, rhs: float,
                     tolerance: float) -> CheckEntry:
    """Check ``lhs <= rhs``; margin is the slack ``rhs - lhs``.

    A margin within tolerance of zero is recorded as ``equality``; anything
    below ``-tolerance`` fails.
    """
    margin = rhs - lhs
    if math.isnan(margin):
        return CheckEntry(name, lhs, rhs, margin, tolerance, False, "fail")
    if abs(margin) <= tolerance:
        status = "equality"
    elif margin > 0.0:
        status = "pass"
    else:
        status = "fail"
    return CheckEntry(name, lhs, rhs, margin, tolerance, status != "fail", status)


def entry_equality(name: str, lhs: float, rhs: float,
                   tolerance: float) -> CheckEntry:
    """Check ``lhs = rhs``; margin is ``-|lhs - rhs|`` so that holding means
    margin >= -tolerance, exactly as for inequalities."""
    if math.isnan(lhs) or math.isnan(rhs):
        return CheckEntry(name, lhs, rhs, math.nan, tolerance, False, "fail")
    if lhs == rhs:
        margin = 0.0  # covers the both-infinite case
    else:
        margin = -abs(lhs - rhs)
    ok = margin >= -tolerance
    return CheckEntry(name, lhs, rhs, margin, tolerance, ok,
                      "equality" if ok else "fail")


def entry_flagged(name: str, status: str, lhs: float, rhs: float,
                  tolerance: float = 0.0) -> CheckEntry:
    """A context row (degenerate branch, unmet hypothesis, informational
    comparison); never a failure."""
    if status not in ("degenerate", "hypothesis-not-met", "info"):
        raise ValidationError(f"flagged entries cannot have status {status!r}")
    return CheckEntry(name, lhs, rhs, rhs - lhs, tolerance, True, status)


@dataclass
class VerificationReport:
    """An ordered collection of check entries with aggregate verdicts."""

    entries: list[CheckEntry] = field(default_factory=list)

    def append(self, entry: CheckEntry) -> None:
        self.entries.append(entry)

    def extend(self, entries: Iterable[CheckEntry]) -> None:
        self.entries.extend(entries)

    @property
    def all_passed(self) -> bool:
        return all(e.passed for e in self.entries)

    def failures(self) -> list[CheckEntry]:
        return [e for e in self.entries if not e.passed]

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)


# ---------------------------------------------------------------------------
# delimited output
# ---------------------------------------------------------------------------

CSV_COLUMNS = ("suite", "check", "params", "lhs", "rhs", "margin", "status")


@dataclass(frozen=True)
class CsvRow:
    """One line of the delimited report: a check entry tagged with its suite
    and a canonical parameter string."""

    suite: str
    check: str
    params: str
    lhs: float
    rhs: float
    margin: float
    status: str

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValidationError(f"unknown status {self.status!r}")


def format_params(**kwargs) -> str:
    """Canonical ``key=value`` rendering, keys sorted, floats in repr form."""
    parts = []
    for key in sorted(kwargs):
        value = kwargs[key]
        if isinstance(value, float):
            value = format_float(value)
        parts.append(f"{key}={value}")
    return " ".join(parts)


def format_float(x: float) -> str:
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return repr(float(x))


def rows_from_report(suite: str, check: str, params: str,
                     report: "VerificationReport | Sequence[CheckEntry]"
                     ) -> list[CsvRow]:
    """Tag every entry of a report with suite/check/params.  The entry's own
    name is appended to the params string so no information is lost."""
    rows = []
    for e in report:
        tagged = params if not e.name else (f"{params} {e.name}" if params else e.name)
        rows.append(CsvRow(suite, check, tagged, e.lhs, e.rhs, e.margin, e.status))
    return rows


def sort_rows(rows: Iterable[CsvRow]) -> list[CsvRow]:
    return sorted(rows, key=lambda r: (r.suite, r.check, r.params))


def write_csv_rows(rows: Sequence[CsvRow], path: "Path | str") -> None:
    """UTF-8, LF-terminated, RFC-4180-quoted delimited output with a header.

    Floats are rendered through repr so a rerun is byte-identical.
    """
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for row in rows:
            writer.writerow([row.suite, row.check, row.params,
                             format_float(row.lhs), format_float(row.rhs),
                             format_float(row.margin), row.status])


def read_csv_rows(path: "Path | str") -> list[CsvRow]:
    """Parse a delimited report back into rows (used by the plot command)."""
    rows = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or tuple(header) != CSV_COLUMNS:
            raise ValidationError(f"unexpected report header: {header}")
        for line in reader:
            if len(line) != len(CSV_COLUMNS):
                raise ValidationError(f"malformed report line: {line}")
            suite, check, params, lhs, rhs, margin, status = line
            rows.append(CsvRow(suite, check, params,
                               float(lhs), float(rhs), float(margin), status))
    return rows
