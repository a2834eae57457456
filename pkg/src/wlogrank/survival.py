"""Right-censored two-arm data, risk tables and Kaplan-Meier estimation.

Arms are coded ``0`` (control) and ``1`` (experimental).  A censoring tied
with an event time is treated as occurring just after the events, so the
censored subject is still at risk at that time.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .exceptions import NoEventsError, ValidationError

__all__ = [
    "SubjectRecord",
    "Dataset",
    "RiskTable",
    "KMCurve",
    "as_dataset",
    "build_risk_table",
    "kaplan_meier",
    "read_csv",
    "write_csv",
]


@dataclass(frozen=True)
class SubjectRecord:
    """One subject: observed time (months), event indicator and arm."""

    time: float
    event: bool
    arm: int

    def __post_init__(self):
        t = float(self.time)
        if not np.isfinite(t) or t < 0:
            raise ValidationError(f"time must be finite and >= 0, got {self.time!r}")
        if self.arm not in (0, 1):
            raise ValidationError(f"arm must be 0 or 1, got {self.arm!r}")


@dataclass(frozen=True, eq=False)
class Dataset:
    """Column-oriented view of a list of :class:`SubjectRecord`.

    All analysis functions accept either a ``Dataset`` or a sequence of
    records; simulation produces ``Dataset`` directly.
    """

    time: np.ndarray
    event: np.ndarray
    arm: np.ndarray

    def __post_init__(self):
        time = np.asarray(self.time, dtype=np.float64)
        event = np.asarray(self.event, dtype=bool)
        arm = np.asarray(self.arm)
        if not (time.ndim == event.ndim == arm.ndim == 1):
            raise ValidationError("time, event and arm must be one-dimensional")
        if not (time.shape == event.shape == arm.shape):
            raise ValidationError("time, event and arm must have equal length")
        if not np.all(np.isfinite(time)) or np.any(time < 0):
            raise ValidationError("times must be finite and >= 0")
        if arm.size and not np.all((arm == 0) | (arm == 1)):
            raise ValidationError("arm codes must be 0 or 1")
        for name, value in (("time", time), ("event", event), ("arm", arm.astype(np.int8))):
            value.setflags(write=False)
            object.__setattr__(self, name, value)

    def __len__(self):
        return self.time.size

    @classmethod
    def from_records(cls, records: Iterable[SubjectRecord]) -> "Dataset":
        records = list(records)
        return cls(
            np.array([r.time for r in records], dtype=np.float64),
            np.array([bool(r.event) for r in records], dtype=bool),
            np.array([r.arm for r in records], dtype=np.int8),
        )

    def records(self) -> list[SubjectRecord]:
        return [
            SubjectRecord(float(t), bool(e), int(a))
            for t, e, a in zip(self.time, self.event, self.arm)
        ]

    def subset(self, arm: int) -> "Dataset":
        mask = self.arm == arm
        return Dataset(self.time[mask], self.event[mask], self.arm[mask])

    def swap_arms(self) -> "Dataset":
        return Dataset(self.time, self.event, 1 - self.arm)


def as_dataset(data: Dataset | Sequence[SubjectRecord]) -> Dataset:
    if isinstance(data, Dataset):
        return data
    return Dataset.from_records(data)


@dataclass(frozen=True, eq=False)
class RiskTable:
    """Counts at the ``k`` distinct event times, split by arm.

    ``n_risk`` and ``events`` have shape ``(2, k)``.  ``censored`` has shape
    ``(2, k + 1)``: column 0 counts censorings before the first event time
    and column ``j`` (1-based) counts censorings in ``[t_j, t_{j+1})``.
    """

    event_times: np.ndarray
    n_risk: np.ndarray
    events: np.ndarray
    censored: np.ndarray

    @property
    def k(self) -> int:
        return self.event_times.size

    @property
    def n(self) -> np.ndarray:
        return self.n_risk.sum(axis=0)

    @property
    def d(self) -> np.ndarray:
        return self.events.sum(axis=0)

    @property
    def l(self) -> np.ndarray:
        return self.censored.sum(axis=0)

    @property
    def arm_sizes(self) -> tuple[int, int]:
        totals = self.events.sum(axis=1) + self.censored.sum(axis=1)
        return int(totals[0]), int(totals[1])

    @property
    def N(self) -> int:
        return sum(self.arm_sizes)

    @property
    def exhausted(self) -> np.ndarray:
        """Rows where every subject at risk has the event (``n_j == d_j``)."""
        return self.n == self.d


def build_risk_table(data: Dataset | Sequence[SubjectRecord]) -> RiskTable:
    """Tabulate risk-set sizes, events and censorings at each event time.

    Raises
    ------
    NoEventsError
        If the input is empty or contains no events.
    """
    data = as_dataset(data)
    if len(data) == 0 or not data.event.any():
        raise NoEventsError("no events")
    event_times = np.unique(data.time[data.event])
    k = event_times.size
    # row of the last event time <= t; -1 before the first event
    row = np.searchsorted(event_times, data.time, side="right") - 1
    events = np.zeros((2, k), dtype=np.int64)
    censored = np.zeros((2, k + 1), dtype=np.int64)
    for i in (0, 1):
        in_arm = data.arm == i
        events[i] = np.bincount(row[in_arm & data.event], minlength=k)
        censored[i] = np.bincount(row[in_arm & ~data.event] + 1, minlength=k + 1)
    sizes = events.sum(axis=1) + censored.sum(axis=1)
    leaving = np.cumsum(events + censored[:, 1:], axis=1)
    n_risk = sizes[:, None] - censored[:, :1] - np.hstack(
        [np.zeros((2, 1), dtype=np.int64), leaving[:, :-1]]
    )
    for a in (event_times, n_risk, events, censored):
        a.setflags(write=False)
    return RiskTable(event_times, n_risk, events, censored)


@dataclass(frozen=True, eq=False)
class KMCurve:
    """Product-limit survival estimate with Greenwood variance.

    The curve is right-continuous: ``survival[j]`` holds on
    ``[times[j], times[j+1])`` and the estimate is 1 before ``times[0]``.
    """

    times: np.ndarray
    survival: np.ndarray
    variance: np.ndarray

    def at(self, t: float) -> tuple[float, float]:
        """Return ``(S(t), var S(t))``."""
        j = np.searchsorted(self.times, t, side="right") - 1
        if j < 0:
            return 1.0, 0.0
        return float(self.survival[j]), float(self.variance[j])


def _km_from_counts(times, n, d) -> KMCurve:
    n = n.astype(np.float64)
    d = d.astype(np.float64)
    survival = np.cumprod(1.0 - d / n)
    alive = n - d
    terms = np.divide(d, n * alive, out=np.zeros_like(n), where=alive > 0)
    variance = survival**2 * np.cumsum(terms)
    return KMCurve(times, survival, variance)


def kaplan_meier(data: Dataset | Sequence[SubjectRecord], arm: int | None = None) -> KMCurve:
    """Kaplan-Meier estimate for one arm (``0`` or ``1``) or pooled (``None``).

    Greenwood terms are taken as zero at a time where the risk set is
    exhausted, so the variance is 0 once the curve reaches 0.
    """
    data = as_dataset(data)
    if arm is not None:
        data = data.subset(arm)
    table = build_risk_table(data)
    return _km_from_counts(table.event_times, table.n, table.d)


def arm_curves(table: RiskTable) -> tuple[KMCurve, KMCurve]:
    """Per-arm Kaplan-Meier curves read off a pooled risk table.

    Rows without events on an arm leave that arm's curve unchanged, so the
    returned curves share the pooled event times.
    """
    curves = []
    for i in (0, 1):
        curves.append(_km_from_counts(table.event_times, np.maximum(table.n_risk[i], 1), table.events[i]))
    return curves[0], curves[1]


def read_csv(source) -> Dataset:
    """Read a ``time,event,arm`` CSV from a path or text stream.

    Raises
    ------
    ValidationError
        On a wrong header or a malformed row; the message names the line.
    """
    if isinstance(source, (str, bytes)) or hasattr(source, "__fspath__"):
        with open(source, newline="") as fh:
            return read_csv(fh)
    reader = csv.reader(source)
    header = next(reader, None)
    if header is None or [h.strip() for h in header] != ["time", "event", "arm"]:
        raise ValidationError("line 1: header must be 'time,event,arm'")
    times, events, arms = [], [], []
    for lineno, row in enumerate(reader, start=2):
        if not row or all(not f.strip() for f in row):
            continue
        if len(row) != 3 or any(not f.strip() for f in row):
            raise ValidationError(f"line {lineno}: expected 3 fields, got {row!r}")
        try:
            t = float(row[0])
        except ValueError:
            raise ValidationError(f"line {lineno}: time {row[0]!r} is not a number") from None
        if not np.isfinite(t) or t < 0:
            raise ValidationError(f"line {lineno}: time must be finite and >= 0")
        e, a = row[1].strip(), row[2].strip()
        if e not in ("0", "1"):
            raise ValidationError(f"line {lineno}: event must be 0 or 1, got {e!r}")
        if a not in ("0", "1"):
            raise ValidationError(f"line {lineno}: arm must be 0 or 1, got {a!r}")
        times.append(t)
        events.append(e == "1")
        arms.append(int(a))
    return Dataset(np.array(times, dtype=np.float64), np.array(events, dtype=bool), np.array(arms, dtype=np.int8))


def write_csv(data: Dataset, dest=None) -> str | None:
    """Write ``data`` as CSV; returns the text when ``dest`` is None."""
    buf = io.StringIO()
    buf.write("time,event,arm\n")
    for t, e, a in zip(data.time, data.event, data.arm):
        buf.write(f"{t:.17g},{int(e)},{int(a)}\n")
    text = buf.getvalue()
    if dest is None:
        return text
    if hasattr(dest, "write"):
        dest.write(text)
    else:
        with open(dest, "w", newline="") as fh:
            fh.write(text)
    return None
