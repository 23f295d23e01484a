"""Partially observed paired samples, ranking, and missing-pattern classification."""

from __future__ import annotations

import csv
import io
import math
import os
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import DuplicateValue, FootruleError, LengthMismatch


class CsvFormatError(FootruleError, ValueError):
    def __init__(self, message, row=None):
        self.row = row
        if row is not None:
            message = f"row {row}: {message}"
        super().__init__(message)


def rank_vector(values) -> np.ndarray:
    """Return the 1-based ranks of pairwise distinct values.

    >>> rank_vector([7, 2, 5]).tolist()
    [3, 1, 2]
    """
    values = np.asarray(values, dtype=float)
    if values.ndim != 1 or values.size == 0:
        raise ValueError("rank_vector needs a non-empty 1-d sequence")
    order = np.argsort(values, kind="stable")
    sorted_vals = values[order]
    dup = np.flatnonzero(sorted_vals[1:] == sorted_vals[:-1])
    if dup.size:
        bad = values == sorted_vals[dup[0]]
        raise DuplicateValue("values", (np.flatnonzero(bad) + 1).tolist())
    ranks = np.empty(values.size, dtype=np.int64)
    ranks[order] = np.arange(1, values.size + 1)
    return ranks


def stable_ranks(values) -> np.ndarray:
    """Ranks with ties broken by position (earlier index gets the lower rank)."""
    values = np.asarray(values, dtype=float)
    ranks = np.empty(values.size, dtype=np.int64)
    ranks[np.argsort(values, kind="stable")] = np.arange(1, values.size + 1)
    return ranks


def observed_ranks(values: np.ndarray, observed: np.ndarray) -> np.ndarray:
    """Ranks of the observed entries among themselves; 0 where missing."""
    out = np.zeros(values.size, dtype=np.int64)
    idx = np.flatnonzero(observed)
    if idx.size:
        out[idx] = stable_ranks(values[idx])
    return out


def _find_duplicates(values: np.ndarray, observed: np.ndarray):
    idx = np.flatnonzero(observed)
    if idx.size < 2:
        return None
    vals = values[idx]
    order = np.argsort(vals, kind="stable")
    sv = vals[order]
    hit = np.flatnonzero(sv[1:] == sv[:-1])
    if not hit.size:
        return None
    return idx[vals == sv[hit[0]]]


@dataclass(frozen=True, eq=False)
class MissingPattern:
    """Partition of the (0-based) indices by which coordinates are missing.

    ``u``: x missing, y observed. ``v``: y missing, x observed.
    ``w``: both missing. ``o``: both observed.
    """

    u: np.ndarray
    v: np.ndarray
    w: np.ndarray
    o: np.ndarray

    @property
    def n(self) -> int:
        return self.u.size + self.v.size + self.w.size + self.o.size

    @property
    def sizes(self) -> tuple[int, int, int]:
        return self.u.size, self.v.size, self.w.size

    @property
    def case(self) -> str:
        """One of ``complete``, ``I``, ``II``, ``III`` or ``general``."""
        m1, m2, m3 = self.sizes
        if m1 == m2 == m3 == 0:
            return "complete"
        if m3 == 0 and (m1 == 0) != (m2 == 0):
            return "I"
        if m3 == 0:
            return "II"
        if m1 == m2 == 0:
            return "III"
        return "general"

    def is_case1(self) -> bool:
        return self.w.size == 0 and (self.u.size == 0 or self.v.size == 0)

    def is_case2(self) -> bool:
        return self.w.size == 0

    def is_case3(self) -> bool:
        return self.u.size == 0 and self.v.size == 0


@dataclass(frozen=True, eq=False)
class PairedSample:
    """n index-aligned pairs of optionally observed, distinct real values.

    Values at unobserved positions are ignored (stored as NaN). Use
    :meth:`from_values` to build one from sequences with ``None`` for missing.
    """

    x: np.ndarray
    y: np.ndarray
    x_observed: np.ndarray
    y_observed: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float).ravel()
        y = np.asarray(self.y, dtype=float).ravel()
        xo = np.asarray(self.x_observed, dtype=bool).ravel()
        yo = np.asarray(self.y_observed, dtype=bool).ravel()
        if not (x.size == y.size == xo.size == yo.size):
            raise LengthMismatch("x, y and their masks must have equal length")
        if x.size < 1:
            raise ValueError("a sample needs at least one pair")
        for name, vals, obs in (("x", x, xo), ("y", y, yo)):
            if not np.all(np.isfinite(vals[obs])):
                raise ValueError(f"observed {name} values must be finite")
        x = np.where(xo, x, np.nan)
        y = np.where(yo, y, np.nan)
        for arr in (x, y, xo, yo):
            arr.setflags(write=False)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "x_observed", xo)
        object.__setattr__(self, "y_observed", yo)
        validate_distinct(self)

    @classmethod
    def from_values(cls, x: Sequence[Optional[float]], y: Sequence[Optional[float]]):
        if len(x) != len(y):
            raise LengthMismatch(f"len(x)={len(x)} but len(y)={len(y)}")
        for name, seq in (("x", x), ("y", y)):
            for i, v in enumerate(seq):
                if v is not None and isinstance(v, float) and math.isnan(v):
                    raise ValueError(
                        f"{name}[{i + 1}] is NaN; use None for a missing value"
                    )
        xo = [v is not None for v in x]
        yo = [v is not None for v in y]
        xv = [float(v) if v is not None else np.nan for v in x]
        yv = [float(v) if v is not None else np.nan for v in y]
        return cls(np.array(xv), np.array(yv), np.array(xo), np.array(yo))

    @classmethod
    def complete(cls, x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        return cls(x, y, np.ones(x.size, bool), np.ones(y.size, bool))

    @property
    def n(self) -> int:
        return self.x.size

    @cached_property
    def pattern(self) -> MissingPattern:
        return classify_pattern(self)

    @cached_property
    def x_ranks(self) -> np.ndarray:
        """Ranks of observed x among observed x; 0 where missing."""
        return observed_ranks(self.x, self.x_observed)

    @cached_property
    def y_ranks(self) -> np.ndarray:
        return observed_ranks(self.y, self.y_observed)

    def swapped(self) -> "PairedSample":
        return PairedSample(self.y, self.x, self.y_observed, self.x_observed)

    def drop(self, indices) -> "PairedSample":
        keep = np.ones(self.n, bool)
        keep[np.asarray(indices, dtype=np.int64)] = False
        return self.take(np.flatnonzero(keep))

    def take(self, indices) -> "PairedSample":
        idx = np.asarray(indices, dtype=np.int64)
        return PairedSample(
            self.x[idx], self.y[idx], self.x_observed[idx], self.y_observed[idx]
        )

    def with_x(self, i: int, value: float) -> "PairedSample":
        """Copy with x[i] (0-based) set to an observed value."""
        x = self.x.copy()
        xo = self.x_observed.copy()
        x[i] = value
        xo[i] = True
        return PairedSample(x, self.y, xo, self.y_observed)

    def with_y(self, i: int, value: float) -> "PairedSample":
        y = self.y.copy()
        yo = self.y_observed.copy()
        y[i] = value
        yo[i] = True
        return PairedSample(self.x, y, self.x_observed, yo)

    def to_pairs(self) -> list[tuple[Optional[float], Optional[float]]]:
        return [
            (float(a) if ao else None, float(b) if bo else None)
            for a, b, ao, bo in zip(self.x, self.y, self.x_observed, self.y_observed)
        ]


def validate_distinct(sample: PairedSample) -> None:
    """Raise :class:`DuplicateValue` if either coordinate repeats an observed value."""
    for name, vals, obs in (
        ("x", sample.x, sample.x_observed),
        ("y", sample.y, sample.y_observed),
    ):
        dup = _find_duplicates(vals, obs)
        if dup is not None:
            raise DuplicateValue(name, (dup + 1).tolist())


def classify_pattern(sample: PairedSample) -> MissingPattern:
    xo, yo = sample.x_observed, sample.y_observed
    return MissingPattern(
        u=np.flatnonzero(~xo & yo),
        v=np.flatnonzero(xo & ~yo),
        w=np.flatnonzero(~xo & ~yo),
        o=np.flatnonzero(xo & yo),
    )


def _parse_cell(text: str, row: int, column: str) -> Optional[float]:
    text = text.strip()
    if text == "":
        return None
    try:
        value = float(text)
    except ValueError:
        raise CsvFormatError(f"{column}={text!r} is not a number", row) from None
    if not math.isfinite(value):
        raise CsvFormatError(f"{column}={text!r} is not a finite number", row)
    return value


def parse_csv(lines: Iterable[str]) -> PairedSample:
    """Parse ``x,y`` CSV text; an empty cell marks a missing value.

    Row numbers in errors count the header as row 1.
    """
    reader = csv.reader(lines)
    try:
        header = next(reader)
    except StopIteration:
        raise CsvFormatError("empty input") from None
    header = [h.strip().lower() for h in header]
    if header != ["x", "y"]:
        raise CsvFormatError(f"header must be 'x,y', got {','.join(header)!r}", 1)
    xs, ys, rownums = [], [], []
    for rownum, row in enumerate(reader, start=2):
        if not row:
            continue
        rownums.append(rownum)
        if len(row) != 2:
            raise CsvFormatError(f"expected 2 fields, got {len(row)}", rownum)
        xs.append(_parse_cell(row[0], rownum, "x"))
        ys.append(_parse_cell(row[1], rownum, "y"))
    if not xs:
        raise CsvFormatError("no data rows")
    try:
        return PairedSample.from_values(xs, ys)
    except DuplicateValue as exc:
        rows = [rownums[i - 1] for i in exc.indices]
        raise DuplicateValue(exc.coordinate, exc.indices, rows) from None


def read_csv(path) -> PairedSample:
    if isinstance(path, (str, os.PathLike)):
        with open(path, newline="") as fh:
            return parse_csv(fh)
    return parse_csv(path)


def write_csv(sample: PairedSample, fh: io.TextIOBase) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["x", "y"])
    for a, b in sample.to_pairs():
        w.writerow(["" if a is None else repr(a), "" if b is None else repr(b)])
