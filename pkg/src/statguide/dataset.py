"""Columnar datasets: CSV ingestion, immutable transforms, summaries, plot data.

A Dataset is an immutable, versioned collection of named columns. Every
transform returns a new Dataset with ``version + 1`` and a provenance entry;
the input is never touched. Missing values are ``nan`` in numeric columns and
``None`` in categorical ones. Single-column statistics skip missing values;
multi-column consumers (regression, splits) are expected to drop incomplete
rows themselves and report how many went.
"""

from __future__ import annotations

import csv
import io
import math
import os
from dataclasses import dataclass

import numpy as np

from .errors import ColumnTypeError, CsvFormatError, DataError

NUMERIC = "numeric"
CATEGORICAL = "categorical"

#: Cell contents treated as missing on ingestion. The auto-mpg file marks
#: missing horsepower with "?".
DEFAULT_MISSING_TOKENS = ("", "NA", "?")

_COMPARATOR_ALIASES = {"=": "==", "≠": "!=", "≤": "<=", "≥": ">=", "in-set": "in"}
COMPARATORS = ("==", "!=", "<", ">", "<=", ">=", "in")


def _parse_number(text: str) -> float | None:
    """Parse a cell as a finite real number; None when it is not one."""
    try:
        value = float(text)
    except ValueError:
        return None
    return value if math.isfinite(value) else None


@dataclass(frozen=True)
class Column:
    """A named, typed column. Numeric values are float64 with nan for missing;
    categorical values are objects with None for missing."""

    name: str
    dtype: str
    values: np.ndarray

    def __post_init__(self):
        if not self.name:
            raise DataError("column name must be non-empty")
        if self.dtype not in (NUMERIC, CATEGORICAL):
            raise DataError(f"unknown dtype {self.dtype!r}")
        arr = np.asarray(self.values, dtype=float if self.dtype == NUMERIC else object)
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    def __len__(self) -> int:
        return len(self.values)

    @property
    def missing_mask(self) -> np.ndarray:
        if self.dtype == NUMERIC:
            return np.isnan(self.values)
        return np.array([v is None for v in self.values], dtype=bool)

    @property
    def missing_count(self) -> int:
        return int(self.missing_mask.sum())

    def non_missing(self) -> np.ndarray:
        return self.values[~self.missing_mask]


@dataclass(frozen=True)
class Predicate:
    """Row predicate: ``column <comparator> value``.

    Comparisons against a missing cell are False, so rows with a missing
    value in the predicate column always survive ``drop_rows_where``.
    """

    column: str
    comparator: str
    value: object

    def __post_init__(self):
        op = _COMPARATOR_ALIASES.get(self.comparator, self.comparator)
        if op not in COMPARATORS:
            raise DataError(f"unknown comparator {self.comparator!r}")
        object.__setattr__(self, "comparator", op)

    def describe(self) -> str:
        return f"{self.column} {self.comparator} {self.value!r}"


@dataclass(frozen=True)
class Dataset:
    """Immutable columnar dataset with a transform history."""

    columns: tuple[Column, ...]
    version: int = 0
    provenance: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "columns", tuple(self.columns))
        object.__setattr__(self, "provenance", tuple(self.provenance))
        names = [c.name for c in self.columns]
        if len(set(names)) != len(names):
            dupes = sorted({n for n in names if names.count(n) > 1})
            raise DataError(f"duplicate column names: {', '.join(dupes)}")
        lengths = {len(c) for c in self.columns}
        if len(lengths) > 1:
            raise DataError(f"columns have unequal lengths: {sorted(lengths)}")

    # -- access ------------------------------------------------------------

    @property
    def row_count(self) -> int:
        return len(self.columns[0]) if self.columns else 0

    @property
    def column_names(self) -> list[str]:
        return [c.name for c in self.columns]

    def column(self, name: str) -> Column:
        for c in self.columns:
            if c.name == name:
                return c
        raise DataError(f"unknown column {name!r}")

    def has_column(self, name: str) -> bool:
        return any(c.name == name for c in self.columns)

    def numeric_values(self, name: str) -> np.ndarray:
        col = self.column(name)
        if col.dtype != NUMERIC:
            raise ColumnTypeError(f"column {name!r} is categorical, expected numeric")
        return col.values

    def distinct_values(self, name: str) -> list:
        """Distinct non-missing values of a column, sorted."""
        col = self.column(name)
        vals = col.non_missing()
        if col.dtype == NUMERIC:
            return [float(v) for v in np.unique(vals)]
        return sorted({str(v) for v in vals})

    def overview(self, preview_rows: int = 5) -> dict:
        """Compact description used for the load step's output and the UI."""
        return {
            "row_count": self.row_count,
            "version": self.version,
            "columns": [
                {"name": c.name, "dtype": c.dtype, "missing_count": c.missing_count}
                for c in self.columns
            ],
            "preview": self.preview(preview_rows),
            "provenance": list(self.provenance),
        }

    def preview(self, n: int) -> list[dict]:
        rows = []
        for i in range(min(n, self.row_count)):
            row = {}
            for c in self.columns:
                v = c.values[i]
                if c.dtype == NUMERIC:
                    row[c.name] = None if np.isnan(v) else float(v)
                else:
                    row[c.name] = v
            rows.append(row)
        return rows

    # -- transforms ----------------------------------------------------------

    def _evolve(self, columns: tuple[Column, ...], note: str) -> "Dataset":
        return Dataset(columns, self.version + 1, self.provenance + (note,))

    def drop_rows_where(self, predicate: Predicate) -> "Dataset":
        """New Dataset keeping exactly the rows that fail the predicate."""
        col = self.column(predicate.column)
        keep = ~_predicate_mask(col, predicate)
        columns = tuple(Column(c.name, c.dtype, c.values[keep]) for c in self.columns)
        return self._evolve(columns, f"drop rows where {predicate.describe()}")

    def derive_column(self, name: str, left, op: str, right) -> "Dataset":
        """Append a numeric column from elementwise arithmetic.

        ``left``/``right`` are column names or scalars; at least one must be a
        column. Division by zero and missing operands yield missing values.
        """
        if self.has_column(name):
            raise DataError(f"column {name!r} already exists")
        if op not in ("+", "-", "*", "/"):
            raise DataError(f"unknown operator {op!r}")
        lv = self._operand(left)
        rv = self._operand(right)
        if np.isscalar(lv) and np.isscalar(rv):
            raise DataError("at least one operand must be a column")
        with np.errstate(divide="ignore", invalid="ignore"):
            if op == "+":
                out = lv + rv
            elif op == "-":
                out = lv - rv
            elif op == "*":
                out = lv * rv
            else:
                out = lv / rv
        out = np.where(np.isfinite(out), out, np.nan)
        columns = self.columns + (Column(name, NUMERIC, out),)
        return self._evolve(columns, f"derive {name} = {left} {op} {right}")

    def _operand(self, ref):
        if isinstance(ref, str):
            return self.numeric_values(ref)
        if isinstance(ref, (int, float)):
            return float(ref)
        raise DataError(f"operand must be a column name or number, got {ref!r}")

    def log_transform(self, name: str) -> "Dataset":
        """Natural log of a numeric column; non-positive values become missing."""
        vals = self.numeric_values(name)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = np.where(vals > 0, np.log(np.where(vals > 0, vals, 1.0)), np.nan)
        columns = tuple(
            Column(c.name, NUMERIC, out) if c.name == name else c for c in self.columns
        )
        return self._evolve(columns, f"log transform {name}")

    def train_test_split(self, ratio: float, seed: int) -> tuple["Dataset", "Dataset"]:
        """Deterministic shuffle-split; partitions keep original row order."""
        if not 0 < ratio <= 1:
            raise DataError(f"split ratio must be in (0, 1], got {ratio}")
        n = self.row_count
        perm = np.random.default_rng(int(seed)).permutation(n)
        n_train = math.floor(ratio * n)
        train_idx = np.sort(perm[:n_train])
        test_idx = np.sort(perm[n_train:])

        def take(idx, part):
            cols = tuple(Column(c.name, c.dtype, c.values[idx]) for c in self.columns)
            note = f"{part} split (ratio={ratio}, seed={seed})"
            return Dataset(cols, self.version + 1, self.provenance + (note,))

        return take(train_idx, "train"), take(test_idx, "test")


def _predicate_mask(col: Column, predicate: Predicate) -> np.ndarray:
    """Boolean mask of rows matching the predicate; missing never matches."""
    op = predicate.comparator
    value = predicate.value
    if col.dtype == NUMERIC:
        literals = value if op == "in" else [value]
        for lit in literals if isinstance(literals, (list, tuple, set)) else [literals]:
            if not isinstance(lit, (int, float)) or isinstance(lit, bool):
                raise DataError(
                    f"predicate value {lit!r} is not numeric but column "
                    f"{col.name!r} is"
                )
        present = ~np.isnan(col.values)
        vals = col.values
        if op == "in":
            mask = np.isin(vals, [float(v) for v in value])
        else:
            v = float(value)
            mask = {
                "==": vals == v,
                "!=": vals != v,
                "<": vals < v,
                ">": vals > v,
                "<=": vals <= v,
                ">=": vals >= v,
            }[op]
        return mask & present
    # categorical: only equality-ish comparators make sense
    if op in ("<", ">", "<=", ">="):
        raise DataError(f"ordering comparator {op!r} not valid for categorical column {col.name!r}")
    values = col.values
    present = np.array([v is not None for v in values], dtype=bool)
    if op == "in":
        allowed = {str(v) for v in value}
        mask = np.array([v in allowed for v in values], dtype=bool)
    else:
        mask = np.array([v == str(value) for v in values], dtype=bool)
        if op == "!=":
            mask = ~mask
    return mask & present


# -- CSV ingestion -----------------------------------------------------------


def load_csv(
    source,
    *,
    delimiter: str = ",",
    header: bool = True,
    missing_tokens=DEFAULT_MISSING_TOKENS,
) -> Dataset:
    """Parse delimited text into a Dataset.

    ``source`` may be a path, text, bytes, or a file object. A column is
    numeric iff every non-missing cell parses as a finite real number;
    anything else makes it categorical. Ragged rows and duplicate header
    names raise CsvFormatError.
    """
    text = _read_text(source)
    missing = set(missing_tokens)
    reader = csv.reader(io.StringIO(text), delimiter=delimiter)
    rows = [row for row in reader]
    # trailing blank line from a final newline is not data
    while rows and rows[-1] == []:
        rows.pop()
    if not rows:
        raise CsvFormatError("empty input")

    if header:
        names = [h.strip() for h in rows[0]]
        data_rows = rows[1:]
        first_data_line = 2
        if any(not n for n in names):
            raise CsvFormatError("empty column name in header")
        dupes = sorted({n for n in names if names.count(n) > 1})
        if dupes:
            raise CsvFormatError(f"duplicate header names: {', '.join(dupes)}")
    else:
        names = [f"column_{i + 1}" for i in range(len(rows[0]))]
        data_rows = rows
        first_data_line = 1

    width = len(names)
    # an interior blank line is a row of empty cells, not a structural error
    data_rows = [row if row else [""] * width for row in data_rows]
    for offset, row in enumerate(data_rows):
        if len(row) != width:
            raise CsvFormatError(
                f"line {first_data_line + offset}: expected {width} fields, got {len(row)}"
            )

    columns = []
    for j, name in enumerate(names):
        cells = [row[j].strip() for row in data_rows]
        parsed = [None if c in missing else _parse_number(c) for c in cells]
        is_numeric = all(p is not None for c, p in zip(cells, parsed) if c not in missing)
        if is_numeric:
            values = np.array(
                [np.nan if p is None else p for p in parsed], dtype=float
            )
            columns.append(Column(name, NUMERIC, values))
        else:
            values = np.array(
                [None if c in missing else c for c in cells], dtype=object
            )
            columns.append(Column(name, CATEGORICAL, values))
    return Dataset(tuple(columns), version=0, provenance=())


def _read_text(source) -> str:
    if isinstance(source, bytes):
        return source.decode("utf-8")
    if isinstance(source, str):
        # a path if it points at an existing file, else literal CSV text
        if "\n" not in source and os.path.exists(source):
            with open(source, "rb") as f:
                return f.read().decode("utf-8")
        return source
    if isinstance(source, os.PathLike):
        with open(source, "rb") as f:
            return f.read().decode("utf-8")
    data = source.read()
    return data.decode("utf-8") if isinstance(data, bytes) else data


# -- summaries and plot data ---------------------------------------------------


def quantile(values, q: float) -> float:
    """Linear interpolation between order statistics at rank (n-1)*q."""
    v = np.sort(np.asarray(values, dtype=float))
    if v.size == 0:
        raise DataError("quantile of empty sequence")
    if np.isnan(v).any():
        v = v[~np.isnan(v)]
        if v.size == 0:
            raise DataError("quantile of all-missing sequence")
    if not 0.0 <= q <= 1.0:
        raise DataError(f"quantile level must be in [0, 1], got {q}")
    h = (v.size - 1) * q
    lo = math.floor(h)
    frac = h - lo
    if frac == 0.0:
        return float(v[lo])
    return float(v[lo] + frac * (v[lo + 1] - v[lo]))


@dataclass(frozen=True)
class SummaryStats:
    count: int
    missing_count: int
    mean: float
    std: float
    min: float
    q1: float
    median: float
    q3: float
    max: float
    mode_value: float
    mode_frequency: int

    def to_dict(self) -> dict:
        return {
            "count": self.count,
            "missing_count": self.missing_count,
            "mean": self.mean,
            "std": self.std,
            "min": self.min,
            "q1": self.q1,
            "median": self.median,
            "q3": self.q3,
            "max": self.max,
            "mode_value": self.mode_value,
            "mode_frequency": self.mode_frequency,
        }


def column_summary(dataset: Dataset, name: str) -> SummaryStats:
    """Descriptive statistics over the non-missing values of a numeric column."""
    col = dataset.column(name)
    if col.dtype != NUMERIC:
        raise ColumnTypeError(f"column {name!r} is categorical, expected numeric")
    vals = col.non_missing()
    if vals.size == 0:
        raise DataError(f"column {name!r} has no non-missing values")
    uniq, counts = np.unique(vals, return_counts=True)
    top = int(np.argmax(counts))  # ties resolve to the smallest value
    # sample std; a single observation has no dispersion to estimate
    std = float(np.std(vals, ddof=1)) if vals.size > 1 else 0.0
    return SummaryStats(
        count=int(vals.size),
        missing_count=col.missing_count,
        mean=float(np.mean(vals)),
        std=std,
        min=float(vals.min()),
        q1=quantile(vals, 0.25),
        median=quantile(vals, 0.5),
        q3=quantile(vals, 0.75),
        max=float(vals.max()),
        mode_value=float(uniq[top]),
        mode_frequency=int(counts[top]),
    )


@dataclass(frozen=True)
class HistogramData:
    bin_edges: tuple[float, ...]
    counts: tuple[int, ...]

    def to_dict(self) -> dict:
        return {"bin_edges": list(self.bin_edges), "counts": list(self.counts)}


def histogram(values, bins: int | None = None) -> HistogramData:
    """Histogram with Freedman-Diaconis widths by default.

    ``bins`` forces that many equal-width bins. IQR of zero falls back to 10
    equal bins; a constant column gets a single unit-wide bin.
    """
    v = np.asarray(values, dtype=float)
    v = v[~np.isnan(v)]
    if v.size == 0:
        raise DataError("histogram of empty sequence")
    lo, hi = float(v.min()), float(v.max())
    if lo == hi:
        edges = np.array([lo - 0.5, lo + 0.5])
    else:
        if bins is None:
            iqr = quantile(v, 0.75) - quantile(v, 0.25)
            if iqr > 0:
                width = 2.0 * iqr / v.size ** (1 / 3)
                bins = min(int(math.ceil((hi - lo) / width)), 10_000)
            else:
                bins = 10
        if bins < 1:
            raise DataError(f"bin count must be positive, got {bins}")
        edges = np.linspace(lo, hi, bins + 1)
    counts, edges = np.histogram(v, bins=edges)
    return HistogramData(tuple(float(e) for e in edges), tuple(int(c) for c in counts))


@dataclass(frozen=True)
class DensityCurve:
    xs: tuple[float, ...]
    ys: tuple[float, ...]
    bandwidth: float

    def to_dict(self) -> dict:
        return {"xs": list(self.xs), "ys": list(self.ys), "bandwidth": self.bandwidth}


def kde(values, grid_size: int = 256) -> DensityCurve:
    """Gaussian kernel density estimate with Silverman's bandwidth.

    Bandwidth is 0.9 * min(std, IQR/1.34) * n^(-1/5); when the IQR is zero
    the std alone is used. The grid spans [min - 3h, max + 3h].
    """
    v = np.asarray(values, dtype=float)
    v = v[~np.isnan(v)]
    if np.unique(v).size < 2:
        raise DataError("kde needs at least 2 distinct values")
    std = float(np.std(v, ddof=1))
    iqr = quantile(v, 0.75) - quantile(v, 0.25)
    scale = min(std, iqr / 1.34) if iqr > 0 else std
    h = 0.9 * scale * v.size ** (-1 / 5)
    xs = np.linspace(v.min() - 3 * h, v.max() + 3 * h, grid_size)
    z = (xs[:, None] - v[None, :]) / h
    ys = np.exp(-0.5 * z * z).sum(axis=1) / (v.size * h * math.sqrt(2 * math.pi))
    return DensityCurve(tuple(map(float, xs)), tuple(map(float, ys)), float(h))
