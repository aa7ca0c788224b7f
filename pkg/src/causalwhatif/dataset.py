"""Columnar observational data: typed columns, CSV ingestion, preprocessing.

A DataTable is immutable after construction. Binary and continuous columns
hold float64 vectors; categorical columns hold string labels with an explicit
ordered level list. Exactly one column is designated the outcome.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    MissingValueError,
    NameCollisionError,
    NotContinuousError,
    RaggedRowError,
    UnknownColumnError,
    UnknownOutcomeColumnError,
    UnparseableNumericError,
)

BINARY = "binary"
CONTINUOUS = "continuous"
CATEGORICAL = "categorical"

_KINDS = (BINARY, CONTINUOUS, CATEGORICAL)


@dataclass(frozen=True)
class Column:
    """One named column: kind is 'binary', 'continuous' or 'categorical'.

    Binary/continuous values are float64 arrays; categorical values are
    object arrays of strings and `levels` lists the distinct labels.
    """

    name: str
    kind: str
    values: np.ndarray
    levels: tuple[str, ...] = ()

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown column kind {self.kind!r}")
        if self.kind == CATEGORICAL:
            if not self.levels:
                raise ValueError(f"categorical column {self.name!r} needs levels")
            if len(set(self.levels)) != len(self.levels):
                raise ValueError(f"duplicate levels in column {self.name!r}")
        if self.kind == BINARY:
            vals = np.asarray(self.values)
            if vals.size and not np.isin(vals, (0.0, 1.0)).all():
                raise ValueError(f"binary column {self.name!r} has values outside {{0,1}}")
        object.__setattr__(self, "values", _frozen(self.values, self.kind))

    @property
    def is_discrete(self) -> bool:
        return self.kind in (BINARY, CATEGORICAL)


def _frozen(values, kind) -> np.ndarray:
    arr = np.asarray(values, dtype=object if kind == CATEGORICAL else np.float64)
    arr = arr.copy()
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class DataTable:
    """Immutable columnar dataset with a designated outcome column."""

    columns: tuple[Column, ...]
    outcome: str

    def __post_init__(self):
        if not self.columns:
            raise ValueError("a table needs at least one column")
        names = [c.name for c in self.columns]
        if len(set(names)) != len(names):
            raise ValueError("duplicate column names")
        lengths = {len(c.values) for c in self.columns}
        if len(lengths) != 1:
            raise ValueError("columns have unequal lengths")
        if lengths == {0}:
            raise ValueError("a table needs at least one row")
        if self.outcome not in names:
            raise UnknownOutcomeColumnError(f"outcome column {self.outcome!r} not in table")
        object.__setattr__(self, "columns", tuple(self.columns))

    @property
    def n_rows(self) -> int:
        return len(self.columns[0].values)

    @property
    def column_names(self) -> tuple[str, ...]:
        return tuple(c.name for c in self.columns)

    @property
    def feature_names(self) -> tuple[str, ...]:
        return tuple(c.name for c in self.columns if c.name != self.outcome)

    def column(self, name: str) -> Column:
        for c in self.columns:
            if c.name == name:
                return c
        raise UnknownColumnError(f"no column named {name!r}")

    def outcome_column(self) -> Column:
        return self.column(self.outcome)

    def matrix(self, names: list[str] | tuple[str, ...]) -> np.ndarray:
        """Stack the named numeric columns into an (n, k) float matrix."""
        cols = []
        for name in names:
            col = self.column(name)
            if col.kind == CATEGORICAL:
                raise NotContinuousError(
                    f"column {name!r} is categorical; one-hot encode it first"
                )
            cols.append(col.values)
        if not cols:
            return np.empty((self.n_rows, 0))
        return np.column_stack(cols)

    def take_rows(self, index: np.ndarray) -> "DataTable":
        cols = tuple(
            Column(c.name, c.kind, c.values[index], c.levels) for c in self.columns
        )
        return DataTable(cols, self.outcome)


Instance = dict[str, float]


def infer_kind(raw: list[str]) -> tuple[str, np.ndarray, tuple[str, ...]]:
    """Infer a column kind from raw strings.

    Values all in {0,1} -> binary; all numeric -> continuous; else categorical
    with lexicographically sorted levels.
    """
    parsed = np.empty(len(raw))
    numeric = True
    for i, cell in enumerate(raw):
        try:
            parsed[i] = float(cell)
        except ValueError:
            numeric = False
            break
    if numeric:
        if np.isin(parsed, (0.0, 1.0)).all():
            return BINARY, parsed, ()
        return CONTINUOUS, parsed, ()
    levels = tuple(sorted(set(raw)))
    return CATEGORICAL, np.array(raw, dtype=object), levels


def _parse_with_hint(name: str, kind: str, raw: list[str]) -> Column:
    if kind == CATEGORICAL:
        return Column(name, CATEGORICAL, np.array(raw, dtype=object), tuple(sorted(set(raw))))
    parsed = np.empty(len(raw))
    for i, cell in enumerate(raw):
        try:
            parsed[i] = float(cell)
        except ValueError:
            raise UnparseableNumericError(
                f"column {name!r}, row {i + 1}: {cell!r} is not numeric"
            ) from None
    if kind == BINARY and parsed.size and not np.isin(parsed, (0.0, 1.0)).all():
        bad = int(np.flatnonzero(~np.isin(parsed, (0.0, 1.0)))[0])
        raise UnparseableNumericError(
            f"column {name!r}, row {bad + 1}: value {parsed[bad]!r} is not 0/1"
        )
    return Column(name, kind, parsed)


def _table_from_rows(header, rows, outcome, schema_hint):
    schema_hint = schema_hint or {}
    for i, row in enumerate(rows):
        if len(row) != len(header):
            raise RaggedRowError(
                f"row {i + 1} has {len(row)} cells, header has {len(header)}"
            )
        for j, cell in enumerate(row):
            if cell == "":
                raise MissingValueError(f"empty cell at row {i + 1}, column {header[j]!r}")
    if outcome not in header:
        raise UnknownOutcomeColumnError(f"outcome column {outcome!r} not in header")
    if not rows:
        raise MissingValueError("file has a header but no data rows")
    columns = []
    for j, name in enumerate(header):
        raw = [row[j] for row in rows]
        if name in schema_hint:
            columns.append(_parse_with_hint(name, schema_hint[name], raw))
        else:
            kind, values, levels = infer_kind(raw)
            columns.append(Column(name, kind, values, levels))
    return DataTable(tuple(columns), outcome)


def load_csv(path, outcome: str, schema_hint: dict[str, str] | None = None) -> DataTable:
    """Load a UTF-8 CSV with a header row into a typed DataTable.

    Kind inference per column: values within {0,1} -> binary, numeric ->
    continuous, anything else -> categorical. schema_hint overrides
    inference per column name. Missing cells are rejected.
    """
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise MissingValueError("empty file") from None
        rows = list(reader)
    return _table_from_rows(header, rows, outcome, schema_hint)


def load_csv_text(text: str, outcome: str, schema_hint: dict[str, str] | None = None) -> DataTable:
    """Like load_csv but from an in-memory string (service ingestion)."""
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise MissingValueError("empty csv text") from None
    rows = [r for r in reader if r]
    return _table_from_rows(header, rows, outcome, schema_hint)


def save_csv(table: DataTable, path) -> None:
    """Write a DataTable to CSV; reloading yields an identical table.

    Binary cells are written as 0/1 integers, continuous via repr (exact
    float round trip), categorical per RFC-4180 quoting.
    """
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow([c.name for c in table.columns])
        formatters = []
        for c in table.columns:
            if c.kind == BINARY:
                formatters.append(lambda v: str(int(v)))
            elif c.kind == CONTINUOUS:
                formatters.append(lambda v: repr(float(v)))
            else:
                formatters.append(str)
        for i in range(table.n_rows):
            writer.writerow([fmt(col.values[i]) for fmt, col in zip(formatters, table.columns)])


def binarize_by_median(table: DataTable, columns: list[str]) -> DataTable:
    """Replace each named continuous column by 1{value > median}.

    The median of an even-length column is the lower of the two middle order
    statistics, so the rule stays exact on integer data.
    """
    targets = set(columns)
    for name in targets:
        if table.column(name).kind != CONTINUOUS:
            raise NotContinuousError(f"column {name!r} is not continuous")
    new_cols = []
    for c in table.columns:
        if c.name in targets:
            med = lower_median(c.values)
            new_cols.append(Column(c.name, BINARY, (c.values > med).astype(np.float64)))
        else:
            new_cols.append(c)
    return DataTable(tuple(new_cols), table.outcome)


def lower_median(values: np.ndarray) -> float:
    """Lower-middle order statistic: element at index ceil(n/2)-1 when sorted."""
    srt = np.sort(np.asarray(values, dtype=np.float64))
    n = len(srt)
    return float(srt[(n - 1) // 2])


def one_hot_encode(table: DataTable) -> DataTable:
    """Expand every categorical column into one binary column per level.

    New columns are named "<col>.<level>"; exactly one of them is 1 per row.
    """
    existing = set(table.column_names)
    new_cols: list[Column] = []
    for c in table.columns:
        if c.kind != CATEGORICAL:
            new_cols.append(c)
            continue
        for level in c.levels:
            gen_name = f"{c.name}.{level}"
            if gen_name in existing:
                raise NameCollisionError(
                    f"one-hot name {gen_name!r} collides with an existing column"
                )
            existing.add(gen_name)
            new_cols.append(
                Column(gen_name, BINARY, (c.values == level).astype(np.float64))
            )
    return DataTable(tuple(new_cols), table.outcome)


def project(table: DataTable, columns: list[str] | tuple[str, ...]) -> DataTable:
    """Restrict to the named columns; the outcome is always retained."""
    for name in columns:
        table.column(name)  # raises UnknownColumnError
    keep = set(columns) | {table.outcome}
    kept = tuple(c for c in table.columns if c.name in keep)
    return DataTable(kept, table.outcome)


def split(table: DataTable, train_fraction: float, seed: int) -> tuple[DataTable, DataTable]:
    """Disjoint train/test row partition by a seeded uniform shuffle."""
    if not 0.0 < train_fraction < 1.0:
        raise ValueError("train_fraction must be in (0, 1)")
    n = table.n_rows
    if n < 2:
        raise ValueError("need at least 2 rows to split")
    order = np.random.Generator(np.random.PCG64(seed)).permutation(n)
    n_train = int(math.floor(train_fraction * n + 0.5))
    n_train = min(max(n_train, 1), n - 1)
    return table.take_rows(order[:n_train]), table.take_rows(order[n_train:])
