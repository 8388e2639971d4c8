"""Columnar data container and CSV ingestion.

Every visualization layer consumes a :class:`DataTable`: one column per
field, one row per sample.  The only two columns required by the
geographic layers are ``lat`` and ``lon``.  Tables are immutable; all
wrangling operations return new tables.
"""

from __future__ import annotations

import csv
import math
from typing import Iterable, Mapping

import numpy as np

__all__ = ["DataTable", "read_csv", "write_csv", "CsvParseError"]


class CsvParseError(ValueError):
    """Raised for structural CSV problems (ragged rows, duplicate headers)."""


def _as_column(values) -> np.ndarray:
    """Coerce a python sequence or array to a float64 or string column."""
    arr = np.asarray(values)
    if arr.ndim != 1:
        arr = np.atleast_1d(arr.squeeze())
    if arr.ndim != 1:
        raise ValueError("columns must be one-dimensional")
    if arr.dtype.kind in "iufb":
        arr = arr.astype(np.float64)
    else:
        arr = arr.astype(str)
    arr.flags.writeable = False
    return arr


class DataTable:
    """Ordered mapping of column name to a float64 or string vector.

    All columns have the same length.  Instances are immutable and safe
    to share across threads.
    """

    def __init__(self, columns: Mapping[str, Iterable]):
        cols: dict[str, np.ndarray] = {}
        nrows = None
        for name, values in columns.items():
            col = _as_column(values)
            if nrows is None:
                nrows = len(col)
            elif len(col) != nrows:
                raise ValueError(
                    f"column {name!r} has length {len(col)}, expected {nrows}"
                )
            cols[str(name)] = col
        self._columns = cols
        self.nrows = 0 if nrows is None else int(nrows)

    # -- basic access ---------------------------------------------------

    @property
    def columns(self) -> list[str]:
        return list(self._columns)

    def __getitem__(self, name: str) -> np.ndarray:
        try:
            return self._columns[name]
        except KeyError:
            raise KeyError(f"no column named {name!r}") from None

    def __contains__(self, name: str) -> bool:
        return name in self._columns

    def __len__(self) -> int:
        return self.nrows

    def __repr__(self) -> str:
        return f"DataTable({self.nrows} rows x {len(self._columns)} cols: {', '.join(self._columns)})"

    def row(self, i: int) -> dict:
        """Attribute map of row ``i`` (used by tooltips)."""
        return {name: col[i] for name, col in self._columns.items()}

    def to_dict(self) -> dict[str, np.ndarray]:
        return dict(self._columns)

    # -- wrangling ------------------------------------------------------

    def filter(self, mask) -> "DataTable":
        """Rows where ``mask`` is true, order preserved."""
        mask = np.asarray(mask, dtype=bool)
        if len(mask) != self.nrows:
            raise ValueError(
                f"mask length {len(mask)} != number of rows {self.nrows}"
            )
        return DataTable({n: c[mask] for n, c in self._columns.items()})

    def group_by(self, column: str) -> dict:
        """Partition rows by the distinct values of ``column``."""
        col = self[column]
        groups = {}
        for value in _distinct(col):
            if isinstance(value, float) and math.isnan(value):
                mask = np.isnan(col)
            else:
                mask = col == value
            groups[value] = self.filter(mask)
        return groups

    def rename(self, old: str, new: str) -> "DataTable":
        if old not in self._columns:
            raise KeyError(f"no column named {old!r}")
        return DataTable(
            {(new if n == old else n): c for n, c in self._columns.items()}
        )

    def drop_column(self, name: str) -> "DataTable":
        if name not in self._columns:
            raise KeyError(f"no column named {name!r}")
        return DataTable(
            {n: c for n, c in self._columns.items() if n != name}
        )


def _distinct(col: np.ndarray):
    """Distinct values of a column in order of first appearance."""
    seen = set()
    out = []
    for v in col.tolist():
        key = "nan" if isinstance(v, float) and math.isnan(v) else v
        if key not in seen:
            seen.add(key)
            out.append(v)
    return out


def _parse_cell(cell: str) -> float:
    if cell == "":
        return math.nan
    return float(cell)


def read_csv(path) -> DataTable:
    """Read a CSV file into a :class:`DataTable`.

    The first row is the header.  A column parses to float64 when every
    non-empty cell is numeric, otherwise it stays a string column; empty
    cells of numeric columns become NaN.
    """
    with open(path, "r", newline="", encoding="utf-8") as fin:
        reader = csv.reader(fin)
        try:
            header = next(reader)
        except StopIteration:
            raise CsvParseError(f"{path}: empty file, no header") from None
        if len(set(header)) != len(header):
            dupes = sorted({h for h in header if header.count(h) > 1})
            raise CsvParseError(f"{path}: duplicate header names {dupes}")
        raw: list[list[str]] = [[] for _ in header]
        for row in reader:
            if not row:
                continue
            if len(row) != len(header):
                raise CsvParseError(
                    f"{path}: line {reader.line_num}: expected "
                    f"{len(header)} fields, got {len(row)}"
                )
            for cell, bucket in zip(row, raw):
                bucket.append(cell)
    columns = {}
    for name, cells in zip(header, raw):
        try:
            columns[name] = np.array([_parse_cell(c) for c in cells], dtype=np.float64)
        except ValueError:
            columns[name] = np.array(cells, dtype=str)
    return DataTable(columns)


def write_csv(table: DataTable, path) -> None:
    """Write a table as CSV; floats at 17 significant digits (round-trip safe)."""
    with open(path, "w", newline="", encoding="utf-8") as fout:
        writer = csv.writer(fout)
        names = table.columns
        writer.writerow(names)
        cols = [table[n] for n in names]
        for i in range(table.nrows):
            row = []
            for col in cols:
                v = col[i]
                if col.dtype.kind == "f":
                    row.append("" if math.isnan(v) else repr(float(v)))
                else:
                    row.append(str(v))
            writer.writerow(row)
