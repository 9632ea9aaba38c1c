"""CSV-backed datasets and per-attribute value series.

A loaded dataset is immutable; mutation helpers return new instances so
that concurrent readers always see a consistent snapshot.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field


class DatasetError(Exception):
    """Raised for unreadable files, ragged rows, bad columns or values."""


@dataclass(frozen=True)
class Column:
    name: str
    kind: str  # "numeric" | "text"


@dataclass(frozen=True)
class Dataset:
    name: str
    columns: tuple[Column, ...]
    rows: tuple[tuple[str, ...], ...]  # raw cells, one tuple per row, ids are positions
    primary_label: str | None = None

    def column_index(self, name: str) -> int:
        for i, col in enumerate(self.columns):
            if col.name == name:
                return i
        raise DatasetError(f"unknown column: {name!r}")

    def column(self, name: str) -> Column:
        return self.columns[self.column_index(name)]

    @property
    def column_names(self) -> list[str]:
        return [c.name for c in self.columns]

    def cell(self, row_id: int, column: str) -> str:
        return self.rows[row_id][self.column_index(column)]

    def numeric_value(self, row_id: int, column: str) -> float:
        col = self.column(column)
        if col.kind != "numeric":
            raise DatasetError(f"column {column!r} is not numeric")
        return _parse_number(self.cell(row_id, column))

    def with_row(self, cells: dict[str, str]) -> "Dataset":
        """Return a dataset extended with one row (cells keyed by column name)."""
        missing = [c.name for c in self.columns if c.name not in cells]
        if missing:
            raise DatasetError(f"row is missing values for columns: {missing}")
        row = []
        for col in self.columns:
            raw = str(cells[col.name])
            if col.kind == "numeric":
                _parse_number(raw)  # validate early
            row.append(raw)
        return Dataset(self.name, self.columns, self.rows + (tuple(row),),
                       self.primary_label)

    def without_row(self, row_id: int) -> "Dataset":
        if not 0 <= row_id < len(self.rows):
            raise DatasetError(f"unknown row id: {row_id}")
        rows = self.rows[:row_id] + self.rows[row_id + 1:]
        return Dataset(self.name, self.columns, rows, self.primary_label)

    def to_csv(self, path, delimiter: str = ",") -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, delimiter=delimiter)
            writer.writerow(self.column_names)
            writer.writerows(self.rows)


@dataclass(frozen=True)
class AttributeSeries:
    """Sorted distinct values of one numeric column, with multiplicities."""
    attribute: str
    values: tuple[float, ...]                   # strictly ascending
    multiplicity: dict[float, int] = field(compare=False)
    occupants: dict[float, tuple[int, ...]] = field(compare=False)

    @property
    def min(self) -> float:
        return self.values[0]

    @property
    def max(self) -> float:
        return self.values[-1]

    @property
    def total(self) -> int:
        """Number of underlying rows (sum of multiplicities)."""
        return sum(self.multiplicity.values())

    def size_of(self, values) -> int:
        return sum(self.multiplicity[v] for v in values)

    def with_value(self, x: float, row_id: int | None = None) -> "AttributeSeries":
        """New series with one occurrence of x added."""
        if not math.isfinite(x):
            raise DatasetError(f"non-finite value: {x}")
        mult = dict(self.multiplicity)
        occ = dict(self.occupants)
        mult[x] = mult.get(x, 0) + 1
        occ[x] = occ.get(x, ()) + ((row_id,) if row_id is not None else ())
        values = self.values if x in self.multiplicity else tuple(sorted(set(self.values) | {x}))
        return AttributeSeries(self.attribute, values, mult, occ)

    def without_value(self, x: float) -> "AttributeSeries":
        """New series with one occurrence of x removed."""
        if x not in self.multiplicity:
            raise DatasetError(f"value {x} not present in series {self.attribute!r}")
        mult = dict(self.multiplicity)
        occ = dict(self.occupants)
        mult[x] -= 1
        if mult[x] == 0:
            del mult[x]
            occ.pop(x, None)
            values = tuple(v for v in self.values if v != x)
        else:
            occ[x] = occ.get(x, ())[:-1]
            values = self.values
        return AttributeSeries(self.attribute, values, mult, occ)


def _parse_number(raw: str) -> float:
    try:
        val = float(raw)
    except ValueError:
        raise DatasetError(f"cannot parse {raw!r} as a number") from None
    if not math.isfinite(val):
        raise DatasetError(f"non-finite numeric cell: {raw!r}")
    return val


def _is_numeric_cell(raw: str) -> bool:
    try:
        return math.isfinite(float(raw))
    except ValueError:
        return False


def load_csv(path, delimiter: str = ",", header: bool = True,
             name: str | None = None) -> Dataset:
    """Load a UTF-8 CSV file into a Dataset.

    Column kinds are detected: a column is numeric when every non-empty
    cell parses as a finite real. Empty cells inside a numeric column are
    rejected (missing values carry no defined semantics here).
    """
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            raw_rows = list(csv.reader(fh, delimiter=delimiter))
    except OSError as exc:
        raise DatasetError(f"cannot read {path}: {exc}") from None
    if not raw_rows:
        raise DatasetError(f"{path}: empty file (no header row)")
    if header:
        header_cells, data = raw_rows[0], raw_rows[1:]
    else:
        width = len(raw_rows[0])
        header_cells = [f"c{i}" for i in range(width)]
        data = raw_rows
    if len(set(header_cells)) != len(header_cells):
        raise DatasetError("duplicate column names in header")
    width = len(header_cells)
    for i, row in enumerate(data):
        if len(row) != width:
            raise DatasetError(f"ragged row {i}: expected {width} cells, got {len(row)}")

    columns = []
    for j, cname in enumerate(header_cells):
        cells = [row[j] for row in data]
        non_empty = [c for c in cells if c.strip() != ""]
        numeric = bool(non_empty) and all(_is_numeric_cell(c) for c in non_empty)
        if numeric and len(non_empty) != len(cells):
            raise DatasetError(f"column {cname!r}: missing numeric cells are not supported")
        columns.append(Column(cname, "numeric" if numeric else "text"))

    primary = next((c.name for c in columns if c.kind == "text"), None)
    ds_name = name if name is not None else _stem(path)
    return Dataset(ds_name, tuple(columns), tuple(tuple(r) for r in data), primary)


def _stem(path) -> str:
    import os
    return os.path.splitext(os.path.basename(str(path)))[0]


def attribute_series(ds: Dataset, attr: str) -> AttributeSeries:
    """Distinct sorted values of a numeric column, with multiplicities
    and the row ids carrying each value."""
    col = ds.column(attr)  # raises on unknown column
    if col.kind != "numeric":
        raise DatasetError(f"column {attr!r} is not numeric")
    j = ds.column_index(attr)
    mult: dict[float, int] = {}
    occ: dict[float, list[int]] = {}
    for row_id, row in enumerate(ds.rows):
        v = _parse_number(row[j])
        mult[v] = mult.get(v, 0) + 1
        occ.setdefault(v, []).append(row_id)
    values = tuple(sorted(mult))
    return AttributeSeries(attr, values, mult, {v: tuple(ids) for v, ids in occ.items()})


def series_from_values(attribute: str, raw_values) -> AttributeSeries:
    """Build a series straight from an iterable of numbers (test/CLI helper)."""
    mult: dict[float, int] = {}
    occ: dict[float, list[int]] = {}
    for i, v in enumerate(raw_values):
        v = float(v)
        if not math.isfinite(v):
            raise DatasetError(f"non-finite value: {v}")
        mult[v] = mult.get(v, 0) + 1
        occ.setdefault(v, []).append(i)
    if not mult:
        raise DatasetError("empty series")
    return AttributeSeries(attribute, tuple(sorted(mult)), mult,
                           {v: tuple(ids) for v, ids in occ.items()})
