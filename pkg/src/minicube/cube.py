"""Immutable, column-oriented data cube.

A cube is a rectangular table stored column-wise.  Cells are plain Python
values: ``int`` for 64-bit integers, ``float`` for finite doubles, ``str``
for text, and ``None`` for missing values.  NaN and infinities are never
stored; ingest maps them to ``None``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

from .errors import IndexOutOfRange, UnknownColumn

CellValue = int | float | str | None

ColumnKind = Literal["dimension", "measure"]
ValueType = Literal["integer64", "float64", "text"]

VALUE_TYPES: tuple[ValueType, ...] = ("integer64", "float64", "text")

INT64_MIN = -(2**63)
INT64_MAX = 2**63 - 1


def canonical_text(cell: CellValue) -> str:
    """Render a cell as its canonical text form.

    This is the single rendering used everywhere a cell crosses a text
    boundary: CSV output, table display, filter matching, JSON keys and
    plot axis labels.  Integers render without a decimal point, floats in
    their shortest round-trip form (so ``558430000.0`` keeps the ``.0``),
    and Null renders as the empty string.
    """
    if cell is None:
        return ""
    if isinstance(cell, str):
        return cell
    if isinstance(cell, float):
        return repr(cell)
    return str(cell)


@dataclass(frozen=True)
class ColumnMeta:
    """Schema entry for one column."""

    name: str
    index: int
    kind: ColumnKind
    value_type: ValueType


@dataclass(frozen=True)
class Cube:
    """The dataset itself plus its schema.

    ``columns[i]`` is the full value tuple for schema entry ``i``; every
    column has exactly ``row_count`` cells.  Instances are frozen and all
    query operations derive new data rather than mutating the cube, so a
    cube can be shared freely across threads and worker processes.
    """

    schema: tuple[ColumnMeta, ...]
    columns: tuple[tuple[CellValue, ...], ...]
    row_count: int
    source_name: str

    def __post_init__(self) -> None:
        if len(self.schema) != len(self.columns):
            raise ValueError("schema and column storage disagree")
        for meta, col in zip(self.schema, self.columns):
            if len(col) != self.row_count:
                raise ValueError(
                    f"column {meta.name!r} has {len(col)} cells, expected {self.row_count}"
                )

    @property
    def column_count(self) -> int:
        return len(self.schema)

    def column_by_name(self, name: str) -> ColumnMeta:
        """Look up a schema entry by exact column name."""
        for meta in self.schema:
            if meta.name == name:
                return meta
        raise UnknownColumn(f"no column named {name!r}")

    def column_values(self, name: str) -> tuple[CellValue, ...]:
        """The full value tuple for a named column."""
        return self.columns[self.column_by_name(name).index]

    def row(self, index: int) -> tuple[CellValue, ...]:
        """One row as a tuple of cells, in schema order."""
        if not 0 <= index < self.row_count:
            raise IndexOutOfRange(
                f"row {index} out of range for {self.row_count} rows"
            )
        return tuple(col[index] for col in self.columns)

    def measure_names(self) -> list[str]:
        return [m.name for m in self.schema if m.kind == "measure"]

    def dimension_names(self) -> list[str]:
        return [m.name for m in self.schema if m.kind == "dimension"]
