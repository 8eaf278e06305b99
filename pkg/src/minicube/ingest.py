"""CSV ingestion: parsing, type inference, and cube construction.

The loader accepts headered CSV (RFC 4180 quoting, arbitrary single-char
delimiter) and infers one value type per column by scanning cell text:
a column is ``integer64`` if every non-empty cell is a plain integer
literal in 64-bit range, else ``float64`` if every non-empty cell is a
finite decimal literal, else ``text``.  Numeric columns become measures,
text columns dimensions.  Thousands separators and currency symbols are
not stripped — ``"1,234"`` is text.

``write_csv`` is the inverse: it serialises a cube back to CSV using
canonical cell text, such that reloading reproduces the same cube.
"""

from __future__ import annotations

import csv
import io
import math
import re
from dataclasses import dataclass

from .cube import (
    INT64_MAX,
    INT64_MIN,
    CellValue,
    ColumnMeta,
    Cube,
    ValueType,
    canonical_text,
)
from .errors import EmptyInput, MalformedCsv, RaggedRow

# Strict literals: Python's int()/float() accept underscores ("1_0") and
# inf/nan words, none of which count as numeric cells here.
_INT_RE = re.compile(r"[+-]?[0-9]+")
_FLOAT_RE = re.compile(r"[+-]?(?:[0-9]+\.?[0-9]*|\.[0-9]+)(?:[eE][+-]?[0-9]+)?")


@dataclass(frozen=True)
class IngestOptions:
    """Knobs for :func:`load_csv`.

    ``type_inference_sample`` is either ``"all"`` (scan every row; the
    default, so inference can never be contradicted by later rows) or a
    positive row count to scan from the top.
    """

    delimiter: str = ","
    type_inference_sample: int | str = "all"
    trim_cells: bool = True

    def __post_init__(self) -> None:
        if len(self.delimiter) != 1 or self.delimiter in "\"\r\n":
            raise ValueError("delimiter must be a single character and not a quote or newline")
        if self.type_inference_sample != "all":
            if not isinstance(self.type_inference_sample, int) or self.type_inference_sample < 1:
                raise ValueError("type_inference_sample must be 'all' or a positive integer")


DEFAULT_OPTIONS = IngestOptions()


def parse_int64(text: str) -> int | None:
    """Parse a strict 64-bit integer literal, or ``None`` if it is not one."""
    if not _INT_RE.fullmatch(text):
        return None
    value = int(text)
    if not INT64_MIN <= value <= INT64_MAX:
        return None
    return value


def parse_float64(text: str) -> float | None:
    """Parse a strict finite decimal literal, or ``None`` if it is not one."""
    if not _FLOAT_RE.fullmatch(text):
        return None
    value = float(text)
    if not math.isfinite(value):
        return None  # overflowed to inf
    return value


def parse_cell(text: str, value_type: ValueType, trim: bool = True) -> CellValue:
    """Convert one cell's text to a typed value.

    Total over all inputs: text that does not parse as the column's type
    becomes Null, and the empty string is Null for every type (including
    text, so text columns never contain empty-string cells).
    """
    if trim:
        text = text.strip()
    if text == "":
        return None
    if value_type == "text":
        return text
    if value_type == "integer64":
        return parse_int64(text)
    return parse_float64(text)


def _dedupe_names(raw_names: list[str]) -> list[str]:
    """Trim header names and disambiguate duplicates with " (2)", " (3)", ...

    Suffixed names are checked against everything assigned so far, so a
    literal "a (2)" header cannot collide with a generated one.
    """
    used: set[str] = set()
    counts: dict[str, int] = {}
    names: list[str] = []
    for raw in raw_names:
        base = raw.strip()
        n = counts.get(base, 0) + 1
        name = base if n == 1 else f"{base} ({n})"
        while name in used:
            n += 1
            name = f"{base} ({n})"
        counts[base] = n
        used.add(name)
        names.append(name)
    return names


def infer_schema(header: list[str], rows: list[list[str]]) -> list[ColumnMeta]:
    """Infer per-column value types and kinds from cell text.

    ``rows`` must already reflect the trim option: inference and
    :func:`parse_cell` have to see identical strings, otherwise a cell
    could pass inference yet fail to parse.  Empty cells never veto a
    numeric type; a column with no non-empty cells at all is text.
    """
    names = _dedupe_names(header)
    schema: list[ColumnMeta] = []
    for i, name in enumerate(names):
        could_be_int = True
        could_be_float = True
        saw_value = False
        for row in rows:
            cell = row[i]
            if cell == "":
                continue
            saw_value = True
            if could_be_int and parse_int64(cell) is None:
                could_be_int = False
            if not could_be_int:
                if parse_float64(cell) is None:
                    could_be_float = False
                    break
        if not saw_value:
            value_type: ValueType = "text"
        elif could_be_int:
            value_type = "integer64"
        elif could_be_float:
            value_type = "float64"
        else:
            value_type = "text"
        kind = "measure" if value_type != "text" else "dimension"
        schema.append(ColumnMeta(name=name, index=i, kind=kind, value_type=value_type))
    return schema


def _decode(source: bytes | str) -> str:
    if isinstance(source, str):
        # Tolerate a BOM in string input too.
        return source.lstrip("﻿")
    try:
        return source.decode("utf-8-sig")
    except UnicodeDecodeError as exc:
        raise MalformedCsv(f"input is not valid UTF-8: {exc}") from None


def _read_records(text: str, delimiter: str) -> list[tuple[int, list[str]]]:
    """Tokenise CSV text into (line_number, cells) records.

    Blank lines produce empty records and are dropped.  The line number is
    1-based and refers to the physical line on which the record ends (for
    single-line records, the record's own line).
    """
    reader = csv.reader(io.StringIO(text, newline=""), delimiter=delimiter, strict=True)
    records: list[tuple[int, list[str]]] = []
    try:
        for record in reader:
            if not record:
                continue  # blank line
            records.append((reader.line_num, record))
    except csv.Error as exc:
        raise MalformedCsv(f"line {reader.line_num}: {exc}") from None
    return records


def load_csv(
    source: bytes | str,
    options: IngestOptions | None = None,
    source_name: str = "<memory>",
) -> Cube:
    """Parse headered CSV into a cube.

    Raises :class:`EmptyInput` when there is no header row,
    :class:`RaggedRow` when a data row's cell count differs from the
    header's, and :class:`MalformedCsv` for undecodable or unparseable
    input (e.g. an unterminated quoted field).
    """
    opts = options or DEFAULT_OPTIONS
    records = _read_records(_decode(source), opts.delimiter)
    if not records:
        raise EmptyInput("no header row found")

    _, header = records[0]
    width = len(header)
    raw_rows: list[list[str]] = []
    for line_num, record in records[1:]:
        if len(record) != width:
            raise RaggedRow(
                f"line {line_num}: expected {width} cells, got {len(record)}"
            )
        raw_rows.append(record)

    if opts.trim_cells:
        rows = [[cell.strip() for cell in row] for row in raw_rows]
    else:
        rows = raw_rows

    if opts.type_inference_sample == "all":
        sample = rows
    else:
        sample = rows[: int(opts.type_inference_sample)]
    schema = infer_schema(header, sample)

    columns: list[tuple[CellValue, ...]] = []
    for meta in schema:
        i = meta.index
        vt = meta.value_type
        # Cells were trimmed above when the option is on; don't strip twice.
        columns.append(tuple(parse_cell(row[i], vt, trim=False) for row in rows))

    return Cube(
        schema=tuple(schema),
        columns=tuple(columns),
        row_count=len(rows),
        source_name=source_name,
    )


def load_csv_file(path: str, options: IngestOptions | None = None) -> Cube:
    """Load a CSV file from disk; the file name becomes the source name."""
    with open(path, "rb") as fh:
        data = fh.read()
    return load_csv(data, options, source_name=path)


def _csv_field(text: str, delimiter: str) -> str:
    if text != "" and not any(ch in text for ch in (delimiter, '"', "\r", "\n")):
        return text
    if text == "":
        return text  # caller quotes lone empty fields when needed
    return '"' + text.replace('"', '""') + '"'


def write_csv(cube: Cube, delimiter: str = ",") -> bytes:
    """Serialise a cube to CSV bytes using canonical cell text.

    Inverse of :func:`load_csv` under default options: reloading the
    output yields an equal cube.  A single-column row holding Null would
    otherwise serialise to a blank line (which the reader skips), so that
    one case is written as an explicitly quoted empty field.
    """
    out = io.StringIO()
    single = cube.column_count == 1

    def emit(cells: list[str]) -> None:
        fields = [_csv_field(c, delimiter) for c in cells]
        if single and fields[0] == "":
            fields[0] = '""'
        out.write(delimiter.join(fields) + "\n")

    emit([meta.name for meta in cube.schema])
    for i in range(cube.row_count):
        emit([canonical_text(col[i]) for col in cube.columns])
    return out.getvalue().encode("utf-8")
