"""Aggregation engine: filtering, grouping, and the fact table.

Evaluation groups the filtered rows by the drill-down columns and, per
group, accumulates the measure as a float64 sum plus a record count
(Null measure cells contribute 0 to the sum but still count).  Group
rows appear in first-occurrence order of the underlying data.

Two execution modes produce identical tables (sums within 1e-9 relative):

* serial — one pass over the selected rows;
* parallel — the selection is split into contiguous chunks of at least
  4096 rows, each chunk is scanned independently (in forked worker
  processes when available and worth it), and the per-chunk partials are
  merged in chunk order.  Merging in chunk order preserves global
  first-occurrence ordering, which keeps the output deterministic
  regardless of worker timing.
"""

from __future__ import annotations

import math
import multiprocessing
import os
import threading
from dataclasses import dataclass
from typing import Sequence, Union

from .cube import CellValue, ColumnMeta, Cube
from .errors import OffsetOutOfRange, StateInvalid
from .ingest import parse_float64, parse_int64
from .state import QueryState

MIN_CHUNK_ROWS = 4096

GroupKey = tuple[CellValue, ...]
_Selection = Union[range, list]  # selected row indices, ascending


@dataclass(frozen=True)
class ExecMode:
    """How to evaluate: serially, or in parallel with N workers.

    ``workers="auto"`` resolves to the machine's logical CPU count at
    evaluation time.
    """

    parallel: bool = False
    workers: int | str = "auto"

    def __post_init__(self) -> None:
        if self.workers != "auto" and (not isinstance(self.workers, int) or self.workers < 1):
            raise ValueError("workers must be 'auto' or a positive integer")

    def resolved_workers(self) -> int:
        if self.workers == "auto":
            return os.cpu_count() or 1
        return int(self.workers)

    @property
    def label(self) -> str:
        return "parallel" if self.parallel else "serial"


SERIAL = ExecMode(parallel=False)
PARALLEL = ExecMode(parallel=True, workers="auto")


@dataclass(frozen=True)
class AggregateRow:
    key: GroupKey
    sum: float
    record_count: int


@dataclass(frozen=True)
class AggregateTable:
    drilldown_names: tuple[str, ...]
    measure_name: str
    rows: tuple[AggregateRow, ...]
    total_sum: float
    total_count: int


def validate_state(cube: Cube, state: QueryState) -> None:
    """Raise :class:`StateInvalid` unless the state is coherent for the cube.

    States built through the :mod:`minicube.state` operations always pass;
    this guards hand-built or deserialised states.
    """
    try:
        measure = cube.column_by_name(state.measure)
    except Exception as exc:
        raise StateInvalid(f"measure: {exc}") from None
    if measure.kind != "measure":
        raise StateInvalid(f"measure column {state.measure!r} is a dimension")
    seen: set[str] = set()
    for name in state.drilldowns:
        try:
            cube.column_by_name(name)
        except Exception as exc:
            raise StateInvalid(f"drill-down: {exc}") from None
        if name == state.measure:
            raise StateInvalid(f"drill-down {name!r} is the measure")
        if name in seen:
            raise StateInvalid(f"duplicate drill-down {name!r}")
        seen.add(name)
    for flt in state.filters:
        if flt.column not in seen:
            raise StateInvalid(f"filter on {flt.column!r}, which is not drilled down")


# --- filtering ---------------------------------------------------------------


def _typed_targets(meta: ColumnMeta, values: set[str]) -> set:
    """Convert filter text values to typed cells for one column.

    A text value matches a cell iff the cell's canonical text equals it,
    so for numeric columns only strings that round-trip through the
    canonical rendering can match anything ("2.50" matches no float64
    cell, whose canonical form would be "2.5").  The empty string matches
    Null in every column type.
    """
    targets: set = set()
    for text in values:
        if text == "":
            targets.add(None)
        elif meta.value_type == "text":
            targets.add(text)
        elif meta.value_type == "integer64":
            v = parse_int64(text)
            if v is not None and str(v) == text:
                targets.add(v)
        else:
            v = parse_float64(text)
            if v is not None and repr(v) == text:
                targets.add(v)
    return targets


def apply_filters(cube: Cube, filters: Sequence) -> list[int]:
    """Row indices (ascending) matching all filters.

    Filters on the same column OR together; different columns AND.
    """
    by_column: dict[str, set[str]] = {}
    for flt in filters:
        by_column.setdefault(flt.column, set()).add(flt.value)
    matchers: list[tuple[tuple[CellValue, ...], set]] = []
    for name, values in by_column.items():
        meta = cube.column_by_name(name)
        matchers.append((cube.columns[meta.index], _typed_targets(meta, values)))
    if not matchers:
        return list(range(cube.row_count))
    first_col, first_targets = matchers[0]
    rest = matchers[1:]
    out: list[int] = []
    for i in range(cube.row_count):
        if first_col[i] in first_targets and all(col[i] in t for col, t in rest):
            out.append(i)
    return out


def _selection(cube: Cube, state: QueryState) -> _Selection:
    if not state.filters:
        return range(cube.row_count)
    return apply_filters(cube, state.filters)


# --- scanning ----------------------------------------------------------------


def _scan_span(
    key_cols: list[tuple[CellValue, ...]],
    measure_col: tuple[CellValue, ...],
    selection: _Selection,
    lo: int,
    hi: int,
) -> dict[GroupKey, list]:
    """Group-by over ``selection[lo:hi]``; dict order = first occurrence."""
    if isinstance(selection, range):
        a = selection.start + lo
        b = selection.start + hi
        measures = measure_col[a:b]
        key_slices = [col[a:b] for col in key_cols]
    else:
        picked = selection[lo:hi]
        measures = [measure_col[i] for i in picked]
        key_slices = [[col[i] for i in picked] for col in key_cols]

    groups: dict[GroupKey, list] = {}
    if key_cols:
        for key, m in zip(zip(*key_slices), measures):
            acc = groups.get(key)
            if acc is None:
                acc = groups[key] = [0.0, 0]
            if m is not None:
                acc[0] += m
            acc[1] += 1
    else:
        total = 0.0
        count = 0
        for m in measures:
            if m is not None:
                total += m
            count += 1
        if count:
            groups[()] = [total, count]
    return groups


def _merge_partials(partials: list[dict[GroupKey, list]]) -> dict[GroupKey, list]:
    merged: dict[GroupKey, list] = {}
    for part in partials:
        for key, (s, c) in part.items():
            acc = merged.get(key)
            if acc is None:
                merged[key] = [s, c]
            else:
                acc[0] += s
                acc[1] += c
    return merged


def _chunk_bounds(n: int, workers: int) -> list[tuple[int, int]]:
    if n == 0:
        return []
    size = max(MIN_CHUNK_ROWS, math.ceil(n / workers))
    return [(lo, min(lo + size, n)) for lo in range(0, n, size)]


# Worker-process plumbing.  The cube's columns are handed to workers via a
# module global captured at fork time, so nothing is pickled per task; the
# lock serialises concurrent parallel evaluations from different threads.
_fork_lock = threading.Lock()
_fork_payload: tuple | None = None


def _scan_task(bounds: tuple[int, int]) -> dict[GroupKey, list]:
    key_cols, measure_col, selection = _fork_payload  # type: ignore[misc]
    return _scan_span(key_cols, measure_col, selection, bounds[0], bounds[1])


def _fork_available() -> bool:
    return "fork" in multiprocessing.get_all_start_methods()


def _scan_forked(
    key_cols: list,
    measure_col: tuple,
    selection: _Selection,
    bounds: list[tuple[int, int]],
    workers: int,
) -> list[dict[GroupKey, list]]:
    global _fork_payload
    ctx = multiprocessing.get_context("fork")
    with _fork_lock:
        _fork_payload = (key_cols, measure_col, selection)
        try:
            pool = ctx.Pool(processes=min(workers, len(bounds)))
        finally:
            _fork_payload = None  # workers hold their fork-time copy
    try:
        return pool.map(_scan_task, bounds)
    finally:
        pool.close()
        pool.join()


# --- public evaluation -------------------------------------------------------


def evaluate(cube: Cube, state: QueryState, mode: ExecMode = SERIAL) -> AggregateTable:
    """Aggregate the cube under the given state.

    With no drill-downs the result has no group rows, only the grand
    totals.  Serial and parallel modes return the same table.
    """
    validate_state(cube, state)
    key_cols = [cube.columns[cube.column_by_name(n).index] for n in state.drilldowns]
    measure_col = cube.columns[cube.column_by_name(state.measure).index]
    selection = _selection(cube, state)
    n = len(selection)

    if not mode.parallel:
        groups = _scan_span(key_cols, measure_col, selection, 0, n)
    else:
        workers = mode.resolved_workers()
        bounds = _chunk_bounds(n, workers)
        if len(bounds) > 1 and workers > 1 and _fork_available():
            partials = _scan_forked(key_cols, measure_col, selection, bounds, workers)
        else:
            partials = [_scan_span(key_cols, measure_col, selection, lo, hi) for lo, hi in bounds]
        groups = _merge_partials(partials)

    if state.drilldowns:
        rows = tuple(AggregateRow(key, s, c) for key, (s, c) in groups.items())
        total_sum = 0.0
        total_count = 0
        for row in rows:
            total_sum += row.sum
            total_count += row.record_count
    else:
        rows = ()
        s, c = groups.get((), (0.0, 0))
        total_sum, total_count = float(s), c

    return AggregateTable(
        drilldown_names=tuple(state.drilldowns),
        measure_name=state.measure,
        rows=rows,
        total_sum=total_sum,
        total_count=total_count,
    )


def fact_table(
    cube: Cube, offset: int = 0, limit: int | str = "all"
) -> tuple[tuple[ColumnMeta, ...], list[tuple[CellValue, ...]], int]:
    """A window of raw rows: (schema, rows, total row count).

    ``offset`` may equal the row count (empty window at the end);
    anything beyond raises :class:`OffsetOutOfRange`.
    """
    if not isinstance(offset, int) or offset < 0 or offset > cube.row_count:
        raise OffsetOutOfRange(
            f"offset {offset!r} out of range for {cube.row_count} rows"
        )
    if limit == "all":
        stop = cube.row_count
    else:
        if not isinstance(limit, int) or limit < 1:
            raise ValueError("limit must be 'all' or a positive integer")
        stop = min(offset + limit, cube.row_count)
    rows = [cube.row(i) for i in range(offset, stop)]
    return cube.schema, rows, cube.row_count
