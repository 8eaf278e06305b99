"""Query state: the user's current view of a cube.

A state is one measure, an ordered list of drill-down columns, and a set
of filters.  All operations are pure — they validate against the cube and
return a new state, leaving the input untouched — so states can be kept
in URLs, replayed, and shared across threads.

Filter values are canonical cell text (see :func:`minicube.cube.canonical_text`);
a filter may only target a column that is currently drilled down.  Filters
on the same column are OR-ed together, filters across different columns
are AND-ed.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .cube import Cube
from .errors import (
    AlreadyDrilled,
    ColumnInUse,
    FilterExists,
    FilterNotFound,
    NotAMeasure,
    NotDrilled,
)


@dataclass(frozen=True)
class Filter:
    """Keep only rows whose cell in ``column`` renders as ``value``."""

    column: str
    value: str


@dataclass(frozen=True)
class QueryState:
    measure: str
    drilldowns: tuple[str, ...] = ()
    filters: tuple[Filter, ...] = ()


def new_state(cube: Cube, measure: str) -> QueryState:
    """Fresh state: the given measure, no drill-downs, no filters."""
    _require_measure(cube, measure)
    return QueryState(measure=measure)


def set_measure(cube: Cube, state: QueryState, measure: str) -> QueryState:
    _require_measure(cube, measure)
    if measure in state.drilldowns:
        raise ColumnInUse(f"{measure!r} is currently a drill-down column")
    return replace(state, measure=measure)


def drilldown_add(cube: Cube, state: QueryState, column: str) -> QueryState:
    cube.column_by_name(column)
    if column == state.measure:
        raise ColumnInUse(f"{column!r} is the current measure")
    if column in state.drilldowns:
        raise AlreadyDrilled(f"already drilled down on {column!r}")
    return replace(state, drilldowns=state.drilldowns + (column,))


def drilldown_remove(cube: Cube, state: QueryState, column: str) -> QueryState:
    """Remove a drill-down; any filters targeting it go with it."""
    cube.column_by_name(column)
    if column not in state.drilldowns:
        raise NotDrilled(f"not drilled down on {column!r}")
    return replace(
        state,
        drilldowns=tuple(c for c in state.drilldowns if c != column),
        filters=tuple(f for f in state.filters if f.column != column),
    )


def filter_add(state: QueryState, column: str, value: str) -> QueryState:
    if column not in state.drilldowns:
        raise NotDrilled(f"cannot filter {column!r}: not a drill-down column")
    flt = Filter(column=column, value=value)
    if flt in state.filters:
        raise FilterExists(f"filter {column!r} = {value!r} already present")
    return replace(state, filters=state.filters + (flt,))


def filter_remove(state: QueryState, column: str, value: str) -> QueryState:
    flt = Filter(column=column, value=value)
    if flt not in state.filters:
        raise FilterNotFound(f"no filter {column!r} = {value!r}")
    return replace(state, filters=tuple(f for f in state.filters if f != flt))


def filters_clear(state: QueryState) -> QueryState:
    return replace(state, filters=())


def _require_measure(cube: Cube, name: str) -> None:
    meta = cube.column_by_name(name)
    if meta.kind != "measure":
        raise NotAMeasure(f"{name!r} is a dimension, not a measure")
