"""Plain-text table rendering for the CLI and the benchmark harness.

Numeric display convention: sums are float64 and always show a decimal
point ("558430000.0"), record counts and integer cells print bare
("31000", "2010").  Output is deterministic: the same table always
renders to the same bytes.
"""

from __future__ import annotations

from .cube import CellValue, ColumnMeta, canonical_text
from .engine import AggregateTable

_GAP = "  "


def _render_grid(headers: list[str], rows: list[list[str]], right: list[bool]) -> str:
    widths = [len(h) for h in headers]
    for row in rows:
        for i, cell in enumerate(row):
            widths[i] = max(widths[i], len(cell))

    def line(cells: list[str]) -> str:
        padded = [
            cell.rjust(widths[i]) if right[i] else cell.ljust(widths[i])
            for i, cell in enumerate(cells)
        ]
        return _GAP.join(padded).rstrip()

    out = [line(headers), _GAP.join("-" * w for w in widths)]
    out.extend(line(row) for row in rows)
    return "\n".join(out) + "\n"


def render_aggregate(table: AggregateTable) -> str:
    """Aggregate table text: group rows plus a final Summary row.

    With no drill-downs this collapses to the single-row summary layout
    (header "Summary | Sum of All "<measure>" | Record Count").
    """
    if not table.drilldown_names:
        headers = ["Summary", f'Sum of All "{table.measure_name}"', "Record Count"]
        rows = [["Summary", canonical_text(table.total_sum), str(table.total_count)]]
        return _render_grid(headers, rows, [False, True, True])

    names = list(table.drilldown_names)
    headers = names + [table.measure_name, "Record Count"]
    right = [False] * len(names) + [True, True]
    rows = [
        [canonical_text(cell) for cell in r.key]
        + [canonical_text(r.sum), str(r.record_count)]
        for r in table.rows
    ]
    summary = ["Summary"] + [""] * (len(names) - 1)
    summary += [canonical_text(table.total_sum), str(table.total_count)]
    rows.append(summary)
    return _render_grid(headers, rows, right)


def render_facts(
    schema: tuple[ColumnMeta, ...],
    rows: list[tuple[CellValue, ...]],
    total: int,
    offset: int = 0,
) -> str:
    """Raw fact-table window as text, with a trailing row-range note."""
    headers = [m.name for m in schema]
    right = [m.kind == "measure" for m in schema]
    text_rows = [[canonical_text(c) for c in row] for row in rows]
    grid = _render_grid(headers, text_rows, right)
    return grid + f"[{len(rows)} of {total} rows, offset {offset}]\n"
