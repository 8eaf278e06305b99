"""JSON shapes shared by the HTTP API and the CLI's --out json mode.

Cell values that act as identifiers (group keys, fact cells) are
rendered as canonical text so the wire format is uniform and filter
values copied from responses always match.
"""

from __future__ import annotations

from .cube import CellValue, ColumnMeta, canonical_text
from .engine import AggregateTable


def schema_to_json(schema: tuple[ColumnMeta, ...]) -> list[dict]:
    return [
        {"name": m.name, "index": m.index, "kind": m.kind, "value_type": m.value_type}
        for m in schema
    ]


def aggregate_to_json(table: AggregateTable, elapsed_seconds: float | None = None) -> dict:
    doc = {
        "drilldown_names": list(table.drilldown_names),
        "measure_name": table.measure_name,
        "rows": [
            {
                "key": [canonical_text(c) for c in row.key],
                "sum": row.sum,
                "record_count": row.record_count,
            }
            for row in table.rows
        ],
        "total_sum": table.total_sum,
        "total_count": table.total_count,
    }
    if elapsed_seconds is not None:
        doc["elapsed_seconds"] = round(elapsed_seconds, 6)
    return doc


def facts_to_json(
    schema: tuple[ColumnMeta, ...],
    rows: list[tuple[CellValue, ...]],
    total: int,
) -> dict:
    return {
        "schema": schema_to_json(schema),
        "rows": [[canonical_text(c) for c in row] for row in rows],
        "total": total,
    }
