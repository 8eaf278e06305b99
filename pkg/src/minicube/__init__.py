"""minicube: an in-memory OLAP cube engine for CSV data.

Load a headered CSV into an immutable columnar cube, then aggregate a
measure across drill-down dimensions with optional filters — serially or
in parallel — render the results as text tables or SVG plots, serve the
whole thing over HTTP, or time the canonical 6-step session with the
benchmark harness.
"""

from .bench import (
    BenchReport,
    StepStats,
    combine_reports,
    generate_synthetic,
    render_report_text,
    report_to_json,
    run_protocol,
)
from .cube import CellValue, ColumnMeta, Cube, canonical_text
from .engine import (
    PARALLEL,
    SERIAL,
    AggregateRow,
    AggregateTable,
    ExecMode,
    apply_filters,
    evaluate,
    fact_table,
)
from .errors import CubeError
from .ingest import IngestOptions, infer_schema, load_csv, load_csv_file, parse_cell, write_csv
from .plot import PlotSpec, build_plot, html_img_tag, plot_spec_to_json, render_image
from .server import ServerConfig, create_app, run_server
from .state import (
    Filter,
    QueryState,
    drilldown_add,
    drilldown_remove,
    filter_add,
    filter_remove,
    filters_clear,
    new_state,
    set_measure,
)

__version__ = "0.1.0"

__all__ = [
    "AggregateRow",
    "AggregateTable",
    "BenchReport",
    "CellValue",
    "ColumnMeta",
    "Cube",
    "CubeError",
    "ExecMode",
    "Filter",
    "IngestOptions",
    "PARALLEL",
    "PlotSpec",
    "QueryState",
    "SERIAL",
    "ServerConfig",
    "StepStats",
    "apply_filters",
    "build_plot",
    "canonical_text",
    "combine_reports",
    "create_app",
    "drilldown_add",
    "drilldown_remove",
    "evaluate",
    "fact_table",
    "filter_add",
    "filter_remove",
    "filters_clear",
    "generate_synthetic",
    "html_img_tag",
    "infer_schema",
    "load_csv",
    "load_csv_file",
    "new_state",
    "parse_cell",
    "plot_spec_to_json",
    "render_image",
    "render_report_text",
    "report_to_json",
    "run_protocol",
    "run_server",
    "set_measure",
    "write_csv",
    "__version__",
]
