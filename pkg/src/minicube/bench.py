"""Benchmark harness: a fixed 6-step interactive session, timed.

The protocol walks the same path an analyst would: (1) display the full
fact table, (2) aggregate a measure, (3) drill down three times, (4)
apply a filter, (5) remove it, (6) draw a scatter plot.  Column choices
are fixed by 1-based position — drill-downs on columns 1, 3 and 5, the
measure and scatter-y on column 6, the filter on column 5 with value
"2009" — so runs are comparable across datasets of the same shape.

Each step is timed with a monotonic clock, *including* the text/SVG
rendering of its output (displaying is part of the interaction being
measured; documented so the numbers are interpretable).  Step outputs
must be byte-identical across trials and across execution modes — the
harness verifies this, so a report doubles as a determinism check.
"""

from __future__ import annotations

import hashlib
import os
import random
import statistics
import time
from dataclasses import dataclass

from . import state as qs
from .cube import ColumnMeta, Cube
from .display import render_aggregate, render_facts
from .engine import SERIAL, ExecMode, evaluate, fact_table
from .errors import ProtocolUnsupported
from .plot import build_plot, render_image

STEP_LABELS = (
    "display fact table",
    "initial aggregate",
    "three drill-downs",
    "apply filter",
    "remove filter",
    "scatter plot",
)

_FILTER_VALUE = "2009"


@dataclass(frozen=True)
class StepStats:
    """Timing summary for one protocol step, in seconds."""

    step: int
    label: str
    mean_s: float
    min_s: float
    max_s: float
    stddev_s: float


@dataclass(frozen=True)
class BenchReport:
    dataset_name: str
    row_count: int
    column_count: int
    trials: int
    logical_cpus: int
    modes: dict[str, tuple[StepStats, ...]]
    step_output_sha256: tuple[str, ...]

    def total_mean_s(self, mode: str) -> float:
        return sum(s.mean_s for s in self.modes[mode])


def _protocol_columns(cube: Cube) -> tuple[str, str, str, str]:
    """Names of 1-based columns (1, 3, 5, 6); validates the cube's shape."""
    if cube.column_count < 6:
        raise ProtocolUnsupported(
            f"protocol needs at least 6 columns, dataset has {cube.column_count}"
        )
    names = [m.name for m in cube.schema]
    c1, c3, c5, c6 = names[0], names[2], names[4], names[5]
    if cube.schema[5].kind != "measure":
        raise ProtocolUnsupported(f"column 6 ({c6!r}) must be a measure")
    return c1, c3, c5, c6


def _run_trial(cube: Cube, mode: ExecMode) -> tuple[list[float], list[bytes]]:
    """One pass over the 6 steps: per-step seconds and rendered outputs."""
    c1, c3, c5, c6 = _protocol_columns(cube)
    timings: list[float] = []
    outputs: list[bytes] = []

    def timed(fn) -> None:
        t0 = time.perf_counter()
        out = fn()
        timings.append(time.perf_counter() - t0)
        outputs.append(out if isinstance(out, bytes) else out.encode("utf-8"))

    # 1: full fact table, rendered.
    timed(lambda: render_facts(*fact_table(cube, 0, "all")))

    # 2: initial aggregate on column 6.
    state = qs.new_state(cube, c6)
    timed(lambda: render_aggregate(evaluate(cube, state, mode)))

    # 3: drill down on columns 1, 3, 5, displaying after each.
    def drills() -> str:
        nonlocal state
        parts = []
        for col in (c1, c3, c5):
            state = qs.drilldown_add(cube, state, col)
            parts.append(render_aggregate(evaluate(cube, state, mode)))
        return "\n".join(parts)

    timed(drills)

    # 4: filter column 5 = "2009".
    def add_filter() -> str:
        nonlocal state
        state = qs.filter_add(state, c5, _FILTER_VALUE)
        return render_aggregate(evaluate(cube, state, mode))

    timed(add_filter)

    # 5: remove that filter.
    def remove_filter() -> str:
        nonlocal state
        state = qs.filter_remove(state, c5, _FILTER_VALUE)
        return render_aggregate(evaluate(cube, state, mode))

    timed(remove_filter)

    # 6: scatter of column 5 (x) against column 6 (y).
    timed(lambda: render_image(build_plot(cube, state, c5, c6, "scatter")))

    return timings, outputs


def run_protocol(cube: Cube, mode: ExecMode = SERIAL, trials: int = 1) -> BenchReport:
    """Run the 6-step protocol ``trials`` times in one mode.

    Step outputs must not vary between trials; a mismatch means the
    engine lost determinism and raises ``RuntimeError``.
    """
    if trials < 1:
        raise ValueError("trials must be positive")
    per_step: list[list[float]] = [[] for _ in STEP_LABELS]
    reference: list[bytes] | None = None
    for trial in range(trials):
        timings, outputs = _run_trial(cube, mode)
        if reference is None:
            reference = outputs
        elif outputs != reference:
            raise RuntimeError(
                f"step outputs changed between trials (mode {mode.label}, trial {trial + 1})"
            )
        for i, t in enumerate(timings):
            per_step[i].append(t)

    stats = tuple(
        StepStats(
            step=i + 1,
            label=STEP_LABELS[i],
            mean_s=round(statistics.fmean(ts), 6),
            min_s=round(min(ts), 6),
            max_s=round(max(ts), 6),
            stddev_s=round(statistics.pstdev(ts), 6),
        )
        for i, ts in enumerate(per_step)
    )
    assert reference is not None
    hashes = tuple(hashlib.sha256(out).hexdigest() for out in reference)
    return BenchReport(
        dataset_name=cube.source_name,
        row_count=cube.row_count,
        column_count=cube.column_count,
        trials=trials,
        logical_cpus=os.cpu_count() or 1,
        modes={mode.label: stats},
        step_output_sha256=hashes,
    )


def combine_reports(first: BenchReport, *rest: BenchReport) -> BenchReport:
    """Merge single-mode reports over the same dataset into one report.

    Raises ``RuntimeError`` if any two modes disagree on step outputs —
    they are required to compute identical results.
    """
    modes = dict(first.modes)
    for rep in rest:
        if rep.step_output_sha256 != first.step_output_sha256:
            raise RuntimeError("step outputs differ between execution modes")
        if (rep.dataset_name, rep.row_count, rep.trials) != (
            first.dataset_name,
            first.row_count,
            first.trials,
        ):
            raise ValueError("reports cover different runs and cannot be combined")
        modes.update(rep.modes)
    return BenchReport(
        dataset_name=first.dataset_name,
        row_count=first.row_count,
        column_count=first.column_count,
        trials=first.trials,
        logical_cpus=first.logical_cpus,
        modes=modes,
        step_output_sha256=first.step_output_sha256,
    )


def report_to_json(report: BenchReport) -> dict:
    return {
        "dataset": report.dataset_name,
        "row_count": report.row_count,
        "column_count": report.column_count,
        "trials": report.trials,
        "logical_cpus": report.logical_cpus,
        "modes": {
            name: {
                "steps": [
                    {
                        "step": s.step,
                        "label": s.label,
                        "mean_s": s.mean_s,
                        "min_s": s.min_s,
                        "max_s": s.max_s,
                        "stddev_s": s.stddev_s,
                    }
                    for s in steps
                ],
                "total_mean_s": round(report.total_mean_s(name), 6),
            }
            for name, steps in report.modes.items()
        },
        "step_output_sha256": list(report.step_output_sha256),
    }


def render_report_text(report: BenchReport) -> str:
    """Plain-text report: one row per step, one timing column per mode."""
    from .display import _render_grid

    mode_names = list(report.modes)
    headers = ["step"] + [f"{m} (s)" for m in mode_names]
    rows = []
    for i, label in enumerate(STEP_LABELS):
        row = [f"{i + 1}. {label}"]
        row += [f"{report.modes[m][i].mean_s:.4f}" for m in mode_names]
        rows.append(row)
    total_row = ["total (sum of step means)"]
    total_row += [f"{report.total_mean_s(m):.4f}" for m in mode_names]
    rows.append(total_row)
    grid = _render_grid(headers, rows, [False] + [True] * len(mode_names))
    head = (
        f"dataset: {report.dataset_name} ({report.row_count} rows, "
        f"{report.column_count} columns)\n"
        f"trials: {report.trials}   logical CPUs: {report.logical_cpus}\n"
        f"mean seconds per step:\n"
    )
    return head + grid


# --- synthetic data ----------------------------------------------------------

_SEGMENTS = ("North", "South", "East", "West", "Central")
_PRODUCTS = tuple(f"Product {i:02d}" for i in range(1, 31))
_REGIONS = tuple(f"Region {c}" for c in "ABCDEFGHIJ")


def generate_synthetic(rows: int, seed: int) -> Cube:
    """A deterministic 7-column cube for benchmarking.

    Layout matches the protocol's expectations: columns 1/3/5 are
    drillable (two text dimensions and an integer year over 2005-2014)
    and column 6 is an integer measure; columns 4 and 7 are float
    measures.  Same (rows, seed) always yields the same cube.
    """
    if rows < 0:
        raise ValueError("rows must be non-negative")
    rng = random.Random(seed)
    segments: list[str] = []
    products: list[str] = []
    regions: list[str] = []
    costs: list[float] = []
    years: list[int] = []
    amounts: list[int] = []
    margins: list[float] = []
    for _ in range(rows):
        segments.append(rng.choice(_SEGMENTS))
        products.append(rng.choice(_PRODUCTS))
        regions.append(rng.choice(_REGIONS))
        costs.append(round(rng.uniform(1.0, 500.0), 2))
        years.append(rng.randint(2005, 2014))
        amounts.append(rng.randint(-5000, 20000))
        margins.append(round(rng.uniform(-1.0, 1.0), 4))

    schema = (
        ColumnMeta("Segment", 0, "dimension", "text"),
        ColumnMeta("Product", 1, "dimension", "text"),
        ColumnMeta("Region", 2, "dimension", "text"),
        ColumnMeta("Unit Cost", 3, "measure", "float64"),
        ColumnMeta("Year", 4, "measure", "integer64"),
        ColumnMeta("Amount", 5, "measure", "integer64"),
        ColumnMeta("Margin", 6, "measure", "float64"),
    )
    columns = (
        tuple(segments),
        tuple(products),
        tuple(regions),
        tuple(costs),
        tuple(years),
        tuple(amounts),
        tuple(margins),
    )
    return Cube(
        schema=schema,
        columns=columns,
        row_count=rows,
        source_name=f"synthetic(rows={rows}, seed={seed})",
    )
