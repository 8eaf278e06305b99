from __future__ import annotations

from pathlib import Path

import pytest

from minicube.ingest import load_csv

DATA_DIR = Path(__file__).resolve().parent.parent / "data"
EVAL_CSV = DATA_DIR / "financial_position_31k.csv"


@pytest.fixture(scope="session")
def eval_csv_bytes() -> bytes:
    return EVAL_CSV.read_bytes()


@pytest.fixture(scope="session")
def eval_cube(eval_csv_bytes):
    return load_csv(eval_csv_bytes, source_name=EVAL_CSV.name)


# --- acceptance-criterion reporting ------------------------------------------
# Tests marked @pytest.mark.criterion(n, "description") get a PASS/FAIL/SKIP
# line in the terminal summary, one per criterion.

_criteria: dict[object, tuple[str, str]] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    num, desc = marker.args
    if report.when == "setup" and report.skipped:
        _criteria[num] = (desc, "SKIP")
    elif report.when == "call":
        _criteria[num] = (desc, "PASS" if report.passed else "FAIL")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_criteria, key=str):
        desc, status = _criteria[num]
        terminalreporter.write_line(f"criterion {num}: {status} - {desc}")
