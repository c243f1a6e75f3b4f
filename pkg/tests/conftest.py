import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

import pytest

GOLDEN = Path(__file__).parent / "golden"


@pytest.fixture(scope="session")
def golden_bibliography():
    lines = (GOLDEN / "bibliography.nt").read_text(encoding="utf-8").split("\n")
    return {line for line in lines if line.strip()}


# -- acceptance summary: one PASS/FAIL line per criterion ---------------------

_criteria: dict[int, tuple[str, bool]] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or report.when == "teardown" or (report.when == "setup" and report.passed):
        return
    number, title = marker.args
    _criteria[number] = (title, report.passed and not getattr(report, "wasxfail", False))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        title, ok = _criteria[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {title}")
