from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

_CRITERIA: dict[int, dict] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion this test checks")


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark:
            num, title = mark.args
            entry = _CRITERIA.setdefault(num, {"title": title, "tests": {}})
            entry["tests"][item.nodeid] = None


def pytest_runtest_logreport(report):
    for entry in _CRITERIA.values():
        if report.nodeid in entry["tests"]:
            if report.failed:
                entry["tests"][report.nodeid] = False
            elif report.when == "call" and entry["tests"][report.nodeid] is None:
                entry["tests"][report.nodeid] = not report.skipped


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_CRITERIA):
        entry = _CRITERIA[num]
        results = list(entry["tests"].values())
        if any(r is False for r in results):
            status = "FAIL"
        elif results and all(r is True for r in results):
            status = "PASS"
        else:
            status = "NOT RUN"
        done = sum(r is True for r in results)
        terminalreporter.write_line(f"criterion {num:2d}: {status:7s} {entry['title']} ({done}/{len(results)} tests passed)")


@pytest.fixture(autouse=True)
def _reset_precision():
    from cfdim._num import get_precision, set_precision

    saved = get_precision()
    yield
    set_precision(saved)
