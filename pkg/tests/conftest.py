import functools

import pytest

from primline.field import field_for_q


@functools.lru_cache(maxsize=None)
def cached_field(q, n):
    return field_for_q(q, n)


@pytest.fixture(scope="session")
def gf():
    return cached_field


# One summary line per acceptance criterion, whatever the verbosity.
_criteria = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.failed):
        return
    num = dict(report.user_properties).get("criterion")
    if num is not None:
        prev = _criteria.get(num, True)
        _criteria[num] = prev and report.passed


@pytest.fixture(autouse=True)
def _tag_criterion(request, record_property):
    m = request.node.get_closest_marker("criterion")
    if m is not None:
        record_property("criterion", m.args[0])


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_criteria):
        terminalreporter.write_line(f"criterion {num}: {'PASS' if _criteria[num] else 'FAIL'}")
