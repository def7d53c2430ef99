import pytest

_criteria: dict[int, tuple[bool, str]] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when != "call":
        return
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    number, label = marker.args
    previous_ok, _ = _criteria.get(number, (True, label))
    _criteria[number] = (previous_ok and rep.passed, label)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        ok, label = _criteria[number]
        status = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"criterion {number:>2}: {status} - {label}")
