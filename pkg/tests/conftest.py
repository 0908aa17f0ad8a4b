import pytest

_CRITERIA = []


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(key, text): acceptance criterion checked by this test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    key, text = marker.args
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        if hasattr(report, "wasxfail"):
            verdict = "FAIL (expected, see reason)"
        elif report.passed:
            verdict = "PASS"
        else:
            verdict = "FAIL"
        _CRITERIA.append((key, text, verdict, round(call.duration, 3)))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for key, text, verdict, seconds in _CRITERIA:
        terminalreporter.write_line(f"[{verdict}] criterion {key}: {text} ({seconds:.3f} s)")
