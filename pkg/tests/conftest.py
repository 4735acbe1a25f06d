import pytest


def pytest_configure(config):
    config.addinivalue_line(
        "markers", "criterion(n, text): an acceptance criterion; outcomes are summarised"
    )
    config._criteria = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark and report.when == "call":
        n, text = mark.args
        item.config._criteria[n] = (text, report.outcome)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    criteria = getattr(config, "_criteria", {})
    if not criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(criteria):
        text, outcome = criteria[n]
        status = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"criterion {n:>2}: {status}  {text}")
