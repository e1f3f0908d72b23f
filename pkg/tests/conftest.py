from collections import defaultdict

import pytest

_criteria: dict[int, list[bool]] = defaultdict(list)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    k = marker.args[0]
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        _criteria[k].append(rep.passed)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(_criteria):
        verdict = "PASS" if _criteria[k] and all(_criteria[k]) else "FAIL"
        terminalreporter.write_line(f"CRITERION {k}: {verdict}")
