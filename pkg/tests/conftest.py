import pytest

_ACCEPTANCE = {}


def pytest_configure(config):
    config.addinivalue_line(
        "markers",
        "acceptance(num, title): end-to-end acceptance criterion; one "
        "PASS/FAIL line per criterion is printed in the terminal summary")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    num, title = marker.args
    if rep.when == "call":
        state = "PASS" if rep.passed else ("SKIP" if rep.skipped else "FAIL")
        _ACCEPTANCE[num] = (title, state)
    elif rep.when == "setup" and not rep.passed:
        _ACCEPTANCE[num] = (title, "SKIP" if rep.skipped else "FAIL")


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_ACCEPTANCE):
        title, state = _ACCEPTANCE[num]
        terminalreporter.write_line("criterion %d: %s  %s" % (num, state, title))
