import pytest

_results: dict[str, list[bool]] = {}
_titles: dict[str, str] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(id, title): acceptance criterion a test belongs to")


def pytest_collection_modifyitems(items):
    for item in items:
        m = item.get_closest_marker("acceptance")
        if m:
            _titles.setdefault(m.args[0], m.args[1] if len(m.args) > 1 else "")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    m = item.get_closest_marker("acceptance")
    if m and (rep.when == "call" or rep.failed):
        _results.setdefault(m.args[0], []).append(rep.passed)


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_results):
        ok = all(_results[key])
        n = len(_results[key])
        terminalreporter.write_line(f"{key} {'PASS' if ok else 'FAIL'}  {_titles.get(key, '')} ({n} checks)")
