import functools

import pytest

from stubbornmc.explorer import explore
from stubbornmc.models import build_peterson

VARIANTS = ["plain", "non-progress-revealing", "correct", "mutex-violating"]


def pytest_addoption(parser):
    parser.addoption("--run-long", action="store_true", help="run n=4 explorations")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--run-long"):
        return
    skip = pytest.mark.skip(reason="needs --run-long")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


@functools.lru_cache(maxsize=None)
def model(variant, n, backend=None):
    return build_peterson(variant, n, backend=backend)


@functools.lru_cache(maxsize=None)
def complete_space(variant, n, mode="full"):
    """Space explored to the end, safety check off."""
    return explore(model(variant, n), mode, on_the_fly_safety=False).space


@pytest.fixture(scope="session")
def spaces():
    return complete_space


_criteria = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    number, title = marker.args
    if report.when == "call" or (report.when == "setup" and not report.passed):
        state = "SKIP" if report.skipped else ("PASS" if report.passed else "FAIL")
        prev = _criteria.get((number, title))
        if prev != "FAIL":
            _criteria[(number, title)] = state


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for (number, title), state in sorted(_criteria.items(), key=lambda kv: str(kv[0][0])):
        terminalreporter.write_line(f"[{state}] criterion {number}: {title}")
