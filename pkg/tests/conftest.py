import numpy as np
import pytest

from weylwalk.paths import cone, oracle_coefficients
from weylwalk.propagator import coefficient_table

_acceptance_results = []


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, title): exit criterion of the build")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        number, title = marker.args
        _acceptance_results.append((number, title, report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance_results:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, outcome in sorted(_acceptance_results):
        status = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"{status} criterion {number}: {title}")


@pytest.fixture(scope="session")
def quad_tables():
    """Exact coefficient tables for 1 <= t <= 64, computed once."""
    return {t: coefficient_table(t) for t in range(1, 65)}


@pytest.fixture(scope="session")
def oracle_quads():
    """Brute-force quads for every admissible displacement with 1 <= t <= 10."""
    return {d: oracle_coefficients(d) for t in range(1, 11) for d in cone(t)}


@pytest.fixture
def rng():
    return np.random.default_rng(20140715)
