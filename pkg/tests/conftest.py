import numpy as np
import pytest
from hypothesis import HealthCheck, settings, strategies as st

from heischar.core import HPoint

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

coord = st.floats(-5, 5, allow_nan=False, allow_infinity=False)
hpoints = st.builds(HPoint, coord, coord, coord)
scales = st.floats(0.2, 5.0)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


# -- acceptance summary -------------------------------------------------------------

_acceptance: dict[int, tuple[str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, title): numbered acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("acceptance")
    if mark is None:
        return
    n, title = mark.args
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        _acceptance[n] = (title, "PASS" if rep.passed else "FAIL")


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_acceptance):
        title, status = _acceptance[n]
        terminalreporter.write_line(f"[{status}] criterion {n:2d}: {title}")
