import os

import pytest
from hypothesis import HealthCheck, settings

from frobkit import groebner

settings.register_profile(
    "default",
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.register_profile("thorough", parent=settings.get_profile("default"), max_examples=500)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture(autouse=True, scope="session")
def buchberger_on_every_basis():
    """Every basis returned anywhere in the test run must satisfy the S-pair criterion."""

    def check(ideal, G):
        assert groebner.buchberger_criterion(G), f"basis {G} of {ideal} fails the S-pair criterion"

    groebner.POST_CHECKS.append(check)
    yield
    groebner.POST_CHECKS.remove(check)


_acceptance = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    if report.when == "call" or report.failed:
        _acceptance[name] = (report.outcome, report.duration)


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for name in sorted(_acceptance):
        outcome, dur = _acceptance[name]
        mark = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"{mark}  {name}  ({dur:.2f}s)")
