import math

import numpy as np
import pytest

from quam.patterns import PatternSet

SIX = ("0000", "0011", "0110", "1001", "1100", "1111")
ROOT6 = math.sqrt(6)

_acceptance: dict[str, str] = {}


@pytest.fixture
def six_patterns() -> PatternSet:
    return PatternSet(SIX)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(12345)


def pytest_runtest_logreport(report):
    if "test_acceptance.py::" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _acceptance[name] = report.outcome.upper()


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in sorted(_acceptance.items()):
        status = "PASS" if outcome == "PASSED" else "FAIL"
        terminalreporter.write_line(f"{status}  {name}")
