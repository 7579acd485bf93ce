import numpy as np
import pytest

from bichroma.model import DriveParams, PulsePair

CRITERIA = []


def pytest_terminal_summary(terminalreporter):
    if CRITERIA:
        terminalreporter.section("acceptance criteria")
        for line in sorted(CRITERIA, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)


@pytest.fixture
def criterion():
    """Record one PASS/FAIL line for an acceptance criterion, then assert it."""

    def report(number, ok, detail):
        line = f"CRITERION {number}: {'PASS' if ok else 'FAIL'}  {detail}"
        print(line)
        CRITERIA.append(line)
        assert ok, line

    return report


def operating_pulse(omega0, sequence):
    return PulsePair.from_area(omega0, 50.0, 1.7, sequence)


def diag_drive(delta):
    return DriveParams(delta, delta, 1.0)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)
