import os

import pytest
from hypothesis import HealthCheck, settings

from sparseconv import SparseBinaryVector

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", max_examples=500, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


# Worked instance from the introduction of the source material.
INTRO_TEXT_BITS = "00000100101100011001010101110000000100"
INTRO_PATTERN_BITS = "1000101"


@pytest.fixture
def intro_instance():
    return (SparseBinaryVector.from_bits(INTRO_TEXT_BITS),
            SparseBinaryVector.from_bits(INTRO_PATTERN_BITS))


@pytest.fixture
def walsh_instance():
    # T = 01000010, P = 10000001 over N = 8
    return SparseBinaryVector(8, (1, 6)), SparseBinaryVector(8, (0, 7))


# acceptance results, filled in by tests/test_acceptance.py
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
