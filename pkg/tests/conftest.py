import numpy as np
import pytest
from hypothesis import settings

from ptcs.ptmodel import PTParams

settings.register_profile("ptcs", max_examples=25, deadline=None)
settings.load_profile("ptcs")


@pytest.fixture
def unit():
    return PTParams()


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


# one line per acceptance criterion, filled in by test_acceptance.py
ACCEPTANCE: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[key])
