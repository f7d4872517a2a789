from __future__ import annotations

import pytest
from hypothesis import settings

from wquasi.fixtures import FIXTURE_IDS, load_fixture

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

# filled by tests/test_acceptance.py, printed after the run
ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def fixtures():
    return {fid: load_fixture(fid) for fid in FIXTURE_IDS}


@pytest.fixture(scope="session")
def t4(fixtures):
    return fixtures["t4"]


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE_LINES:
        terminalreporter.write_line(line)
