import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from gapspec.medium import MediumParams  # noqa: E402


@pytest.fixture
def canon():
    return MediumParams()


def rel(x, y):
    return abs(x - y) / abs(y)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(line)
