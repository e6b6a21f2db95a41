import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from otalearn.automata import complete  # noqa: E402
from otalearn.io import load_fixture  # noqa: E402

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def running():
    """Two-location example: a in (1,3) enters the accepting location, b on [2,4) loops there."""
    return load_fixture("running_example")


@pytest.fixture(scope="session")
def running_cota(running):
    return complete(running)


@pytest.fixture(scope="session")
def tcp():
    return load_fixture("tcp")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
