import numpy as np
import pytest

from favwalk.rng import RecordedPath


def all_paths(n):
    for index in range(2**n):
        yield RecordedPath.from_index(index, n)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
