import random

import pytest

from acceptance_log import summary_lines
from rsaplus.keys import RsaPlusPrivateKey


@pytest.fixture
def rng():
    return random.Random(20240611)


@pytest.fixture
def toy_key():
    """n = 7 * 19 = 133, phi = 108 = 2^2 * 3^3; 5 is the smallest admissible l1."""
    return RsaPlusPrivateKey(7, 19, 5)


def pytest_terminal_summary(terminalreporter):
    lines = summary_lines()
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
