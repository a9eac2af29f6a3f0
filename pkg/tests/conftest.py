import math
import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from redumet import EmbeddingTable, SynonymConfig  # noqa: E402


@pytest.fixture
def toy_table():
    # cos(ate, had) = 0.9; every other pair is far below 0.8
    return EmbeddingTable(
        ["ate", "had", "pizza", "tonight", "I"],
        [[1.0, 0.0], [0.9, math.sqrt(1 - 0.81)], [0.0, 1.0], [-1.0, 0.2], [-0.3, -1.0]],
    )


@pytest.fixture
def config():
    return SynonymConfig(tau=0.8)


def write(path, text):
    path.write_text(text, encoding="utf-8")
    return str(path)


def pytest_terminal_summary(terminalreporter):
    import test_acceptance

    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in test_acceptance.RESULTS:
            terminalreporter.write_line(line)
