import sys

import numpy as np
import pytest

from csfs.selection import ClassSpecificRanking, GlobalRanking, PairwiseRelevanceTable

CLASSES = ("A", "B", "C", "D")
FEATURES = tuple(f"f{j}" for j in range(1, 10))

# traditional ranking over f1..f9
TABLE1 = [0.4, 0.8, 0.2, 0.3, 0.7, 0.3, 0.2, 0.3, 0.3]

# class-specific ranking, rows A..D
TABLE2 = [
    [0.7, 0.6, 0.2, 0.3, 0.6, 0.3, 0.2, 0.4, 0.8],
    [0.4, 0.8, 0.2, 0.4, 0.7, 0.2, 0.6, 0.2, 0.4],
    [0.4, 0.6, 0.2, 0.5, 0.7, 0.5, 0.4, 0.4, 0.4],
    [0.3, 0.8, 0.2, 0.2, 0.8, 0.4, 0.4, 0.2, 0.4],
]

# pairwise table, rows AB, AC, AD, BC, BD, CD
TABLE3 = [
    [0.9, 0.8, 0.1, 0.2, 0.6, 0.3, 0.2, 0.3, 0.8],
    [0.8, 0.2, 0.2, 0.4, 0.5, 0.4, 0.2, 0.8, 0.9],
    [0.4, 0.8, 0.3, 0.3, 0.7, 0.2, 0.2, 0.1, 0.7],
    [0.1, 0.8, 0.3, 0.9, 0.7, 0.2, 0.8, 0.1, 0.1],
    [0.2, 0.8, 0.2, 0.1, 0.8, 0.1, 0.8, 0.2, 0.3],
    [0.3, 0.8, 0.1, 0.2, 0.9, 0.9, 0.2, 0.3, 0.2],
]

TABLE4_DIAGONAL = {"A": ("f9",), "B": ("f2", "f5"), "C": (), "D": ("f2", "f5")}
TABLE4_OFFDIAG = {
    ("A", "B"): ("f1",),
    ("A", "C"): ("f1", "f8"),
    ("A", "D"): (),
    ("B", "C"): ("f4", "f7"),
    ("B", "D"): ("f7",),
    ("C", "D"): ("f6",),
}


@pytest.fixture
def table1():
    return GlobalRanking(FEATURES, TABLE1, CLASSES)


@pytest.fixture
def table2():
    return ClassSpecificRanking(CLASSES, FEATURES, TABLE2, "ove")


@pytest.fixture
def table3():
    return PairwiseRelevanceTable(CLASSES, FEATURES, TABLE3)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    if module is None or not module.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(module.RESULTS):
        terminalreporter.write_line(module.RESULTS[number])
