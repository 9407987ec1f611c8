from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from symlat.classes import CLASS_NAMES, in_class  # noqa: E402
from symlat.coloured_graph import enumerate_coloured_graphs  # noqa: E402

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def all_c4():
    return list(enumerate_coloured_graphs([1, 2, 3, 4]))


@pytest.fixture(scope="session")
def all_c3():
    return list(enumerate_coloured_graphs([1, 2, 3]))


@pytest.fixture(scope="session")
def members_c4(all_c4):
    return {X: [g for g in all_c4 if in_class(g, X)] for X in CLASS_NAMES}


@pytest.fixture(scope="session")
def report():
    def add(line: str) -> None:
        ACCEPTANCE_LINES.append(line)
        print(line)

    return add


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
