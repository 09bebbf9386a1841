import pytest

from helpers import E1_EDGES, E2_EDGES, utsp_from_edges
from itsp.model import Tour


@pytest.fixture
def e1():
    return utsp_from_edges(E1_EDGES, name="E1")


@pytest.fixture
def e2():
    return utsp_from_edges(E2_EDGES, name="E2")


@pytest.fixture
def tours4():
    """The three canonical 4-city tours A, B, C."""
    return (
        Tour.from_labels((1, 2, 3, 4)),
        Tour.from_labels((1, 2, 4, 3)),
        Tour.from_labels((1, 3, 2, 4)),
    )


def pytest_terminal_summary(terminalreporter):
    lines = [
        value
        for key in ("passed", "failed")
        for rep in terminalreporter.stats.get(key, [])
        for name, value in getattr(rep, "user_properties", [])
        if name == "acceptance" and rep.when == "call"
    ]
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
