import pytest

from graphdyn.decomposition import Params, decompose
from graphdyn.errors import NoCandidates
from graphdyn.fixtures import BUILDERS
from graphdyn.graph import Graph, validate_graph

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def systems():
    return {name: build() for name, build in BUILDERS.items()}


class _Reports(dict):
    """Decomposition reports computed on first use and shared by every test."""

    def __init__(self, systems):
        super().__init__()
        self.systems = systems

    def __missing__(self, name):
        s = self.systems[name]
        try:
            rep = decompose(s.map, Params.from_mapping(s.params), name)
        except NoCandidates as exc:
            rep = exc.report
        self[name] = rep
        return rep


@pytest.fixture(scope="session")
def reports(systems):
    return _Reports(systems)


@pytest.fixture(scope="session")
def triangle():
    return Graph(["a", "b", "c"], [("ab", "a", "b", 1), ("bc", "b", "c", 1), ("ca", "c", "a", 1)])


@pytest.fixture(scope="session")
def figure_eight():
    return validate_graph(Graph(["o"], [("L1", "o", "o", 3), ("L2", "o", "o", 3)]))


@pytest.fixture(scope="session")
def lollipop_graph(systems):
    return systems["lollipop"].graph
