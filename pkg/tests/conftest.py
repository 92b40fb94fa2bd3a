import pytest

from bicirc.families import complete_graph, cycle_graph, cycle_with_chord


@pytest.fixture(scope="session")
def c3():
    return cycle_graph(3)


@pytest.fixture(scope="session")
def c5():
    return cycle_graph(5)


@pytest.fixture(scope="session")
def k4():
    return complete_graph(4)


@pytest.fixture(scope="session")
def c4_chord():
    return cycle_with_chord()
