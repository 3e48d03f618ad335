import pytest

from globalcert import Graph, IdAssignment, clique, cycle


@pytest.fixture
def k2():
    return clique(2)


@pytest.fixture
def k3():
    return clique(3)


@pytest.fixture
def c4():
    return cycle(4)


@pytest.fixture
def c5():
    return cycle(5)


def all_labeled_graphs(n):
    """All 2^C(n,2) labeled simple graphs on n vertices."""
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    for mask in range(1 << len(pairs)):
        yield Graph.of(n, [p for i, p in enumerate(pairs) if mask >> i & 1])


def ids_seq(values, id_range):
    return IdAssignment(tuple(values), id_range)
