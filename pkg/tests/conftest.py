import numpy as np
import pytest

from sewer_osp.network import SewerNetwork, build_upstream_index

ACCEPTANCE_LINES: list[str] = []


def random_forest(rng: np.random.Generator, n: int, p_outfall: float = 0.1) -> SewerNetwork:
    """Random in-tree forest: each node drains into an earlier node, or is an outfall.

    Ids are shuffled so node numbering carries no ordering information.
    """
    perm = rng.permutation(n)
    edges = []
    for i in range(1, n):
        if rng.random() < p_outfall:
            continue
        edges.append((perm[i], perm[int(rng.integers(0, i))]))
    return SewerNetwork(n=n, edges=np.array(edges, dtype=np.int64).reshape(-1, 2))


@pytest.fixture
def path3():
    net = SewerNetwork.from_labels("abc", [("a", "b"), ("b", "c")])
    return build_upstream_index(net)


@pytest.fixture
def confluence():
    net = SewerNetwork.from_labels("abcd", [("a", "c"), ("b", "c"), ("c", "d")])
    return build_upstream_index(net)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
