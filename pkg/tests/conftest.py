import sys
import numpy as np
import pytest

from fairfilter import build_graph


def random_graph(rng, n, p=0.3):
    """Erdos-Renyi graph with every isolated node wired to a random other node."""
    iu = np.triu_indices(n, 1)
    keep = rng.random(iu[0].size) < p
    edges = set(zip(iu[0][keep].tolist(), iu[1][keep].tolist()))
    deg = np.zeros(n, dtype=int)
    for i, j in edges:
        deg[i] += 1
        deg[j] += 1
    for i in range(n):
        if deg[i] == 0:
            j = int(rng.choice([v for v in range(n) if v != i]))
            edges.add((min(i, j), max(i, j)))
            deg[i] += 1
            deg[j] += 1
    return build_graph(n, sorted(edges))


def random_sensitive(rng, n):
    return rng.choice([-1, 1], size=n)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def path2():
    return build_graph(2, [(0, 1)])


@pytest.fixture
def triangle():
    return build_graph(3, [(0, 1), (1, 2), (0, 2)])


@pytest.fixture
def star4():
    return build_graph(4, [(0, 1), (0, 2), (0, 3)])


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "GATE_LINES", None)
    if lines:
        terminalreporter.section("acceptance gate")
        for line in lines:
            terminalreporter.write_line(line)
