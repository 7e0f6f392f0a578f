import itertools

import numpy as np
import pytest

from bipartite_chunglu.projection import ProjectedGraph

ACCEPTANCE_LINES = []


def record(criterion, passed, detail):
    """Collect one acceptance line; printed again in the terminal summary."""
    status = "PASS" if passed else "FAIL"
    if passed is None:
        status = "SKIP"
    line = f"[{status}] criterion {criterion}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return line


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def acceptance():
    return record


def brute_projection(n_left, edges):
    nbrs = {}
    for u, v in edges:
        nbrs.setdefault(u, set()).add(v)
    out = set()
    for a, b in itertools.combinations(range(n_left), 2):
        if nbrs.get(a, set()) & nbrs.get(b, set()):
            out.add((a, b))
    return out


def brute_triangles(n, edges):
    adj = np.zeros((n, n), dtype=bool)
    for u, v in edges:
        adj[u, v] = adj[v, u] = True
    tri = np.zeros(n, dtype=np.int64)
    for a, b, c in itertools.combinations(range(n), 3):
        if adj[a, b] and adj[b, c] and adj[a, c]:
            tri[[a, b, c]] += 1
    return tri


def random_simple_graph(rng, n, p):
    iu = np.triu_indices(n, 1)
    keep = rng.random(iu[0].size) < p
    return ProjectedGraph(n, np.column_stack((iu[0][keep], iu[1][keep])))
