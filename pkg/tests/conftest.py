import numpy as np
import pytest

from ricciflow.graph import build_graph


def random_connected_graph(rng, n_lo=3, n_hi=8, unit_weights=False):
    """One connected G(n, p) sample with optional random weights."""
    while True:
        n = int(rng.integers(n_lo, n_hi + 1))
        p = rng.uniform(0.3, 0.9)
        triples = []
        for i in range(n):
            for j in range(i + 1, n):
                if rng.random() < p:
                    w = 1.0 if unit_weights else float(rng.uniform(0.5, 2.0))
                    triples.append((i, j, w))
        if not triples:
            continue
        g = build_graph(triples)
        if g.n == n and g.is_connected():
            return g


def graph_suite(seed, count, **kwargs):
    rng = np.random.default_rng(seed)
    return [random_connected_graph(rng, **kwargs) for _ in range(count)]


@pytest.fixture
def rng():
    return np.random.default_rng(20240831)


@pytest.fixture
def triangle():
    return build_graph([(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)])


@pytest.fixture
def single_edge():
    return build_graph([("a", "b", 1.0)])


@pytest.fixture
def two_triangles():
    return build_graph(
        [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0), (3, 4, 1.0), (4, 5, 1.0), (3, 5, 1.0)]
    )


@pytest.fixture
def weighted_triangle():
    # heavy edge (0,1) has rho = 2 < w = 3: the bad-edge condition (I) case
    return build_graph([(0, 1, 3.0), (0, 2, 1.0), (2, 1, 1.0)])
