import random

import pytest

from tropdeg.graphs import Divisor, MultiGraph, build_graph


@pytest.fixture
def triangle():
    return build_graph(
        ["a", "b", "c"],
        [("ab", "a", "b"), ("bc", "b", "c"), ("ca", "c", "a")],
    )


@pytest.fixture
def banana5():
    return build_graph(
        ["v1", "v2"],
        [(f"e{i}", "v1", "v2") for i in range(1, 6)],
    )


@pytest.fixture
def banana3():
    return build_graph(
        ["v1", "v2"],
        [(f"e{i}", "v1", "v2") for i in range(1, 4)],
    )


def random_multigraph(
    rng: random.Random,
    max_vertices: int = 8,
    max_extra: int = 6,
    weighted: bool = True,
) -> MultiGraph:
    """Random connected loopless multigraph: a spanning tree plus extra edges."""
    n = rng.randint(1, max_vertices)
    names = [f"v{i}" for i in range(n)]
    edges = []
    for i in range(1, n):
        j = rng.randrange(i)
        edges.append((f"t{i}", names[j], names[i]))
    if n >= 2:
        for k in range(rng.randint(0, max_extra)):
            i, j = rng.sample(range(n), 2)
            edges.append((f"x{k}", names[i], names[j]))
    genera = [(v, rng.choice([0, 0, 0, 1]) if weighted else 0) for v in names]
    return MultiGraph(genera, edges)


def random_divisor(rng: random.Random, graph: MultiGraph, spread: int = 4) -> Divisor:
    return Divisor({v: rng.randint(-spread, spread) for v in graph.vertex_ids})
