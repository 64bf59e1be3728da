"""Shared fixtures for the cactus_multipacking tests."""

import pytest

from cactus_multipacking.graph_core import Graph, from_edge_list
from cactus_multipacking.graph_families import GkInstance, cycle, gen_gk, path, star


@pytest.fixture
def g1() -> GkInstance:
    """G_1: three pentagons in a chain."""
    return gen_gk(1)


@pytest.fixture
def g2() -> GkInstance:
    """G_2: six pentagons in a chain."""
    return gen_gk(2)


@pytest.fixture
def path7() -> Graph:
    """Path on 7 vertices."""
    return path(7)


@pytest.fixture
def c6() -> Graph:
    """Cycle on 6 vertices."""
    return cycle(6)


@pytest.fixture
def star4() -> Graph:
    """Star with 4 leaves."""
    return star(4)


@pytest.fixture
def theta() -> Graph:
    """K_4 minus an edge: two triangles sharing the edge 0-2."""
    return from_edge_list([(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)], 4)


@pytest.fixture
def bowtie() -> Graph:
    """Two triangles sharing vertex 0."""
    return from_edge_list([(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 0)], 5)
