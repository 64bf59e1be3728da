"""Graph generators: the pentagon chain G_k, seeded random cacti and small catalogs."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction

import networkx as nx

from cactus_multipacking.exact_oracles import Broadcast
from cactus_multipacking.exceptions import PreconditionError
from cactus_multipacking.graph_core import Graph, from_edge_list

logger = logging.getLogger(__name__)

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15
PENTAGON = "abcde"


class SplitMix64:
    """64-bit SplitMix PRNG; identical streams for identical seeds everywhere."""

    def __init__(self, seed: int) -> None:
        """Initialize the generator.

        Args:
            seed: Any integer; reduced mod 2**64.
        """
        self.state = seed & MASK64

    def next_u64(self) -> int:
        """Next 64-bit output."""
        self.state = (self.state + GOLDEN_GAMMA) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def below(self, k: int) -> int:
        """Integer in ``[0, k)`` as ``next % k``."""
        return self.next_u64() % k

    def bernoulli(self, p: Fraction) -> bool:
        """True with probability ``p`` (exact for rational ``p``)."""
        return self.next_u64() % p.denominator < p.numerator


@dataclass(frozen=True)
class GkInstance:
    """The chain of ``3k`` pentagons ``A_i = (a_i, b_i, c_i, d_i, e_i)``.

    ``b_i`` is joined to ``e_{i+1}``.
    """

    k: int
    graph: Graph

    @property
    def pentagons(self) -> int:
        """Number of pentagons, ``3k``."""
        return 3 * self.k

    def vertex(self, letter: str, i: int) -> int:
        """Id of ``letter_i`` for ``1 <= i <= 3k``."""
        if letter not in PENTAGON or not 1 <= i <= self.pentagons:
            msg = f"no vertex {letter}_{i} in G_{self.k}"
            raise PreconditionError(msg)
        return 5 * (i - 1) + PENTAGON.index(letter)


def gen_gk(k: int) -> GkInstance:
    """Build ``G_k`` with ``A_i`` on ids ``5(i-1) .. 5i-1`` in order a, b, c, d, e.

    Raises:
        PreconditionError: If ``k < 1``.
    """
    if k < 1:
        msg = f"k must be positive, got {k}"
        raise PreconditionError(msg)
    count = 3 * k
    edges: list[tuple[int, int]] = []
    labels: dict[int, str] = {}
    for i in range(1, count + 1):
        base = 5 * (i - 1)
        for offset, letter in enumerate(PENTAGON):
            labels[base + offset] = f"{letter}_{i}"
            edges.append((base + offset, base + (offset + 1) % 5))
        if i < count:
            edges.append((base + 1, base + 5 + 4))
    return GkInstance(k, from_edge_list(edges, 5 * count, labels))


def gk_canonical_multipacking(inst: GkInstance) -> tuple[int, ...]:
    """``{a_1, ..., a_3k}``, a maximum multipacking of ``G_k``."""
    return tuple(inst.vertex("a", i) for i in range(1, inst.pentagons + 1))


def gk_optimal_broadcast(inst: GkInstance) -> Broadcast:
    """Power 4 on ``a_i`` for ``i = 2 (mod 3)``; efficient, dominating, cost ``4k``."""
    return Broadcast(
        {inst.vertex("a", i): 4 for i in range(1, inst.pentagons + 1) if i % 3 == 2}
    )


def gk_fractional_weights(inst: GkInstance) -> dict[int, Fraction]:
    """Weight 1/3 on every ``b_i, c_i, d_i, e_i``; total ``4k``."""
    third = Fraction(1, 3)
    return {
        inst.vertex(letter, i): third
        for i in range(1, inst.pentagons + 1)
        for letter in "bcde"
    }


@dataclass(frozen=True)
class RandomCactusParams:
    """Parameters of :func:`random_cactus`."""

    n: int
    cycle_prob: Fraction = Fraction(1, 2)
    max_cycle_len: int = 7
    seed: int = 0

    def __post_init__(self) -> None:
        """Validate ranges."""
        if self.n < 1:
            msg = f"n must be positive, got {self.n}"
            raise PreconditionError(msg)
        if not 0 <= self.cycle_prob <= 1:
            msg = f"cycle_prob must lie in [0, 1], got {self.cycle_prob}"
            raise PreconditionError(msg)
        if self.max_cycle_len < 3:
            msg = f"max_cycle_len must be at least 3, got {self.max_cycle_len}"
            raise PreconditionError(msg)


def random_cactus(params: RandomCactusParams) -> Graph:
    """Grow a cactus on exactly ``n`` vertices from a single vertex.

    Each step picks an existing vertex uniformly and attaches a pendant edge
    or, with probability ``cycle_prob``, a cycle of uniform length in
    ``[3, max_cycle_len]`` through it. The last cycle is shortened so the
    vertex count lands on ``n``; with one vertex left an edge is used.
    """
    rng = SplitMix64(params.seed)
    cycle_prob = Fraction(params.cycle_prob)
    edges: list[tuple[int, int]] = []
    size = 1
    while size < params.n:
        anchor = rng.below(size)
        remaining = params.n - size
        if rng.bernoulli(cycle_prob) and remaining >= 2:
            length = 3 + rng.below(params.max_cycle_len - 2)
            length = min(length, remaining + 1)
            ring = [anchor, *range(size, size + length - 1)]
            edges.extend(zip(ring, ring[1:] + ring[:1]))
            size += length - 1
        else:
            edges.append((anchor, size))
            size += 1
    return from_edge_list(edges, params.n)


def path(n: int) -> Graph:
    """Path on ``n >= 1`` vertices."""
    return from_edge_list([(i, i + 1) for i in range(n - 1)], n)


def cycle(n: int) -> Graph:
    """Cycle on ``n >= 3`` vertices."""
    if n < 3:
        msg = f"a cycle needs at least 3 vertices, got {n}"
        raise PreconditionError(msg)
    return from_edge_list([(i, (i + 1) % n) for i in range(n)], n)


def star(k: int) -> Graph:
    """``K_{1,k}`` with hub 0."""
    return from_edge_list([(0, i) for i in range(1, k + 1)], k + 1)


def complete(n: int) -> Graph:
    """``K_n``."""
    return from_edge_list([(u, v) for u in range(n) for v in range(u + 1, n)], n)


def to_networkx(g: Graph) -> nx.Graph:
    """Copy ``g`` into a networkx graph on nodes ``0 .. n-1``."""
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges())
    return h


def from_networkx(h: nx.Graph) -> Graph:
    """Relabel ``h`` to ``0 .. n-1`` in sorted node order and convert."""
    index = {v: i for i, v in enumerate(sorted(h.nodes))}
    return from_edge_list([(index[u], index[v]) for u, v in h.edges()], len(index))


def cactus_catalog(max_n: int) -> list[Graph]:
    """Every cactus on ``1 .. max_n`` vertices, once per isomorphism class.

    Each cactus with at least two vertices has a leaf block, so growing by a
    pendant edge or a cycle through one vertex reaches every class.
    """
    levels: dict[int, list[nx.Graph]] = {1: [nx.empty_graph(1)]} if max_n >= 1 else {}
    for n in range(2, max_n + 1):
        buckets: dict[str, list[nx.Graph]] = {}
        found: list[nx.Graph] = []

        def offer(candidate: nx.Graph) -> None:
            key = nx.weisfeiler_lehman_graph_hash(candidate)
            bucket = buckets.setdefault(key, [])
            if not any(nx.is_isomorphic(candidate, other) for other in bucket):
                bucket.append(candidate)
                found.append(candidate)

        for parent in levels[n - 1]:
            for v in parent.nodes:
                child = parent.copy()
                child.add_edge(v, n - 1)
                offer(child)
        for length in range(3, n + 1):
            for parent in levels[n - length + 1]:
                start = n - length + 1
                for v in parent.nodes:
                    child = parent.copy()
                    ring = [v, *range(start, n)]
                    child.add_edges_from(zip(ring, ring[1:] + ring[:1]))
                    offer(child)
        levels[n] = found
        logger.debug("Catalog: %d cacti on %d vertices", len(found), n)
    return [from_networkx(h) for n in sorted(levels) for h in levels[n]]
