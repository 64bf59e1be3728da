"""Graph representation, cactus validation, distances and centers."""

from __future__ import annotations

import logging
from collections import deque
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass, field
from typing import Literal

import numpy as np
import numpy.typing as npt

from cactus_multipacking.exceptions import (
    DisconnectedGraphError,
    GraphInputError,
    NotACactusError,
    PreconditionError,
)

logger = logging.getLogger(__name__)

DistMatrix = npt.NDArray[np.int64]

BlockKind = Literal["edge", "cycle"]


@dataclass(frozen=True)
class Graph:
    """Immutable simple undirected graph on vertices ``0..n-1``.

    Build instances with :func:`from_edge_list`; the constructor trusts its
    input and only derives connectivity.
    """

    n: int
    adjacency: tuple[tuple[int, ...], ...]
    labels: dict[int, str] = field(default_factory=dict, compare=False, hash=False)
    connected: bool = field(init=False, compare=False)

    def __post_init__(self) -> None:
        """Record connectivity."""
        object.__setattr__(self, "connected", len(components(self)) <= 1)

    @property
    def m(self) -> int:
        """Number of edges."""
        return sum(len(nbrs) for nbrs in self.adjacency) // 2

    def neighbors(self, v: int) -> tuple[int, ...]:
        """Sorted neighbors of ``v``."""
        return self.adjacency[v]

    def degree(self, v: int) -> int:
        """Degree of ``v``."""
        return len(self.adjacency[v])

    def edges(self) -> Iterator[tuple[int, int]]:
        """Iterate edges ``(u, v)`` with ``u < v`` in lexicographic order."""
        for u, nbrs in enumerate(self.adjacency):
            for v in nbrs:
                if u < v:
                    yield u, v

    def label(self, v: int) -> str:
        """Display name of ``v`` (its label, or the id as text)."""
        return self.labels.get(v, str(v))

    def has_edge(self, u: int, v: int) -> bool:
        """Whether ``u`` and ``v`` are adjacent."""
        nbrs = self.adjacency[u]
        lo, hi = 0, len(nbrs)
        while lo < hi:
            mid = (lo + hi) // 2
            if nbrs[mid] < v:
                lo = mid + 1
            else:
                hi = mid
        return lo < len(nbrs) and nbrs[lo] == v


@dataclass(frozen=True)
class PathSeq:
    """Ordered vertex sequence of a path, optionally tagged with isometry."""

    vertices: tuple[int, ...]
    isometric: bool | None = None

    @property
    def length(self) -> int:
        """Number of edges on the path."""
        return len(self.vertices) - 1

    def __len__(self) -> int:
        """Number of vertices on the path."""
        return len(self.vertices)

    def __getitem__(self, index: int) -> int:
        """Vertex at position ``index``."""
        return self.vertices[index]

    def reversed(self) -> PathSeq:
        """The same path walked from the other end."""
        return PathSeq(self.vertices[::-1], self.isometric)


@dataclass(frozen=True)
class Block:
    """A biconnected block: a single edge or an ordered cycle."""

    kind: BlockKind
    vertices: tuple[int, ...]


@dataclass(frozen=True)
class CactusCertificate:
    """Block decomposition with a cactus verdict.

    ``witness`` holds two distinct cycles sharing an edge when the graph is
    not a cactus.
    """

    is_cactus: bool
    blocks: tuple[Block, ...]
    witness: tuple[tuple[int, ...], tuple[int, ...]] | None = None

    @property
    def cycles(self) -> tuple[Block, ...]:
        """Cycle blocks only."""
        return tuple(b for b in self.blocks if b.kind == "cycle")


@dataclass(frozen=True)
class RadiusReport:
    """Radius, diameter, center set and all eccentricities of a graph."""

    radius: int
    diameter: int
    centers: tuple[int, ...]
    eccentricities: tuple[int, ...]


def from_edge_list(
    edges: Iterable[tuple[int, int]],
    n: int,
    labels: dict[int, str] | None = None,
) -> Graph:
    """Build a canonical graph from an edge list.

    Args:
        edges: Pairs ``(u, v)`` with ``0 <= u, v < n`` and ``u != v``.
        n: Number of vertices.
        labels: Optional cosmetic vertex names.

    Returns:
        The graph with duplicate edges collapsed and sorted neighbor lists.

    Raises:
        GraphInputError: On a loop, an out-of-range id or a negative ``n``.
    """
    if n < 0:
        msg = f"vertex count must be non-negative, got {n}"
        raise GraphInputError(msg)
    nbr_sets: list[set[int]] = [set() for _ in range(n)]
    for u, v in edges:
        if not (0 <= u < n and 0 <= v < n):
            msg = f"edge ({u}, {v}) has a vertex id outside 0..{n - 1}"
            raise GraphInputError(msg)
        if u == v:
            msg = f"loop edge at vertex {u}"
            raise GraphInputError(msg)
        nbr_sets[u].add(v)
        nbr_sets[v].add(u)
    adjacency = tuple(tuple(sorted(s)) for s in nbr_sets)
    return Graph(n=n, adjacency=adjacency, labels=dict(labels or {}))


def components(g: Graph) -> list[list[int]]:
    """Connected components, each sorted, ordered by smallest member."""
    seen = [False] * g.n
    result: list[list[int]] = []
    for root in range(g.n):
        if seen[root]:
            continue
        seen[root] = True
        comp = [root]
        queue = deque([root])
        while queue:
            v = queue.popleft()
            for w in g.adjacency[v]:
                if not seen[w]:
                    seen[w] = True
                    comp.append(w)
                    queue.append(w)
        result.append(sorted(comp))
    return result


def require_connected(g: Graph) -> None:
    """Raise DisconnectedGraphError unless ``g`` is connected and non-empty."""
    if g.n == 0:
        msg = "graph has no vertices"
        raise GraphInputError(msg)
    if not g.connected:
        raise DisconnectedGraphError([comp[0] for comp in components(g)])


def bfs_distances(g: Graph, src: int) -> list[int]:
    """Hop distances from ``src`` to every vertex.

    Args:
        g: Connected graph.
        src: Source vertex.

    Returns:
        Distance list indexed by vertex id.

    Raises:
        PreconditionError: If ``src`` is not a vertex of ``g``.
    """
    require_connected(g)
    if not 0 <= src < g.n:
        msg = f"source {src} is not a vertex (n={g.n})"
        raise PreconditionError(msg)
    dist = [-1] * g.n
    dist[src] = 0
    queue = deque([src])
    adjacency = g.adjacency
    while queue:
        v = queue.popleft()
        dv = dist[v] + 1
        for w in adjacency[v]:
            if dist[w] < 0:
                dist[w] = dv
                queue.append(w)
    return dist


def bfs_tree(g: Graph, src: int) -> tuple[list[int], list[int]]:
    """Distances from ``src`` and smallest-id shortest-path parents.

    ``parent[v]`` is the smallest neighbor of ``v`` one step closer to
    ``src``; ``parent[src]`` is ``-1``.
    """
    dist = bfs_distances(g, src)
    parent = [-1] * g.n
    for v in range(g.n):
        if v == src:
            continue
        target = dist[v] - 1
        for w in g.adjacency[v]:
            if dist[w] == target:
                parent[v] = w
                break
    return dist, parent


def trace_path(parent: Sequence[int], src: int, dst: int) -> PathSeq:
    """Walk parent pointers from ``dst`` back to ``src``.

    Returns:
        The path ``src .. dst``, tagged isometric.
    """
    path = [dst]
    while path[-1] != src:
        path.append(parent[path[-1]])
    path.reverse()
    return PathSeq(tuple(path), isometric=True)


def distance_matrix(g: Graph) -> DistMatrix:
    """All-pairs hop distances by one BFS per vertex."""
    require_connected(g)
    matrix = np.zeros((g.n, g.n), dtype=np.int64)
    for v in range(g.n):
        matrix[v, :] = bfs_distances(g, v)
    return matrix


def _canonical_cycle(cycle: Sequence[int]) -> tuple[int, ...]:
    """Rotate/reflect so the smallest id is first, smaller neighbor second."""
    start = cycle.index(min(cycle))
    rotated = list(cycle[start:]) + list(cycle[:start])
    if len(rotated) > 2 and rotated[-1] < rotated[1]:
        rotated = [rotated[0], *reversed(rotated[1:])]
    return tuple(rotated)


def _order_cycle(vertices: set[int], edges: list[tuple[int, int]]) -> tuple[int, ...]:
    """Cyclic vertex order of a block known to be a chordless cycle."""
    nbrs: dict[int, list[int]] = {v: [] for v in vertices}
    for u, v in edges:
        nbrs[u].append(v)
        nbrs[v].append(u)
    start = min(vertices)
    order = [start]
    prev, cur = start, min(nbrs[start])
    while cur != start:
        order.append(cur)
        a, b = nbrs[cur]
        prev, cur = cur, (b if a == prev else a)
    return _canonical_cycle(order)


def _biconnected_blocks(g: Graph) -> list[list[tuple[int, int]]]:
    """Edge lists of the biconnected blocks, by iterative Tarjan DFS."""
    disc = [-1] * g.n
    low = [0] * g.n
    clock = 0
    blocks: list[list[tuple[int, int]]] = []
    edge_stack: list[tuple[int, int]] = []
    for root in range(g.n):
        if disc[root] != -1:
            continue
        disc[root] = low[root] = clock
        clock += 1
        stack: list[tuple[int, int, Iterator[int]]] = [
            (root, -1, iter(g.adjacency[root]))
        ]
        while stack:
            v, parent, it = stack[-1]
            advanced = False
            for w in it:
                if w == parent:
                    continue
                if disc[w] == -1:
                    edge_stack.append((v, w))
                    disc[w] = low[w] = clock
                    clock += 1
                    stack.append((w, v, iter(g.adjacency[w])))
                    advanced = True
                    break
                if disc[w] < disc[v]:
                    edge_stack.append((v, w))
                    low[v] = min(low[v], disc[w])
            if advanced:
                continue
            stack.pop()
            if not stack:
                continue
            u = stack[-1][0]
            low[u] = min(low[u], low[v])
            if low[v] >= disc[u]:
                block: list[tuple[int, int]] = []
                while True:
                    edge = edge_stack.pop()
                    block.append(edge)
                    if edge == (u, v):
                        break
                blocks.append(block)
    return blocks


def _two_cycles_sharing_edge(
    vertices: set[int], edges: list[tuple[int, int]]
) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Find two distinct cycles sharing an edge inside a non-cycle block."""
    nbrs: dict[int, list[int]] = {v: [] for v in vertices}
    for u, v in edges:
        nbrs[u].append(v)
        nbrs[v].append(u)
    for adj in nbrs.values():
        adj.sort()

    # Fundamental cycle of the first non-tree edge of a BFS tree.
    root = min(vertices)
    parent = {root: root}
    depth = {root: 0}
    queue = deque([root])
    tree_edges: set[frozenset[int]] = set()
    while queue:
        v = queue.popleft()
        for w in nbrs[v]:
            if w not in parent:
                parent[w] = v
                depth[w] = depth[v] + 1
                tree_edges.add(frozenset((v, w)))
                queue.append(w)
    a, b = next(
        (u, v) for u, v in sorted(edges) if frozenset((u, v)) not in tree_edges
    )
    left, right = [a], [b]
    while left[-1] != right[-1]:
        if depth[left[-1]] >= depth[right[-1]]:
            left.append(parent[left[-1]])
        else:
            right.append(parent[right[-1]])
    first = left + right[-2::-1]
    on_first = set(first)
    first_edges = {
        frozenset((first[i], first[(i + 1) % len(first)])) for i in range(len(first))
    }

    # An ear: leaves the first cycle at u and returns at t != u.
    u, w = next(
        (x, y)
        for x in first
        for y in nbrs[x]
        if frozenset((x, y)) not in first_edges
    )
    ear = [u, w]
    if w not in on_first:
        prev = {w: w}
        queue = deque([w])
        target = -1
        while queue and target < 0:
            x = queue.popleft()
            for y in nbrs[x]:
                if y == u or y in prev:
                    continue
                prev[y] = x
                if y in on_first:
                    target = y
                    break
                queue.append(y)
        back = [target]
        while back[-1] != w:
            back.append(prev[back[-1]])
        ear = [u, *reversed(back)]
    t = ear[-1]
    iu, it = first.index(u), first.index(t)
    if iu < it:
        arc = first[iu : it + 1]
    else:
        arc = first[iu:] + first[: it + 1]
    second = arc + ear[-2:0:-1]
    return _canonical_cycle(first), _canonical_cycle(second)


def validate_cactus(g: Graph) -> CactusCertificate:
    """Decompose ``g`` into blocks and decide whether it is a cactus.

    Args:
        g: Connected graph.

    Returns:
        Certificate listing canonical blocks; on failure the witness holds
        two distinct cycles sharing an edge.
    """
    require_connected(g)
    blocks: list[Block] = []
    witness = None
    for edge_block in _biconnected_blocks(g):
        vertices = {x for e in edge_block for x in e}
        if len(edge_block) == 1:
            u, v = edge_block[0]
            blocks.append(Block("edge", (min(u, v), max(u, v))))
        elif len(edge_block) == len(vertices):
            blocks.append(Block("cycle", _order_cycle(vertices, edge_block)))
        elif witness is None:
            witness = _two_cycles_sharing_edge(vertices, edge_block)
    if witness is not None:
        logger.debug("Not a cactus: cycles %s and %s share an edge", *witness)
        return CactusCertificate(False, (), witness)
    blocks.sort(key=lambda b: b.vertices)
    return CactusCertificate(True, tuple(blocks))


def require_cactus(g: Graph) -> CactusCertificate:
    """Validate ``g`` and raise NotACactusError if it is not a cactus."""
    cert = validate_cactus(g)
    if not cert.is_cactus:
        msg = f"graph is not a cactus: cycles {cert.witness} share an edge"
        raise NotACactusError(msg, cert)
    return cert


@dataclass(frozen=True)
class BlockCutTree:
    """Incidence between vertices and blocks of a cactus.

    ``blocks_of[v]`` lists the indices (into the certificate's blocks) of the
    blocks containing ``v``; cut vertices are those in more than one block.
    """

    blocks_of: tuple[tuple[int, ...], ...]

    @property
    def cut_vertices(self) -> tuple[int, ...]:
        """Vertices shared by two or more blocks."""
        return tuple(v for v, bs in enumerate(self.blocks_of) if len(bs) > 1)

    def tree_edges(self) -> list[tuple[int, int]]:
        """``(vertex, block)`` pairs for every cut vertex."""
        return [(v, b) for v in self.cut_vertices for b in self.blocks_of[v]]


def block_cut_tree(cert: CactusCertificate, n: int) -> BlockCutTree:
    """Vertex-to-block incidence of a cactus certificate on ``n`` vertices."""
    if not cert.is_cactus:
        msg = "block-cut tree requires a cactus certificate"
        raise NotACactusError(msg, cert)
    blocks_of: list[list[int]] = [[] for _ in range(n)]
    for b, block in enumerate(cert.blocks):
        for v in block.vertices:
            blocks_of[v].append(b)
    return BlockCutTree(tuple(tuple(bs) for bs in blocks_of))


def _report(ecc: Sequence[int]) -> RadiusReport:
    radius = min(ecc)
    return RadiusReport(
        radius=radius,
        diameter=max(ecc),
        centers=tuple(v for v, e in enumerate(ecc) if e == radius),
        eccentricities=tuple(ecc),
    )


def _sliding_max(values: Sequence[int], width: int) -> list[int]:
    """``out[s] = max(values[s:s + width])`` by a monotonic deque."""
    out: list[int] = []
    window: deque[int] = deque()
    for j, value in enumerate(values):
        while window and values[window[-1]] <= value:
            window.pop()
        window.append(j)
        if window[0] <= j - width:
            window.popleft()
        if j >= width - 1:
            out.append(values[window[0]])
    return out


def _ring_far(values: Sequence[int]) -> list[int]:
    """For each ring position i, max over j != i of ring_dist(i, j) + values[j]."""
    length = len(values)
    half = length // 2
    doubled = range(2 * length)
    forward = [values[j % length] + j for j in doubled]
    backward = [values[j % length] - j for j in doubled]
    best = [-(10**18)] * length
    if half > 0:
        near = _sliding_max(forward, half)
        for i in range(length):
            best[i] = near[i + 1] - i
    rest = length - 1 - half
    if rest > 0:
        far = _sliding_max(backward, rest)
        for i in range(length):
            best[i] = max(best[i], far[i + half + 1] + i + length)
    return best


def _ring_dist(i: int, j: int, length: int) -> int:
    d = abs(i - j)
    return min(d, length - d)


def _cactus_eccentricities(g: Graph, cert: CactusCertificate) -> list[int]:
    """All eccentricities of a cactus in O(n) by rerooting its block-cut tree."""
    blocks_of = block_cut_tree(cert, g.n).blocks_of

    rings: list[list[int]] = [[] for _ in cert.blocks]
    order: list[int] = []
    seen = [False] * len(cert.blocks)
    queue = deque([0])
    while queue:
        v = queue.popleft()
        for b in blocks_of[v]:
            if seen[b]:
                continue
            seen[b] = True
            order.append(b)
            cyc = cert.blocks[b].vertices
            start = cyc.index(v)
            rings[b] = list(cyc[start:] + cyc[:start])
            queue.extend(rings[b][1:])

    down = [0] * g.n
    contrib = [0] * len(cert.blocks)
    for b in reversed(order):
        ring = rings[b]
        length = len(ring)
        contrib[b] = max(
            _ring_dist(0, i, length) + down[ring[i]] for i in range(1, length)
        )
        root = ring[0]
        down[root] = max(down[root], contrib[b])

    # Two best child-block contributions per vertex, for exclusion.
    top1 = [0] * g.n
    top1_block = [-1] * g.n
    top2 = [0] * g.n
    for b in order:
        root = rings[b][0]
        if contrib[b] > top1[root]:
            top2[root] = top1[root]
            top1[root], top1_block[root] = contrib[b], b
        elif contrib[b] > top2[root]:
            top2[root] = contrib[b]

    up = [0] * g.n
    for b in order:
        ring = rings[b]
        root = ring[0]
        sibling = top2[root] if top1_block[root] == b else top1[root]
        values = [max(up[root], sibling)] + [down[v] for v in ring[1:]]
        far = _ring_far(values)
        for i in range(1, len(ring)):
            up[ring[i]] = far[i]
    return [max(d, u) for d, u in zip(down, up, strict=True)]


def radius_center(
    g: Graph,
    method: Literal["auto", "brute", "linear"] = "auto",
    certificate: CactusCertificate | None = None,
) -> RadiusReport:
    """Exact radius, diameter and center set.

    Args:
        g: Connected graph.
        method: ``"brute"`` runs BFS from every vertex; ``"linear"`` uses the
            block-cut tree of a cactus; ``"auto"`` picks linear for cacti.
        certificate: Block decomposition of ``g`` if already computed.

    Returns:
        The radius report.

    Raises:
        NotACactusError: If ``method="linear"`` and ``g`` is not a cactus.
    """
    require_connected(g)
    if g.n == 1:
        return RadiusReport(0, 0, (0,), (0,))
    if method != "brute":
        cert = certificate if certificate is not None else validate_cactus(g)
        if cert.is_cactus:
            return _report(_cactus_eccentricities(g, cert))
        if method == "linear":
            msg = "linear-time center requires a cactus"
            raise NotACactusError(msg, cert)
    return _report([max(bfs_distances(g, v)) for v in range(g.n)])


def check_path(g: Graph, p: PathSeq) -> None:
    """Raise PreconditionError unless ``p`` is a simple path in ``g``."""
    verts = p.vertices
    if not verts:
        msg = "empty path"
        raise PreconditionError(msg)
    if len(set(verts)) != len(verts):
        msg = f"path repeats a vertex: {verts}"
        raise PreconditionError(msg)
    for a, b in zip(verts, verts[1:], strict=False):
        if not (0 <= a < g.n and 0 <= b < g.n) or not g.has_edge(a, b):
            msg = f"path step ({a}, {b}) is not an edge"
            raise PreconditionError(msg)


def is_isometric_path(g: Graph, p: PathSeq) -> bool:
    """Whether path ``p`` is a shortest path between its endpoints.

    Raises:
        PreconditionError: If ``p`` is not a path in ``g``.
    """
    check_path(g, p)
    return bfs_distances(g, p[0])[p[-1]] == p.length
