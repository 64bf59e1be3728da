"""Radial paths, the joining path and the H-subgraph of a cactus center.

Vertex names follow the construction: ``P`` and ``Q`` are shortest paths
leaving the center ``c``; when some path avoiding ``c`` joins them (``F_1``)
the cycle ``F_1 + F_2`` is relabelled ``c_0 .. c_{gamma-1}`` and the tails of
``P`` and ``Q`` beyond the cycle become the pendant paths ``P'`` and ``Q'``.
"""

from __future__ import annotations

import dataclasses
import logging
from collections import deque
from dataclasses import dataclass
from typing import Any

from cactus_multipacking.exceptions import InvariantViolation, PreconditionError
from cactus_multipacking.graph_core import (
    Graph,
    PathSeq,
    RadiusReport,
    bfs_distances,
    bfs_tree,
    check_path,
    radius_center,
    require_cactus,
    trace_path,
)

logger = logging.getLogger(__name__)

__all__ = [
    "HSubgraph",
    "JoiningPath",
    "PathSeq",
    "attach_r_path",
    "build_h",
    "disjoint_radial_path",
    "joining_path",
    "mirror_h",
    "radial_path",
]


@dataclass(frozen=True)
class JoiningPath:
    """The unique path ``f1`` from ``P[i]`` to ``Q[j]`` avoiding the center."""

    i: int
    j: int
    f1: PathSeq


@dataclass(frozen=True)
class HSubgraph:
    """A cycle ``c_0 .. c_{gamma-1}`` with pendant paths at ``c_0``, ``c_m``, ``c_t``.

    ``F_2`` is ``c_0 .. c_m`` (it contains the center ``c_k``) and ``F_1`` is
    ``c_m .. c_{gamma-1}, c_0``. ``p_prime`` starts at ``c_0``, ``q_prime`` at
    ``c_m`` and the optional ``r_prime`` at ``c_t``.
    """

    cycle: tuple[int, ...]
    m: int
    k: int
    p_prime: PathSeq
    q_prime: PathSeq
    r_prime: PathSeq | None = None
    t: int | None = None

    @property
    def gamma(self) -> int:
        """Cycle length."""
        return len(self.cycle)

    @property
    def alpha(self) -> int:
        """Length of ``P'``."""
        return self.p_prime.length

    @property
    def beta(self) -> int:
        """Length of ``Q'``."""
        return self.q_prime.length

    @property
    def delta(self) -> int:
        """Length of ``R'`` (0 when absent)."""
        return self.r_prime.length if self.r_prime is not None else 0

    @property
    def x(self) -> int:
        """Length of ``F_1``."""
        return self.gamma - self.m

    @property
    def y(self) -> int:
        """Length of ``c_0 .. c_k``."""
        return self.k

    @property
    def z(self) -> int:
        """Length of ``c_k .. c_m``."""
        return self.m - self.k

    @property
    def g(self) -> int:
        """Index of the midpoint of ``F_1``."""
        return self.m + self.x // 2

    def c(self, index: int) -> int:
        """Cycle vertex ``c_index`` (indices taken mod gamma)."""
        return self.cycle[index % self.gamma]

    def cycle_distance(self, i: int, j: int) -> int:
        """Distance between ``c_i`` and ``c_j`` along the cycle."""
        d = abs(i - j) % self.gamma
        return min(d, self.gamma - d)

    def vertices(self) -> set[int]:
        """All vertices of the subgraph."""
        verts = set(self.cycle) | set(self.p_prime.vertices)
        verts |= set(self.q_prime.vertices)
        if self.r_prime is not None:
            verts |= set(self.r_prime.vertices)
        return verts

    def to_json(self) -> dict[str, Any]:
        """Diagnostic JSON with the documented field names."""
        return {
            "gamma": self.gamma,
            "m": self.m,
            "t": self.t,
            "k": self.k,
            "alpha": self.alpha,
            "beta": self.beta,
            "delta": self.delta,
            "x": self.x,
            "y": self.y,
            "z": self.z,
            "g": self.g,
            "cycle": list(self.cycle),
            "p_prime": list(self.p_prime.vertices),
            "q_prime": list(self.q_prime.vertices),
            "r_prime": None if self.r_prime is None else list(self.r_prime.vertices),
        }


def radial_path(g: Graph, c: int, r: int) -> PathSeq:
    """Shortest path from ``c`` to its smallest-id farthest vertex.

    Args:
        g: Connected graph.
        c: Vertex of eccentricity ``r``.
        r: Expected eccentricity of ``c`` (the radius when ``c`` is a center).

    Returns:
        An isometric path of length ``r`` starting at ``c``.

    Raises:
        PreconditionError: If the eccentricity of ``c`` differs from ``r``.
    """
    dist, parent = bfs_tree(g, c)
    ecc = max(dist)
    if ecc != r:
        msg = f"vertex {c} has eccentricity {ecc}, expected {r}"
        raise PreconditionError(msg)
    far = dist.index(r)
    return trace_path(parent, c, far)


def _oriented(p: PathSeq, c: int) -> PathSeq:
    if p[0] == c:
        return p
    if p[-1] == c:
        return p.reversed()
    msg = f"path {p.vertices} does not end at {c}"
    raise PreconditionError(msg)


def disjoint_radial_path(
    g: Graph, p: PathSeq, c: int, report: RadiusReport | None = None
) -> PathSeq:
    """A longest shortest path from ``c`` meeting ``p`` only in ``c``.

    Vertices reachable from ``c`` through the shortest-path DAG without
    touching ``p`` are marked in BFS order; the smallest marked vertex at
    distance ``r`` (else ``r - 1``) is traced back through marked parents.

    Args:
        g: Connected cactus.
        p: Isometric path of length ``r = rad(g)`` with endpoint ``c``.
        c: A center of ``g``.
        report: Radius report of ``g`` if already computed.

    Returns:
        Isometric path ``Q`` from ``c`` with ``r - 1 <= l(Q) <= r``.

    Raises:
        PreconditionError: If ``c`` is not a center or ``p`` is not radial.
        InvariantViolation: If no such path exists (impossible on a cactus).
    """
    if report is None:
        require_cactus(g)
        report = radius_center(g)
    p = _oriented(p, c)
    r = report.radius
    if c not in report.centers:
        msg = f"vertex {c} is not a center"
        raise PreconditionError(msg)
    if r < 1 or p.length != r:
        msg = f"path length {p.length} does not match radius {r} >= 1"
        raise PreconditionError(msg)
    check_path(g, p)
    dist = bfs_distances(g, c)
    if dist[p[-1]] != r:
        msg = "path P is not isometric"
        raise PreconditionError(msg)

    on_p = set(p.vertices[1:])
    buckets: list[list[int]] = [[] for _ in range(r + 1)]
    for v, d in enumerate(dist):
        buckets[d].append(v)
    free = [False] * g.n
    free[c] = True
    for d in range(1, r + 1):
        for v in buckets[d]:
            if v in on_p:
                continue
            free[v] = any(free[w] and dist[w] == d - 1 for w in g.adjacency[v])

    for target_len in (r, r - 1):
        candidates = [v for v in buckets[target_len] if free[v]]
        if candidates:
            break
    else:
        msg = f"no path of length >= {r - 1} from {c} avoids P"
        raise InvariantViolation(msg)
    path = [min(candidates)]
    while path[-1] != c:
        v = path[-1]
        path.append(
            next(w for w in g.adjacency[v] if free[w] and dist[w] == dist[v] - 1)
        )
    path.reverse()
    logger.debug("Disjoint radial path of length %d from %d", len(path) - 1, c)
    return PathSeq(tuple(path), isometric=True)


def joining_path(g: Graph, p: PathSeq, q: PathSeq, c: int) -> JoiningPath | None:
    """The unique path joining ``P`` and ``Q`` outside ``c``, if any.

    Args:
        g: Connected cactus.
        p: Isometric path from ``c``.
        q: Isometric path from ``c`` with ``V(P) & V(Q) = {c}``.
        c: Common endpoint.

    Returns:
        The joining path, or ``None`` when ``c`` separates ``P`` from ``Q``.

    Raises:
        PreconditionError: If the paths share a vertex besides ``c``.
        InvariantViolation: If a second, edge-disjoint connection exists.
    """
    p, q = _oriented(p, c), _oriented(q, c)
    on_p = set(p.vertices[1:])
    on_q = set(q.vertices[1:])
    if on_p & on_q:
        msg = "P and Q share a vertex other than the center"
        raise PreconditionError(msg)
    if not on_p or not on_q:
        return None

    sources = sorted(on_p)
    prev = {v: v for v in sources}
    queue = deque(sources)
    hit = -1
    while queue and hit < 0:
        x = queue.popleft()
        for y in g.adjacency[x]:
            if y == c or y in prev:
                continue
            prev[y] = x
            if y in on_q:
                hit = y
                break
            queue.append(y)
    if hit < 0:
        return None

    walk = [hit]
    while prev[walk[-1]] != walk[-1]:
        walk.append(prev[walk[-1]])
    walk.reverse()
    f1 = PathSeq(tuple(walk))
    _assert_unique_join(g, f1, on_p, on_q, c)
    return JoiningPath(i=p.vertices.index(walk[0]), j=q.vertices.index(hit), f1=f1)


def _assert_unique_join(
    g: Graph, f1: PathSeq, on_p: set[int], on_q: set[int], c: int
) -> None:
    """No P-Q connection may survive deleting ``c`` and the edges of ``f1``."""
    cut = {
        frozenset((a, b)) for a, b in zip(f1.vertices, f1.vertices[1:], strict=False)
    }
    seen = set(on_p)
    queue = deque(sorted(on_p))
    while queue:
        x = queue.popleft()
        for y in g.adjacency[x]:
            if y == c or y in seen or frozenset((x, y)) in cut:
                continue
            if y in on_q:
                msg = (
                    f"second joining path reaches {y}; the graph is not a cactus "
                    "or P, Q are not shortest paths"
                )
                raise InvariantViolation(msg)
            seen.add(y)
            queue.append(y)


def build_h(g: Graph, p: PathSeq, q: PathSeq, jp: JoiningPath, c: int) -> HSubgraph:
    """Assemble the H-subgraph from ``P``, ``Q`` and their joining path.

    Returns:
        ``H`` with ``c_0 = P[i]``, ``c_m = Q[j]``, ``m = i + j``, ``k = i``.

    Raises:
        PreconditionError: If ``jp`` does not connect ``P[i]`` and ``Q[j]``.
    """
    p, q = _oriented(p, c), _oriented(q, c)
    if not (1 <= jp.i <= p.length and 1 <= jp.j <= q.length):
        msg = f"joining indices ({jp.i}, {jp.j}) out of range"
        raise PreconditionError(msg)
    if jp.f1[0] != p[jp.i] or jp.f1[-1] != q[jp.j] or jp.f1.length < 1:
        msg = "joining path endpoints do not match P and Q"
        raise PreconditionError(msg)
    check_path(g, jp.f1)
    f2 = p.vertices[jp.i : 0 : -1] + (c,) + q.vertices[1 : jp.j + 1]
    cycle = f2 + jp.f1.vertices[-2:0:-1]
    h = HSubgraph(
        cycle=cycle,
        m=jp.i + jp.j,
        k=jp.i,
        p_prime=PathSeq(p.vertices[jp.i :], isometric=True),
        q_prime=PathSeq(q.vertices[jp.j :], isometric=True),
    )
    logger.debug(
        "Built H: gamma=%d m=%d x=%d alpha=%d beta=%d",
        h.gamma,
        h.m,
        h.x,
        h.alpha,
        h.beta,
    )
    return h


def mirror_h(h: HSubgraph) -> HSubgraph:
    """Reverse the cycle orientation keeping ``c_0`` fixed.

    In the mirrored subgraph ``F_1`` and ``F_2`` trade places; the pendant
    paths are unchanged.
    """
    gamma = h.gamma
    cycle = (h.cycle[0], *h.cycle[:0:-1])
    return HSubgraph(
        cycle=cycle,
        m=(gamma - h.m) % gamma,
        k=(gamma - h.k) % gamma,
        p_prime=h.p_prime,
        q_prime=h.q_prime,
        r_prime=h.r_prime,
        t=None if h.t is None else (gamma - h.t) % gamma,
    )


def attach_r_path(
    g: Graph,
    h: HSubgraph,
    u: int,
    tree: tuple[list[int], list[int]] | None = None,
) -> HSubgraph:
    """Attach the tail of a shortest ``c_g``-``u`` path as ``R'``.

    Args:
        g: Connected cactus containing ``h``.
        h: H-subgraph without ``R'``.
        u: Vertex outside ``H`` at distance ``rad(g)`` from ``c_g``.
        tree: BFS distances and parents from ``c_g`` if already computed.

    Returns:
        ``h`` with ``R'`` from ``c_t`` (the last vertex of the path in ``H``)
        to ``u`` and ``delta = d(c_g, u) - d(c_g, c_t)``.

    Raises:
        InvariantViolation: If ``c_t`` is not an inner vertex of ``F_2``.
    """
    cg = h.c(h.g)
    dist, parent = tree if tree is not None else bfs_tree(g, cg)
    path = trace_path(parent, cg, u)
    in_h = h.vertices()
    last = max(i for i, v in enumerate(path.vertices) if v in in_h)
    ct = path[last]
    position = {v: i for i, v in enumerate(h.cycle)}
    t = position.get(ct)
    if t is None or not (1 <= t <= h.m - 1):
        msg = f"R leaves H at {ct}, which is not an inner vertex of F_2"
        raise InvariantViolation(msg)
    r_prime = PathSeq(path.vertices[last:], isometric=True)
    logger.debug("Attached R' at c_%d with delta=%d", t, r_prime.length)
    return dataclasses.replace(h, r_prime=r_prime, t=t)
