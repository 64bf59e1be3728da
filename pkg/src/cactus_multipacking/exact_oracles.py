"""Exact desk-scale oracles for MP, gamma_b, domination and the fractional LP.

All searches are deterministic (vertex-id order) and bounded by an explicit
node budget. Running out of budget is reported in the result ``status``
together with the bounds known at that point; it never raises.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Literal

from cactus_multipacking.config import OracleBudget
from cactus_multipacking.exceptions import (
    DefinitionError,
    InvariantViolation,
    PreconditionError,
)
from cactus_multipacking.graph_core import (
    Graph,
    RadiusReport,
    bfs_distances,
    distance_matrix,
    radius_center,
    require_connected,
)
from cactus_multipacking.rational_lp import format_rational, maximize

logger = logging.getLogger(__name__)

SearchStatus = Literal["exact", "budget_exhausted"]
LpStatus = Literal["optimal", "infeasible_guard"]
WeightFn = Mapping[int, Fraction]


@dataclass(frozen=True)
class Broadcast:
    """Vertex to power assignment; only towers (power > 0) are stored."""

    powers: dict[int, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        """Drop zero powers and reject negative ones."""
        if any(p < 0 for p in self.powers.values()):
            msg = f"broadcast powers must be non-negative: {self.powers}"
            raise PreconditionError(msg)
        object.__setattr__(
            self,
            "powers",
            {v: p for v, p in sorted(self.powers.items()) if p},
        )

    @property
    def cost(self) -> int:
        """Total power."""
        return sum(self.powers.values())

    @property
    def towers(self) -> tuple[int, ...]:
        """Vertices with positive power, ascending."""
        return tuple(self.powers)

    def to_json(self) -> dict[str, int]:
        """``{"id": power}`` map."""
        return {str(v): p for v, p in self.powers.items()}


@dataclass(frozen=True)
class BroadcastCheck:
    """Outcome of :func:`verify_broadcast`."""

    dominating: bool
    efficient: bool
    undominated: tuple[int, ...]
    cost: int


@dataclass(frozen=True)
class FractionalCheck:
    """Outcome of :func:`verify_fractional_weights`.

    ``violation`` is ``(v, r, w(N_r[v]))`` for the first failing pair.
    """

    feasible: bool
    value: Fraction
    violation: tuple[int, int, Fraction] | None = None


@dataclass(frozen=True)
class LpSolution:
    """Matched optimal solutions of the broadcast covering LP and its dual.

    ``primal`` holds the covering weights per ``(vertex, power)`` column and
    ``dual`` the fractional multipacking weights per vertex. Zero entries are
    omitted. Both sides have objective ``value``.
    """

    value: Fraction
    primal: dict[tuple[int, int], Fraction]
    dual: dict[int, Fraction]
    status: LpStatus = "optimal"
    columns: int = 0
    pivots: int = 0

    def to_json(self) -> dict[str, Any]:
        """JSON object with rationals as ``"p/q"`` strings."""
        return {
            "value": format_rational(self.value),
            "status": self.status,
            "columns": self.columns,
            "pivots": self.pivots,
            "broadcast_weights": {
                f"{v}:{k}": format_rational(x)
                for (v, k), x in sorted(self.primal.items())
            },
            "multipacking_weights": {
                str(v): format_rational(y) for v, y in sorted(self.dual.items())
            },
        }


@dataclass(frozen=True)
class SearchResult:
    """Common fields of a budgeted exact search."""

    status: SearchStatus
    lower: int
    upper: int
    nodes: int

    @property
    def exact(self) -> bool:
        """Whether the optimum is known."""
        return self.status == "exact"

    @property
    def value(self) -> int | None:
        """The optimum, or ``None`` when the budget ran out first."""
        return self.lower if self.exact else None

    def _base_json(self) -> dict[str, Any]:
        return {
            "status": self.status,
            "value": self.value,
            "lower": self.lower,
            "upper": self.upper,
            "nodes": self.nodes,
        }


@dataclass(frozen=True)
class MPResult(SearchResult):
    """Maximum multipacking search result; ``witness`` has ``lower`` members."""

    witness: tuple[int, ...] = ()

    def to_json(self) -> dict[str, Any]:
        """JSON object for reports."""
        return {**self._base_json(), "witness": list(self.witness)}


@dataclass(frozen=True)
class GammaBResult(SearchResult):
    """Broadcast domination search result; ``witness`` costs ``upper``."""

    witness: Broadcast | None = None
    efficient: bool | None = None
    method: Literal["sandwich", "search"] = "search"

    def to_json(self) -> dict[str, Any]:
        """JSON object for reports."""
        return {
            **self._base_json(),
            "method": self.method,
            "efficient": self.efficient,
            "witness": None if self.witness is None else self.witness.to_json(),
        }


@dataclass(frozen=True)
class DominationResult(SearchResult):
    """Minimum dominating set search result; ``witness`` has ``upper`` members."""

    witness: tuple[int, ...] = ()

    def to_json(self) -> dict[str, Any]:
        """JSON object for reports."""
        return {**self._base_json(), "witness": list(self.witness)}


class _BudgetExhausted(Exception):
    """Unwinds a search when the node budget is spent."""


class _Counter:
    def __init__(self, limit: int) -> None:
        self.limit = limit
        self.nodes = 0

    def tick(self) -> None:
        self.nodes += 1
        if self.nodes > self.limit:
            raise _BudgetExhausted


def _lowest_bit(mask: int) -> int:
    return (mask & -mask).bit_length() - 1


def _bits(mask: int) -> Iterable[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class _Metric:
    """Distance rows, eccentricities and radius of a connected graph."""

    def __init__(self, g: Graph, report: RadiusReport | None = None) -> None:
        require_connected(g)
        self.n = g.n
        self.dist: list[list[int]] = distance_matrix(g).tolist()
        self.ecc = [max(row) for row in self.dist]
        self.report = report if report is not None else radius_center(g)
        self.radius = self.report.radius


class _PackingState:
    """Incremental multipacking feasibility.

    ``slack[v][s] = s - |N_s[v] & M|`` for ``1 <= s <= ecc(v)``; the constraint
    at ``s = ecc(v)`` already implies every larger radius.
    """

    def __init__(self, metric: _Metric) -> None:
        self.metric = metric
        self.slack = [
            [metric.n + 1, *range(1, metric.ecc[v] + 1)] for v in range(metric.n)
        ]

    def can_add(self, u: int) -> bool:
        row = self.metric.dist[u]
        for v, slack in enumerate(self.slack):
            if min(slack[max(row[v], 1) :]) < 1:
                return False
        return True

    def _shift(self, u: int, delta: int) -> None:
        row = self.metric.dist[u]
        for v, slack in enumerate(self.slack):
            for s in range(max(row[v], 1), len(slack)):
                slack[s] += delta

    def add(self, u: int) -> None:
        self._shift(u, -1)

    def remove(self, u: int) -> None:
        self._shift(u, 1)


def _greedy_packing(metric: _Metric, candidates: Iterable[int]) -> list[int]:
    state = _PackingState(metric)
    chosen: list[int] = []
    for u in candidates:
        if state.can_add(u):
            state.add(u)
            chosen.append(u)
    return chosen


def lower_bound_multipacking(
    g: Graph, dominated: Iterable[int] = ()
) -> tuple[int, ...]:
    """Greedy multipacking among the vertices not in ``dominated``.

    A tower of power ``p`` hears at most ``p`` members of a multipacking, so
    the size of the returned set bounds from below the cost of dominating the
    remaining vertices.
    """
    metric = _Metric(g)
    skip = set(dominated)
    return tuple(_greedy_packing(metric, (v for v in range(g.n) if v not in skip)))


def verify_broadcast(g: Graph, f: Broadcast) -> BroadcastCheck:
    """Check domination and efficiency of ``f`` by BFS from every tower.

    Raises:
        PreconditionError: If a tower id or power is out of range.
    """
    require_connected(g)
    diam = radius_center(g).diameter
    for v, p in f.powers.items():
        if not 0 <= v < g.n:
            msg = f"tower {v} is not a vertex"
            raise PreconditionError(msg)
        if p > diam:
            msg = f"power {p} at {v} exceeds the diameter {diam}"
            raise PreconditionError(msg)
    hears = [0] * g.n
    for t, p in f.powers.items():
        for u, d in enumerate(bfs_distances(g, t)):
            if d <= p:
                hears[u] += 1
    undominated = tuple(u for u, h in enumerate(hears) if h == 0)
    return BroadcastCheck(
        dominating=not undominated,
        efficient=all(h <= 1 for h in hears),
        undominated=undominated,
        cost=f.cost,
    )


def verify_fractional_weights(g: Graph, w: WeightFn) -> FractionalCheck:
    """Check ``w(N_r[v]) <= r`` for every vertex and ``1 <= r <= diam``.

    Raises:
        PreconditionError: On negative weights or unknown vertex ids.
    """
    require_connected(g)
    for v, x in w.items():
        if not 0 <= v < g.n:
            msg = f"weight on unknown vertex {v}"
            raise PreconditionError(msg)
        if x < 0:
            msg = f"negative weight {x} on vertex {v}"
            raise PreconditionError(msg)
    total = sum((Fraction(x) for x in w.values()), Fraction(0))
    dist = [bfs_distances(g, v) for v in range(g.n)]
    diam = max(max(row) for row in dist)
    for v, row in enumerate(dist):
        rings = [Fraction(0)] * (max(row) + 1)
        for u, d in enumerate(row):
            if u in w:
                rings[d] += Fraction(w[u])
        running = Fraction(0)
        cumulative = []
        for ring in rings:
            running += ring
            cumulative.append(running)
        for r in range(1, diam + 1):
            load = cumulative[min(r, len(cumulative) - 1)]
            if load > r:
                return FractionalCheck(False, total, (v, r, load))
    return FractionalCheck(True, total)


def lp_fractional(g: Graph, report: RadiusReport | None = None) -> LpSolution:
    """Solve the fractional broadcast LP and its multipacking dual exactly.

    Rows are balls ``N_k[v]`` with ``1 <= k <= min(ecc(v), rad)``; identical
    balls are merged keeping the smallest power.

    Raises:
        DefinitionError: For the single-vertex graph.
    """
    require_connected(g)
    if g.n == 1:
        msg = "the fractional LP needs at least two vertices"
        raise DefinitionError(msg)
    metric = _Metric(g, report)
    balls: dict[tuple[int, ...], tuple[int, int]] = {}
    for v in range(g.n):
        row = metric.dist[v]
        for k in range(1, min(metric.ecc[v], metric.radius) + 1):
            key = tuple(u for u in range(g.n) if row[u] <= k)
            if key not in balls or k < balls[key][1]:
                balls[key] = (v, k)
    columns = list(balls.items())
    a = []
    for key, _ in columns:
        members = set(key)
        a.append([1 if u in members else 0 for u in range(g.n)])
    caps = [k for _, (_, k) in columns]
    result = maximize([1] * g.n, a, caps)
    primal = {col: x for (_, col), x in zip(columns, result.dual, strict=True) if x}
    dual = {v: y for v, y in enumerate(result.primal) if y}
    logger.debug(
        "Fractional LP: %d columns, %d pivots, value %s",
        len(columns),
        result.pivots,
        result.value,
    )
    return LpSolution(
        result.value, primal, dual, "optimal", len(columns), result.pivots
    )


def _clique_cover(mask: int, conflict: Sequence[int]) -> int:
    """Greedy clique cover size of ``mask`` in the distance-2 conflict graph."""
    count = 0
    while mask:
        w = _lowest_bit(mask)
        clique = 1 << w
        pool = conflict[w] & mask
        while pool:
            x = _lowest_bit(pool)
            clique |= 1 << x
            pool &= conflict[x]
        mask &= ~clique
        count += 1
    return count


def exact_mp(
    g: Graph,
    budget: OracleBudget | None = None,
    lp: LpSolution | None = None,
) -> MPResult:
    """Maximum multipacking by branch and bound.

    Vertices are branched in id order (include first). A partial set is kept
    feasible with incremental ball counts; the bound is the chosen size plus
    a clique cover of the remaining candidates in the distance-2 conflict
    graph, capped by ``min(floor(MP_f), rad)``.
    """
    budget = budget or OracleBudget()
    require_connected(g)
    if g.n == 1:
        return MPResult("exact", 1, 1, 0, (0,))
    metric = _Metric(g)
    lp = lp if lp is not None else lp_fractional(g, metric.report)
    cap = min(math.floor(lp.value), metric.radius)
    conflict = [
        sum(1 << w for w in range(g.n) if w != v and metric.dist[v][w] <= 2)
        for v in range(g.n)
    ]
    best = _greedy_packing(metric, range(g.n))
    counter = _Counter(budget.node_limit)
    state = _PackingState(metric)
    chosen: list[int] = []

    def search(cands: int) -> None:
        nonlocal best
        counter.tick()
        if len(best) >= cap:
            return
        if len(chosen) + _clique_cover(cands, conflict) <= len(best):
            return
        if not cands:
            best = list(chosen)
            return
        u = _lowest_bit(cands)
        rest = cands & ~(1 << u)
        if state.can_add(u):
            state.add(u)
            chosen.append(u)
            search(rest & ~conflict[u])
            chosen.pop()
            state.remove(u)
        search(rest)

    try:
        search((1 << g.n) - 1)
    except _BudgetExhausted:
        logger.warning(
            "exact_mp budget of %d nodes exhausted; MP in [%d, %d]",
            budget.node_limit,
            len(best),
            cap,
        )
        witness = tuple(sorted(best))
        return MPResult("budget_exhausted", len(best), cap, counter.nodes, witness)
    return MPResult("exact", len(best), len(best), counter.nodes, tuple(sorted(best)))


class _BroadcastSearch:
    """Depth-first search for a dominating broadcast of bounded cost."""

    def __init__(self, metric: _Metric, counter: _Counter) -> None:
        self.metric = metric
        self.counter = counter
        n = metric.n
        self.full = (1 << n) - 1
        self.balls: list[list[int]] = []
        for t in range(n):
            row = metric.dist[t]
            masks = [1 << t]
            for p in range(1, metric.ecc[t] + 1):
                masks.append(masks[-1] | sum(1 << u for u in range(n) if row[u] == p))
            self.balls.append(masks)

    def _packing_bound(self, undominated: int) -> int:
        return len(_greedy_packing(self.metric, _bits(undominated)))

    def find(self, budget: int) -> dict[int, int] | None:
        return self._dfs(0, 0, budget)

    def _dfs(
        self, dominated: int, towers: int, remaining: int
    ) -> dict[int, int] | None:
        self.counter.tick()
        if dominated == self.full:
            return {}
        if remaining <= 0:
            return None
        undominated = self.full & ~dominated
        if (
            undominated.bit_count() > remaining
            and self._packing_bound(undominated) > remaining
        ):
            return None
        u = _lowest_bit(undominated)
        metric = self.metric
        for t in range(metric.n):
            if towers >> t & 1:
                continue
            top = min(remaining, metric.ecc[t], metric.radius)
            for p in range(max(metric.dist[t][u], 1), top + 1):
                found = self._dfs(
                    dominated | self.balls[t][p], towers | 1 << t, remaining - p
                )
                if found is not None:
                    found[t] = p
                    return found
        return None


def _integral_lp_broadcast(lp: LpSolution) -> Broadcast | None:
    powers: dict[int, int] = {}
    for (v, k), x in lp.primal.items():
        if x != 1 or v in powers:
            return None
        powers[v] = k
    return Broadcast(powers)


def exact_gamma_b(
    g: Graph,
    budget: OracleBudget | None = None,
    hints: Iterable[Broadcast] = (),
    lp: LpSolution | None = None,
) -> GammaBResult:
    """Broadcast domination number by LP sandwich, then cost-bounded search.

    Candidate broadcasts (the radial one, ``hints`` and an integral LP
    primal) are verified first; one costing ``ceil(MP_f)`` is optimal without
    search. Otherwise targets ``B = ceil(MP_f) .. best - 1`` are tried in
    order by branching on the smallest undominated vertex.

    Raises:
        DefinitionError: For the single-vertex graph.
    """
    budget = budget or OracleBudget()
    require_connected(g)
    if g.n == 1:
        msg = "gamma_b is undefined for a graph of order 1"
        raise DefinitionError(msg)
    metric = _Metric(g)
    lp = lp if lp is not None else lp_fractional(g, metric.report)
    lower = math.ceil(lp.value)

    candidates = [Broadcast({metric.report.centers[0]: metric.radius}), *hints]
    integral = _integral_lp_broadcast(lp)
    if integral is not None:
        candidates.append(integral)
    best: Broadcast | None = None
    best_check: BroadcastCheck | None = None
    for candidate in candidates:
        try:
            check = verify_broadcast(g, candidate)
        except PreconditionError:
            continue
        if check.dominating and (best is None or candidate.cost < best.cost):
            best, best_check = candidate, check
    if best is None or best_check is None:
        msg = "the radial broadcast failed to dominate"
        raise InvariantViolation(msg)
    if best.cost <= lower:
        logger.debug("gamma_b closed by sandwich at %d", best.cost)
        return GammaBResult(
            "exact", best.cost, best.cost, 0, best, best_check.efficient, "sandwich"
        )

    counter = _Counter(budget.node_limit)
    search = _BroadcastSearch(metric, counter)
    for target in range(lower, best.cost):
        try:
            found = search.find(target)
        except _BudgetExhausted:
            logger.warning(
                "exact_gamma_b budget of %d nodes exhausted; gamma_b in [%d, %d]",
                budget.node_limit,
                target,
                best.cost,
            )
            return GammaBResult(
                "budget_exhausted",
                target,
                best.cost,
                counter.nodes,
                best,
                best_check.efficient,
            )
        if found is not None:
            witness = Broadcast(found)
            check = verify_broadcast(g, witness)
            return GammaBResult(
                "exact",
                witness.cost,
                witness.cost,
                counter.nodes,
                witness,
                check.efficient,
            )
    return GammaBResult(
        "exact", best.cost, best.cost, counter.nodes, best, best_check.efficient
    )


def exact_domination(g: Graph, budget: OracleBudget | None = None) -> DominationResult:
    """Domination number by branch and bound.

    Branches over the closed neighbourhood of the smallest undominated vertex;
    the bound is ``ceil(undominated / (Delta + 1))`` more vertices.
    """
    budget = budget or OracleBudget()
    require_connected(g)
    n = g.n
    full = (1 << n) - 1
    closed = [(1 << v) | sum(1 << w for w in g.neighbors(v)) for v in range(n)]
    width = max(g.degree(v) for v in range(n)) + 1

    best: list[int] = []
    dominated = 0
    while dominated != full:
        v = max(range(n), key=lambda x: ((closed[x] & ~dominated).bit_count(), -x))
        best.append(v)
        dominated |= closed[v]

    counter = _Counter(budget.node_limit)
    chosen: list[int] = []

    def search(dom: int) -> None:
        nonlocal best
        counter.tick()
        if dom == full:
            if len(chosen) < len(best):
                best = list(chosen)
            return
        left = (full & ~dom).bit_count()
        if len(chosen) + -(-left // width) >= len(best):
            return
        u = _lowest_bit(full & ~dom)
        for w in _bits(closed[u]):
            chosen.append(w)
            search(dom | closed[w])
            chosen.pop()

    try:
        search(0)
    except _BudgetExhausted:
        lower = -(-n // width)
        logger.warning(
            "exact_domination budget of %d nodes exhausted; gamma in [%d, %d]",
            budget.node_limit,
            lower,
            len(best),
        )
        return DominationResult(
            "budget_exhausted", lower, len(best), counter.nodes, tuple(sorted(best))
        )
    return DominationResult(
        "exact", len(best), len(best), counter.nodes, tuple(sorted(best))
    )
