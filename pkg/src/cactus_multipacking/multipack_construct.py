"""Multipacking constructions on cacti and the radius-driven case analysis.

Every construction returns a :class:`Multipacking` that has been checked by
:func:`verify_multipacking` (unless ``verify=False``). A failed check is
reported on the result instead of raised so the driver can fall back.
"""

from __future__ import annotations

import logging
from collections.abc import Callable, Iterable
from dataclasses import dataclass, field, replace
from enum import Enum
from fractions import Fraction
from functools import partial
from typing import Any, Literal

from cactus_multipacking.exact_oracles import Broadcast
from cactus_multipacking.exceptions import InvariantViolation, PreconditionError
from cactus_multipacking.graph_core import (
    Graph,
    bfs_distances,
    bfs_tree,
    is_isometric_path,
    radius_center,
    require_cactus,
)
from cactus_multipacking.radial_structure import (
    HSubgraph,
    PathSeq,
    attach_r_path,
    build_h,
    disjoint_radial_path,
    joining_path,
    mirror_h,
    radial_path,
)
from cactus_multipacking.rational_lp import format_rational

logger = logging.getLogger(__name__)

Root = Literal["C0", "Cm"]
AdmissibilityRule = Literal["half", "general"]


class Branch(str, Enum):
    """Which case of the radius argument produced a multipacking."""

    TRIVIAL_RADIUS = "TrivialRadius"
    NO_JOIN = "NoJoin"
    F1_AT_LEAST_F2 = "F1AtLeastF2"
    SR_MEETS_P = "SrMeetsP"
    SR_MEETS_Q = "SrMeetsQ"
    SR_MEETS_CYCLE = "SrMeetsCycle"
    SR_OUTSIDE_X_GE_ALPHA = "SrOutside_xGEalpha"
    SR_OUTSIDE_X_GE_BETA = "SrOutside_xGEbeta"
    # Needs r <= gamma//2 + x//2 with x < alpha and x < beta, which r = y + alpha
    # and l(Q) <= r rule out; kept so reports share one tag vocabulary.
    SR_OUTSIDE_CASE1 = "SrOutside_Case1"
    SR_OUTSIDE_CASE2_Z_GE_Y = "SrOutside_Case2_zGEy"
    SR_OUTSIDE_CASE2_Z_LT_Y = "SrOutside_Case2_zLTy"
    FALLBACK_EVERY_THIRD = "FallbackEveryThird"


@dataclass(frozen=True)
class MultipackingCheck:
    """Verifier outcome; ``violation`` is ``(v, s, |N_s[v] & M|)``."""

    ok: bool
    violation: tuple[int, int, int] | None = None


@dataclass(frozen=True)
class Multipacking:
    """A candidate multipacking with its verification status.

    Attributes:
        members: Sorted vertex ids.
        verified: True once :func:`verify_multipacking` accepted the set.
        bound: Size promised by the construction for its parameters.
        violation: First failing ``(v, s, count)`` when verification failed.
    """

    members: tuple[int, ...]
    verified: bool = False
    bound: int = 0
    violation: tuple[int, int, int] | None = None

    @property
    def size(self) -> int:
        """Number of members."""
        return len(self.members)


@dataclass(frozen=True)
class BranchTrace:
    """The case taken by :func:`approx_multipacking` and what it promises."""

    branch: Branch
    radius: int
    guaranteed_lower_bound: int
    params: dict[str, Any] = field(default_factory=dict)
    h: HSubgraph | None = None

    def to_json(self) -> dict[str, Any]:
        """Diagnostic JSON including the H-subgraph when one was built."""
        return {
            "branch": self.branch.value,
            "radius": self.radius,
            "guaranteed_lower_bound": self.guaranteed_lower_bound,
            "params": dict(self.params),
            "h": None if self.h is None else self.h.to_json(),
        }


def verify_multipacking(g: Graph, members: Iterable[int]) -> MultipackingCheck:
    """Check ``|N_s[v] & M| <= s`` for every vertex ``v`` and radius ``s >= 1``.

    One BFS per vertex with cumulative member counts per distance ring. The
    constraint at ``s = ecc(v)`` implies all larger radii. The violation
    reported is the smallest ``(v, s)`` in lexicographic order.

    Raises:
        PreconditionError: If a member is not a vertex of ``g``.
    """
    chosen = set(members)
    if any(not 0 <= v < g.n for v in chosen):
        msg = f"multipacking members out of range: {sorted(chosen)}"
        raise PreconditionError(msg)
    if len(chosen) <= 1:
        return MultipackingCheck(True)
    for v in range(g.n):
        dist = bfs_distances(g, v)
        rings = [0] * (max(dist) + 1)
        for u in chosen:
            rings[dist[u]] += 1
        count = rings[0]
        for s in range(1, len(rings)):
            count += rings[s]
            if count > s:
                return MultipackingCheck(False, (v, s, count))
    return MultipackingCheck(True)


def _certify(g: Graph, members: set[int], bound: int, verify: bool) -> Multipacking:
    ordered = tuple(sorted(members))
    if not verify:
        return Multipacking(ordered, False, bound)
    check = verify_multipacking(g, ordered)
    if not check.ok:
        logger.debug("Candidate %s fails at %s", ordered, check.violation)
    return Multipacking(ordered, check.ok, bound, check.violation)


def every_third(g: Graph, p: PathSeq, *, verify: bool = True) -> Multipacking:
    """Every third vertex of an isometric path, starting at ``p[0]``.

    Raises:
        PreconditionError: If ``p`` is not an isometric path of ``g``.
    """
    if not is_isometric_path(g, p):
        msg = f"path of length {p.length} is not isometric"
        raise PreconditionError(msg)
    members = set(p.vertices[::3])
    return _certify(g, members, len(members), verify)


def choice1_admissible(
    h: HSubgraph, a1: int, b1: int, rule: AdmissibilityRule = "half"
) -> bool:
    """Whether ``(a1, b1)`` are legal extensions along the cycle for choice 1.

    ``"half"`` requires both to be at most ``floor(gamma/2) - 1``;
    ``"general"`` uses the weaker pair of inequalities in the leftover arc
    lengths ``a2 = m - 1 - a1`` and ``b2 = gamma - 1 - m - b1``.
    """
    if not (0 <= a1 <= h.m - 1 and 0 <= b1 <= h.gamma - 1 - h.m):
        return False
    if rule == "half":
        half = h.gamma // 2 - 1
        return a1 <= half and b1 <= half
    a2 = (h.m - 1) - a1
    b2 = (h.gamma - 1) - (h.m + b1)
    return a1 <= 3 * b2 + a2 + b1 and b1 <= 3 * a2 + b2 + a1


def clamp_choice1(h: HSubgraph, a1: int, b1: int) -> tuple[int, int]:
    """Clamp choice-1 extensions into their ``"half"`` legal ranges."""
    half = h.gamma // 2 - 1
    a1 = max(0, min(a1, h.m - 1, half))
    b1 = max(0, min(b1, h.gamma - 1 - h.m, half))
    return a1, b1


def choice1(
    g: Graph,
    h: HSubgraph,
    a1: int,
    b1: int,
    rule: AdmissibilityRule = "half",
    *,
    verify: bool = True,
) -> Multipacking:
    """Every third vertex along two extended pendant paths.

    ``P'`` is extended by ``c_0..c_a1`` and ``Q'`` by ``c_m..c_{m+b1}``;
    ``c_0`` and ``c_m`` themselves are left out.

    Raises:
        PreconditionError: If ``(a1, b1)`` is not admissible under ``rule``.
    """
    if not choice1_admissible(h, a1, b1, rule):
        msg = (
            f"choice 1 parameters a1={a1}, b1={b1} not admissible "
            f"(gamma={h.gamma}, m={h.m}, rule={rule})"
        )
        raise PreconditionError(msg)
    members = set(h.p_prime.vertices[::3]) | set(h.q_prime.vertices[::3])
    members |= {h.c(i) for i in range(0, a1 + 1, 3)}
    members |= {h.c(h.m + i) for i in range(0, b1 + 1, 3)}
    members -= {h.c(0), h.c(h.m)}
    bound = (h.alpha + a1 + 1) // 3 + (h.beta + b1 + 1) // 3 - 2
    return _certify(g, members, bound, verify)


def _root_side(h: HSubgraph, root: Root) -> tuple[int, PathSeq]:
    if root == "C0":
        return 0, h.p_prime
    return h.m, h.q_prime


def _choice2_members(h: HSubgraph, root: Root) -> set[int]:
    base, pendant = _root_side(h, root)
    members = set(pendant.vertices[3::3])
    members |= {h.c(base + i) for i in range(3, h.gamma, 3)}
    return members


def choice2(
    g: Graph, h: HSubgraph, root: Root = "C0", *, verify: bool = True
) -> Multipacking:
    """Every third vertex around the cycle and down the root's pendant path.

    Cycle members sit at offsets ``3, 6, ...`` from the root (``c_0`` or
    ``c_m``); the root itself is excluded.
    """
    _, pendant = _root_side(h, root)
    bound = h.gamma // 3 + pendant.length // 3 - 1
    return _certify(g, _choice2_members(h, root), bound, verify)


def choice3(
    g: Graph, h: HSubgraph, root: Root = "C0", *, verify: bool = True
) -> Multipacking:
    """Choice 2 plus every third vertex of ``R'`` beyond its first ``d + 1``.

    Here ``d = floor(gamma/2) - d_C(root, c_t)``; members of ``R'`` are
    ``e_i`` with ``d + 2 <= i <= delta`` and ``i = d + 1 (mod 3)``.

    Raises:
        PreconditionError: Without ``R'`` or when ``delta < d``.
    """
    if h.r_prime is None or h.t is None:
        msg = "choice 3 needs the pendant path R'"
        raise PreconditionError(msg)
    base, pendant = _root_side(h, root)
    shift = h.gamma // 2 - h.cycle_distance(base, h.t)
    if h.delta < shift:
        msg = f"delta={h.delta} is below the required {shift}"
        raise PreconditionError(msg)
    members = _choice2_members(h, root)
    members |= {h.r_prime[i] for i in range(shift + 4, h.delta + 1, 3)}
    bound = h.gamma // 3 + pendant.length // 3 + (h.delta - shift - 1) // 3 - 1
    return _certify(g, members, bound, verify)


def every_third_cycle(g: Graph, h: HSubgraph, *, verify: bool = True) -> Multipacking:
    """``c_i`` with ``i = 0 (mod 3)`` and ``i <= gamma - 3``."""
    members = {h.c(i) for i in range(0, h.gamma - 2, 3)}
    return _certify(g, members, h.gamma // 3, verify)


def _ceil_two_thirds(r: int) -> int:
    return -(-2 * r // 3)


def _longest_isometric(g: Graph, paths: list[PathSeq]) -> PathSeq:
    usable = [p for p in paths if is_isometric_path(g, p)]
    return max(usable, key=lambda p: p.length)


Builder = Callable[[], Multipacking]


def approx_multipacking(
    g: Graph, *, verify: bool = True
) -> tuple[Multipacking, BranchTrace]:
    """Build a multipacking of size at least ``ceil(2 rad / 3) - 4``.

    Runs in linear time apart from verification. The case analysis follows
    the radial paths ``P`` and ``Q`` from a center, their joining cycle and
    the sphere ``S_r`` of radius ``rad`` around the midpoint of ``F_1``.

    Args:
        g: Connected cactus.
        verify: Check the result with :func:`verify_multipacking`.

    Returns:
        The multipacking and the trace of the case that produced it.

    Raises:
        NotACactusError: If ``g`` is not a cactus.
    """
    cert = require_cactus(g)
    report = radius_center(g, certificate=cert)
    r = report.radius
    c = report.centers[0]
    if r <= 1:
        mp = Multipacking((c,), verify, 1)
        return mp, BranchTrace(Branch.TRIVIAL_RADIUS, r, 1)

    target = _ceil_two_thirds(r) - 4
    p = radial_path(g, c, r)
    q = disjoint_radial_path(g, p, c, report)
    combined = PathSeq(q.reversed().vertices + p.vertices[1:])
    jp = joining_path(g, p, q, c)

    h: HSubgraph | None = None
    branch: Branch
    params: dict[str, Any] = {}
    build: Builder
    if jp is None:
        branch = Branch.NO_JOIN
        params = {"r_q": q.length}
        build = partial(every_third, g, combined, verify=verify)
    else:
        h = build_h(g, p, q, jp, c)
        params = {"x": h.x, "y": h.y, "z": h.z, "m": h.m, "gamma": h.gamma}
        if h.x >= h.m:
            branch = Branch.F1_AT_LEAST_F2
            build = partial(every_third, g, combined, verify=verify)
        else:
            branch, h, build, extra = _sphere_case(g, h, r, verify)
            params.update(extra)
    logger.debug("Radius %d at center %d: branch %s", r, c, branch.value)

    fallbacks = _fallbacks(g, h, p, combined, verify)
    mp, chosen = _select(build, fallbacks, target, verify, c)
    if chosen != "prescribed":
        logger.warning(
            "Branch %s missed its guarantee; fell back to %s", branch.value, chosen
        )
        params = {"failed_branch": branch.value, "chosen": chosen}
        branch = Branch.FALLBACK_EVERY_THIRD
    trace = BranchTrace(branch, r, max(1, mp.bound), params, h)
    return mp, trace


def _sphere_case(
    g: Graph, h: HSubgraph, r: int, verify: bool
) -> tuple[Branch, HSubgraph, Builder, dict[str, Any]]:
    """Choose the construction from where ``S_r`` meets ``H``."""
    dist, parent = bfs_tree(g, h.c(h.g))
    sphere = [u for u, d in enumerate(dist) if d == r]
    on_sphere = set(sphere)
    if on_sphere & set(h.p_prime.vertices):
        mirrored = mirror_h(h)
        a1, b1 = clamp_choice1(mirrored, h.x - 1, h.z - 1)
        return (
            Branch.SR_MEETS_P,
            h,
            partial(choice1, g, mirrored, a1, b1, verify=verify),
            {"alpha1": a1, "beta1": b1, "mirrored": True},
        )
    if on_sphere & set(h.q_prime.vertices):
        a1, b1 = clamp_choice1(h, h.y - 1, h.x - 1)
        return (
            Branch.SR_MEETS_Q,
            h,
            partial(choice1, g, h, a1, b1, verify=verify),
            {"alpha1": a1, "beta1": b1},
        )
    if on_sphere & set(h.cycle):
        return (
            Branch.SR_MEETS_CYCLE,
            h,
            partial(every_third_cycle, g, h, verify=verify),
            {},
        )

    u = sphere[0]
    attach_error: InvariantViolation | None = None
    try:
        h = attach_r_path(g, h, u, (dist, parent))
    except InvariantViolation as e:
        attach_error = e
        logger.warning("Could not attach R' towards %d: %s", u, e)
    final = h
    extra: dict[str, Any] = {"u": u, "t": final.t, "delta": final.delta}

    def choice3_or_raise(root: Root) -> Builder:
        def build() -> Multipacking:
            if attach_error is not None:
                raise attach_error
            return choice3(g, final, root, verify=verify)

        return build

    if h.x >= h.alpha:
        return (
            Branch.SR_OUTSIDE_X_GE_ALPHA,
            h,
            partial(choice2, g, final, "Cm", verify=verify),
            extra,
        )
    if h.x >= h.beta:
        return (
            Branch.SR_OUTSIDE_X_GE_BETA,
            h,
            partial(choice2, g, final, "C0", verify=verify),
            extra,
        )
    if h.t is not None:
        extra["delta1"] = h.gamma // 2 - h.cycle_distance(0, h.t)
        extra["delta2"] = h.gamma // 2 - h.cycle_distance(h.m, h.t)
    if h.z >= h.y:
        return Branch.SR_OUTSIDE_CASE2_Z_GE_Y, h, choice3_or_raise("C0"), extra
    return Branch.SR_OUTSIDE_CASE2_Z_LT_Y, h, choice3_or_raise("Cm"), extra


def _fallbacks(
    g: Graph,
    h: HSubgraph | None,
    p: PathSeq,
    combined: PathSeq,
    verify: bool,
) -> list[tuple[str, Builder]]:
    """Safer constructions tried in order when the prescribed one fails."""
    chain: list[tuple[str, Builder]] = []
    paths = [combined, p]
    if h is not None:
        hh = h
        a1, b1 = clamp_choice1(hh, hh.m - 1, hh.gamma - 1 - hh.m)
        chain.append(("choice1", partial(choice1, g, hh, a1, b1, verify=verify)))
        root: Root = "C0" if hh.alpha >= hh.beta else "Cm"
        chain.append(("choice2", partial(choice2, g, hh, root, verify=verify)))
        arc = tuple(hh.c(-i) for i in range(1, hh.x + 1))
        paths.insert(
            1,
            PathSeq(hh.p_prime.reversed().vertices + arc + hh.q_prime.vertices[1:]),
        )

    def longest_path_every_third() -> Multipacking:
        return every_third(g, _longest_isometric(g, paths), verify=verify)

    chain.append(("every_third", longest_path_every_third))
    return chain


def _select(
    build: Builder,
    fallbacks: list[tuple[str, Builder]],
    target: int,
    verify: bool,
    center: int,
) -> tuple[Multipacking, str]:
    """First candidate that is sound and meets ``target``, else the largest.

    An empty candidate stands for ``{center}``, which is always a multipacking.
    """
    built: list[tuple[Multipacking, str]] = []
    for name, candidate in [("prescribed", build), *fallbacks]:
        try:
            mp = candidate()
        except (PreconditionError, InvariantViolation) as e:
            logger.debug("Construction %s unavailable: %s", name, e)
            continue
        if verify and not mp.verified:
            continue
        if not mp.members:
            mp = replace(mp, members=(center,))
        if mp.size >= target:
            return mp, name
        built.append((mp, name))
    if not built:
        msg = "no construction produced a multipacking"
        raise InvariantViolation(msg)
    return max(built, key=lambda item: item[0].size)


@dataclass(frozen=True)
class BroadcastCertificate:
    """A dominating broadcast bracketed by a certified multipacking.

    ``lower <= gamma_b <= upper`` with ``lower = |M|`` and ``upper`` the cost
    of ``broadcast``.
    """

    broadcast: Broadcast
    multipacking: Multipacking
    trace: BranchTrace

    @property
    def lower(self) -> int:
        """Certified lower bound on ``gamma_b``."""
        return self.multipacking.size

    @property
    def upper(self) -> int:
        """Cost of the broadcast."""
        return self.broadcast.cost

    @property
    def ratio(self) -> Fraction:
        """``upper / lower``."""
        return Fraction(self.upper, max(1, self.lower))

    def to_json(self) -> dict[str, Any]:
        """JSON object for reports."""
        return {
            "broadcast": self.broadcast.to_json(),
            "cost": self.upper,
            "multipacking": list(self.multipacking.members),
            "lower": self.lower,
            "upper": self.upper,
            "ratio": format_rational(self.ratio),
            "verified": self.multipacking.verified,
            "branch": self.trace.branch.value,
        }


def approx_broadcast(g: Graph, *, verify: bool = True) -> BroadcastCertificate:
    """The radial broadcast ``f(c) = rad`` certified against a multipacking.

    A single vertex gets the empty broadcast.
    """
    mp, trace = approx_multipacking(g, verify=verify)
    report = radius_center(g)
    if report.radius == 0:
        return BroadcastCertificate(Broadcast(), mp, trace)
    return BroadcastCertificate(
        Broadcast({report.centers[0]: report.radius}), mp, trace
    )


def approx_to_json(mp: Multipacking, trace: BranchTrace) -> dict[str, Any]:
    """Result object for the ``approx`` command."""
    return {
        "radius": trace.radius,
        "branch": trace.branch.value,
        "params": dict(trace.params),
        "set": list(mp.members),
        "size": mp.size,
        "guaranteed_lower_bound": trace.guaranteed_lower_bound,
        "verified": mp.verified,
        "h": None if trace.h is None else trace.h.to_json(),
    }
