"""Tests for the multipacking constructions and the case-analysis driver."""

from unittest.mock import patch

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cactus_multipacking.exact_oracles import exact_mp
from cactus_multipacking.exceptions import NotACactusError, PreconditionError
from cactus_multipacking.graph_core import Graph, PathSeq, from_edge_list, radius_center
from cactus_multipacking.graph_families import (
    GkInstance,
    RandomCactusParams,
    cactus_catalog,
    gen_gk,
    gk_canonical_multipacking,
    path,
    random_cactus,
)
from cactus_multipacking.multipack_construct import (
    Branch,
    Multipacking,
    Root,
    approx_broadcast,
    approx_multipacking,
    approx_to_json,
    choice1,
    choice1_admissible,
    choice2,
    choice3,
    clamp_choice1,
    every_third,
    every_third_cycle,
    verify_multipacking,
)
from cactus_multipacking.radial_structure import (
    HSubgraph,
    build_h,
    disjoint_radial_path,
    joining_path,
    radial_path,
)


def _target(g: Graph) -> int:
    r = radius_center(g).radius
    return -(-2 * r // 3) - 4


def _chain(*vertices: int) -> list[tuple[int, int]]:
    return list(zip(vertices, vertices[1:], strict=False))


# Each cactus is a cycle c_0 .. c_{gamma-1} with pendant paths P' at c_0, Q' at
# c_m and optionally R' at c_t. Vertex 0 is the smallest-id center.
BRANCH_CASES = {
    "sphere_meets_p": (
        14,
        _chain(1, 0, 2, 3, 4, 1) + _chain(1, 5, 6, 7, 8, 9) + _chain(3, 10, 11, 12, 13),
        Branch.SR_MEETS_P,
        (7, 12),
        {"x": 2, "y": 1, "z": 2, "alpha1": 1, "beta1": 1, "mirrored": True},
    ),
    "sphere_meets_q": (
        14,
        _chain(2, 1, 0, 3, 4, 2) + _chain(2, 5, 6, 7, 8) + _chain(3, 9, 10, 11, 12, 13),
        Branch.SR_MEETS_Q,
        (7, 11),
        {"x": 2, "y": 2, "z": 1, "alpha1": 1, "beta1": 1},
    ),
    "x_at_least_alpha": (
        17,
        _chain(3, 2, 1, 0, 4, 5, 6, 7, 8, 9, 3)
        + _chain(3, 10, 11, 12)
        + _chain(6, 13, 14, 15)
        + [(0, 16)],
        Branch.SR_OUTSIDE_X_GE_ALPHA,
        (1, 5, 9, 15),
        {"x": 4, "y": 3, "z": 3, "gamma": 10, "u": 16, "t": 3, "delta": 1},
    ),
    "x_at_least_beta": (
        24,
        _chain(3, 2, 1, 0, 4, 5, 6, 7, 8, 9, 10, 3)
        + _chain(3, 11, 12, 13, 14, 15)
        + _chain(7, 16, 17, 18, 19)
        + _chain(5, 20, 21, 22, 23),
        Branch.SR_OUTSIDE_X_GE_BETA,
        (0, 6, 9, 13),
        {"x": 4, "y": 3, "z": 4, "gamma": 11, "u": 23, "t": 5, "delta": 4},
    ),
    "z_at_least_y": (
        23,
        _chain(2, 1, 0, 3, 4, 5, 2)
        + _chain(2, 6, 7, 8, 9, 10, 11)
        + _chain(4, 12, 13, 14, 15, 16, 17)
        + _chain(0, 18, 19, 20, 21, 22),
        Branch.SR_OUTSIDE_CASE2_Z_GE_Y,
        (3, 8, 11, 22),
        {"x": 2, "y": 2, "z": 2, "t": 2, "delta": 5, "delta1": 1, "delta2": 1},
    ),
    "z_below_y": (
        17,
        _chain(3, 2, 1, 0, 4, 5, 3)
        + _chain(3, 6, 7, 8)
        + _chain(4, 9, 10, 11, 12)
        + _chain(2, 13, 14, 15, 16),
        Branch.SR_OUTSIDE_CASE2_Z_LT_Y,
        (2, 11, 16),
        {"x": 2, "y": 3, "z": 1, "t": 1, "delta": 4, "delta1": 2, "delta2": 0},
    ),
}


def _branch_case(name: str) -> Graph:
    n, edges, *_ = BRANCH_CASES[name]
    return from_edge_list(edges, n)


@pytest.fixture
def g1_h(g1: GkInstance) -> HSubgraph:
    """The H-subgraph of G_1 at its center a_2."""
    g = g1.graph
    p = radial_path(g, 5, 4)
    q = disjoint_radial_path(g, p, 5)
    jp = joining_path(g, p, q, 5)
    assert jp is not None
    return build_h(g, p, q, jp, 5)


class TestVerifyMultipacking:
    """Test the multipacking verifier."""

    def test_canonical_gk(self, g2: GkInstance) -> None:
        """Test {a_1, ..., a_3k} is a multipacking."""
        assert verify_multipacking(g2.graph, gk_canonical_multipacking(g2)).ok

    def test_adjacent_pair_fails(self, path7: Graph) -> None:
        """Test two vertices at distance 2 share a ball of radius 1."""
        check = verify_multipacking(path7, [0, 2])
        assert not check.ok
        assert check.violation == (1, 1, 2)

    def test_small_sets_trivially_ok(self, path7: Graph) -> None:
        """Test the empty set and singletons."""
        assert verify_multipacking(path7, []).ok
        assert verify_multipacking(path7, [4]).ok

    def test_unknown_vertex(self, path7: Graph) -> None:
        """Test ids outside the graph."""
        with pytest.raises(PreconditionError):
            verify_multipacking(path7, [0, 9])

    def test_three_on_short_path_fails(self) -> None:
        """Test three vertices in a ball of radius 2."""
        check = verify_multipacking(path(5), [0, 2, 4])
        assert not check.ok


class TestEveryThird:
    """Test every third vertex of an isometric path."""

    def test_path(self, path7: Graph) -> None:
        """Test positions 0, 3, 6."""
        mp = every_third(path7, PathSeq(tuple(range(7))))
        assert mp.members == (0, 3, 6)
        assert mp.verified

    def test_non_isometric_rejected(self, c6: Graph) -> None:
        """Test a path longer than half the cycle."""
        with pytest.raises(PreconditionError):
            every_third(c6, PathSeq((0, 1, 2, 3, 4)))

    def test_no_verify(self, path7: Graph) -> None:
        """Test verification can be skipped."""
        mp = every_third(path7, PathSeq(tuple(range(7))), verify=False)
        assert not mp.verified
        assert mp.size == 3


class TestChoices:
    """Test the three H-subgraph constructions on G_1."""

    def test_choice1(self, g1: GkInstance, g1_h: HSubgraph) -> None:
        """Test the pendant-path tails without cycle extension."""
        mp = choice1(g1.graph, g1_h, 0, 0)
        assert mp.members == (3, 11)
        assert mp.verified

    def test_choice1_admissibility(self, g1_h: HSubgraph) -> None:
        """Test the half and general rules."""
        assert choice1_admissible(g1_h, 1, 1)
        assert not choice1_admissible(g1_h, 2, 0)
        assert not choice1_admissible(g1_h, 1, 2)
        assert not choice1_admissible(g1_h, 1, 2, "general")
        assert choice1_admissible(g1_h, 1, 1, "general")

    def test_choice1_rejects_illegal(self, g1: GkInstance, g1_h: HSubgraph) -> None:
        """Test an extension longer than F_2."""
        with pytest.raises(PreconditionError):
            choice1(g1.graph, g1_h, 2, 0)

    def test_clamp(self, g1_h: HSubgraph) -> None:
        """Test clamping into the legal ranges."""
        assert clamp_choice1(g1_h, 5, 5) == (1, 1)
        assert clamp_choice1(g1_h, -3, 0) == (0, 0)

    def test_choice2(self, g1: GkInstance, g1_h: HSubgraph) -> None:
        """Test the cycle and the tail of P'."""
        mp = choice2(g1.graph, g1_h, "C0")
        assert mp.members == (3, 7)
        assert mp.verified
        assert mp.bound == 1

    def test_choice2_cm(self, g1: GkInstance, g1_h: HSubgraph) -> None:
        """Test rooting at c_m uses Q' and offsets from m."""
        mp = choice2(g1.graph, g1_h, "Cm")
        assert mp.members == (9, 11)
        assert mp.verified

    def test_choice3_needs_r(self, g1: GkInstance, g1_h: HSubgraph) -> None:
        """Test choice 3 without R'."""
        with pytest.raises(PreconditionError):
            choice3(g1.graph, g1_h)

    @pytest.mark.parametrize(
        ("name", "root", "members"),
        [("z_at_least_y", "C0", (3, 8, 11, 22)), ("z_below_y", "Cm", (2, 11, 16))],
    )
    def test_choice3(self, name: str, root: Root, members: tuple[int, ...]) -> None:
        """Test choice 3 takes every third vertex at the far end of R'."""
        g = _branch_case(name)
        h = approx_multipacking(g)[1].h
        assert h is not None and h.r_prime is not None
        mp = choice3(g, h, root)
        assert mp.members == members
        assert mp.verified
        pendant = enumerate(h.r_prime.vertices)
        on_r = [i for i, v in pendant if i > 0 and v in members]
        assert on_r == [h.delta]

    def test_every_third_cycle(self, g1: GkInstance, g1_h: HSubgraph) -> None:
        """Test a pentagon holds a single cycle member."""
        mp = every_third_cycle(g1.graph, g1_h)
        assert mp.members == (9,)
        assert mp.bound == 1


class TestApproxMultipacking:
    """Test the driver."""

    def test_g1(self, g1: GkInstance) -> None:
        """Test G_1 takes the long-F_1 case and finds an optimal set."""
        mp, trace = approx_multipacking(g1.graph)
        assert trace.branch is Branch.F1_AT_LEAST_F2
        assert trace.radius == 4
        assert mp.members == (1, 6, 11)
        assert mp.verified
        assert trace.params == {"x": 3, "y": 1, "z": 1, "m": 2, "gamma": 5}

    def test_path(self, path7: Graph) -> None:
        """Test a path has no joining cycle."""
        mp, trace = approx_multipacking(path7)
        assert trace.branch is Branch.NO_JOIN
        assert mp.members == (0, 3, 6)

    def test_even_cycle(self, c6: Graph) -> None:
        """Test the sphere meets the cycle itself."""
        mp, trace = approx_multipacking(c6)
        assert trace.branch is Branch.SR_MEETS_CYCLE
        assert mp.members == (0, 3)
        assert mp.verified

    def test_star(self, star4: Graph) -> None:
        """Test radius one returns the center."""
        mp, trace = approx_multipacking(star4)
        assert trace.branch is Branch.TRIVIAL_RADIUS
        assert mp.members == (0,)

    def test_single_vertex(self) -> None:
        """Test the trivial graph."""
        mp, trace = approx_multipacking(from_edge_list([], 1))
        assert mp.members == (0,)
        assert trace.radius == 0

    def test_non_cactus(self, theta: Graph) -> None:
        """Test non-cacti are refused."""
        with pytest.raises(NotACactusError):
            approx_multipacking(theta)

    def test_fallback_when_branch_fails(self, c6: Graph) -> None:
        """Test an unsound prescribed set triggers the fallback chain."""
        bogus = Multipacking((0, 1, 2), False, 2)
        with patch(
            "cactus_multipacking.multipack_construct.every_third_cycle",
            return_value=bogus,
        ):
            mp, trace = approx_multipacking(c6)
        assert trace.branch is Branch.FALLBACK_EVERY_THIRD
        assert trace.params["failed_branch"] == Branch.SR_MEETS_CYCLE.value
        assert verify_multipacking(c6, mp.members).ok

    def test_to_json(self, g1: GkInstance) -> None:
        """Test the approx result object."""
        mp, trace = approx_multipacking(g1.graph)
        obj = approx_to_json(mp, trace)
        assert obj["branch"] == "F1AtLeastF2"
        assert obj["set"] == [1, 6, 11]
        assert obj["size"] == 3
        assert obj["verified"] is True
        assert obj["h"]["gamma"] == 5

    def test_catalog(self) -> None:
        """Test every cactus on up to 8 vertices."""
        for g in cactus_catalog(8):
            mp, _ = approx_multipacking(g)
            assert mp.verified
            assert mp.size >= max(1, _target(g))

    def test_ratio_against_exact_mp(self) -> None:
        """Test 3 |M| >= 2 MP - 11 on every cactus with up to 8 vertices."""
        for g in cactus_catalog(8):
            mp, _ = approx_multipacking(g)
            best = exact_mp(g).value
            assert best is not None
            assert 3 * mp.size >= 2 * best - 11

    @pytest.mark.slow
    def test_ratio_on_random_cacti(self) -> None:
        """Test 3 |M| >= 2 MP - 11 on 200 random cacti with up to 30 vertices."""
        for seed in range(200):
            params = RandomCactusParams(n=10 + seed % 21, seed=seed)
            g = random_cactus(params)
            mp, _ = approx_multipacking(g)
            best = exact_mp(g).value
            if best is not None:
                assert 3 * mp.size >= 2 * best - 11, seed

    @pytest.mark.slow
    def test_fallback_rate(self) -> None:
        """Test fewer than 5% fallbacks on the catalog, G_1..G_3 and random cacti."""
        graphs = cactus_catalog(9) + [gen_gk(k).graph for k in (1, 2, 3)]
        for seed in range(1000):
            n = 20 + seed % 80
            params = RandomCactusParams(n=n, max_cycle_len=3 + seed % 10, seed=seed)
            graphs.append(random_cactus(params))
        traces = [approx_multipacking(g)[1] for g in graphs]
        fallbacks = [t for t in traces if t.branch is Branch.FALLBACK_EVERY_THIRD]
        assert len(fallbacks) * 20 < len(graphs)

    @given(
        n=st.integers(min_value=2, max_value=60),
        seed=st.integers(min_value=0, max_value=2**32),
        max_cycle_len=st.integers(min_value=3, max_value=12),
    )
    @settings(max_examples=80, deadline=None)
    def test_random_cacti(self, n: int, seed: int, max_cycle_len: int) -> None:
        """Test soundness and the size guarantee on random cacti."""
        params = RandomCactusParams(n=n, max_cycle_len=max_cycle_len, seed=seed)
        g = random_cactus(params)
        mp, trace = approx_multipacking(g)
        assert mp.verified
        assert mp.size >= _target(g)
        assert isinstance(trace.branch, Branch)

    @pytest.mark.slow
    def test_fuzz_large(self) -> None:
        """Test a thousand seeded cacti of moderate size."""
        for seed in range(1000):
            n = 20 + seed % 80
            params = RandomCactusParams(n=n, max_cycle_len=3 + seed % 10, seed=seed)
            g = random_cactus(params)
            mp, _ = approx_multipacking(g)
            assert mp.verified, seed
            assert mp.size >= _target(g), seed


class TestBranches:
    """Test each case of the driver on a hand-built cactus."""

    @pytest.mark.parametrize("name", sorted(BRANCH_CASES))
    def test_branch(self, name: str) -> None:
        """Test the branch taken, its parameters and the exact members."""
        _, _, branch, members, params = BRANCH_CASES[name]
        g = _branch_case(name)
        assert radius_center(g).centers[0] == 0
        mp, trace = approx_multipacking(g)
        assert trace.branch is branch
        assert mp.members == members
        assert mp.verified
        assert params.items() <= trace.params.items()
        assert mp.size >= trace.guaranteed_lower_bound
        assert mp.size >= _target(g)

    def test_every_tag_reachable(
        self, star4: Graph, path7: Graph, c6: Graph, g1: GkInstance
    ) -> None:
        """Test that the named cacti cover every tag the driver can produce."""
        graphs = [star4, path7, c6, g1.graph]
        graphs += [_branch_case(name) for name in BRANCH_CASES]
        seen = {approx_multipacking(g)[1].branch for g in graphs}
        unreachable = {Branch.SR_OUTSIDE_CASE1, Branch.FALLBACK_EVERY_THIRD}
        assert seen == set(Branch) - unreachable

    def test_empty_candidate_keeps_branch(self) -> None:
        """Test that an empty prescribed set becomes the center, not a fallback."""
        g = from_edge_list([(0, 1), (0, 2), (0, 3), (1, 2), (1, 4)], 5)
        mp, trace = approx_multipacking(g)
        assert trace.branch is Branch.SR_MEETS_P
        assert "failed_branch" not in trace.params
        assert mp.members == (0,)
        assert mp.verified

    @given(
        n=st.integers(min_value=4, max_value=60),
        seed=st.integers(min_value=0, max_value=2**32),
        max_cycle_len=st.integers(min_value=3, max_value=15),
    )
    @settings(max_examples=200, deadline=None)
    def test_outside_sphere_radius(self, n: int, seed: int, max_cycle_len: int) -> None:
        """Test r > gamma//2 + x//2 whenever both pendant paths beat F_1."""
        params = RandomCactusParams(n=n, max_cycle_len=max_cycle_len, seed=seed)
        _, trace = approx_multipacking(random_cactus(params))
        assert trace.branch is not Branch.SR_OUTSIDE_CASE1
        h = trace.h
        if h is not None and h.x < min(h.alpha, h.beta, h.m):
            assert trace.radius > h.gamma // 2 + h.x // 2


class TestApproxBroadcast:
    """Test the certified broadcast interval."""

    def test_g1(self, g1: GkInstance) -> None:
        """Test the radial broadcast on G_1."""
        cert = approx_broadcast(g1.graph)
        assert cert.broadcast.powers == {5: 4}
        assert (cert.lower, cert.upper) == (3, 4)
        assert cert.to_json()["ratio"] == "4/3"

    def test_single_vertex(self) -> None:
        """Test the empty broadcast."""
        cert = approx_broadcast(from_edge_list([], 1))
        assert cert.upper == 0
