""".. include:: ../../README.md"""  # noqa: D415

from cactus_multipacking.exact_oracles import (
    Broadcast,
    exact_domination,
    exact_gamma_b,
    exact_mp,
    lp_fractional,
    verify_broadcast,
    verify_fractional_weights,
)
from cactus_multipacking.graph_core import (
    Graph,
    PathSeq,
    from_edge_list,
    radius_center,
    validate_cactus,
)
from cactus_multipacking.graph_families import gen_gk, random_cactus
from cactus_multipacking.graph_io import load_graph, parse_graph
from cactus_multipacking.hyperbolicity import delta_hyperbolicity
from cactus_multipacking.multipack_construct import (
    approx_broadcast,
    approx_multipacking,
    verify_multipacking,
)

__version__ = "0.1.0"

__all__ = [
    "Broadcast",
    "Graph",
    "PathSeq",
    "approx_broadcast",
    "approx_multipacking",
    "delta_hyperbolicity",
    "exact_domination",
    "exact_gamma_b",
    "exact_mp",
    "from_edge_list",
    "gen_gk",
    "load_graph",
    "lp_fractional",
    "parse_graph",
    "radius_center",
    "random_cactus",
    "validate_cactus",
    "verify_broadcast",
    "verify_fractional_weights",
    "verify_multipacking",
]
