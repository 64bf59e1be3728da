"""Exact Gromov delta-hyperbolicity via the four-point condition."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

import numpy as np

from cactus_multipacking.exceptions import PreconditionError
from cactus_multipacking.graph_core import Graph, distance_matrix, require_connected
from cactus_multipacking.graph_families import gen_gk
from cactus_multipacking.rational_lp import format_rational

logger = logging.getLogger(__name__)

DEFAULT_MAX_K = 3


@dataclass(frozen=True)
class DeltaReport:
    """Hyperbolicity constant with its lexicographically smallest witness."""

    delta: Fraction
    witness: tuple[int, ...]
    quadruples_scanned: int

    def to_json(self) -> dict[str, Any]:
        """``{"delta": "p/q", "witness": [...], "quadruples_scanned": N}``."""
        return {
            "delta": format_rational(self.delta),
            "witness": list(self.witness),
            "quadruples_scanned": self.quadruples_scanned,
        }


def delta_hyperbolicity(g: Graph) -> DeltaReport:
    """Maximum over quadruples of half the gap between the two largest pair sums.

    Quadruples ``i < j < k < l`` are scanned with ``(k, l)`` vectorised; the
    first quadruple reaching the maximum is the witness.
    """
    require_connected(g)
    n = g.n
    if n < 4:
        return DeltaReport(Fraction(0), (), 0)
    d = distance_matrix(g)
    ks, ls = np.triu_indices(n, k=1)
    best = -1
    witness: tuple[int, ...] = ()
    scanned = 0
    for i in range(n - 3):
        for j in range(i + 1, n - 2):
            start = int(np.searchsorted(ks, j + 1))
            third, fourth = ks[start:], ls[start:]
            sums = np.stack(
                (
                    d[i, j] + d[third, fourth],
                    d[i, third] + d[j, fourth],
                    d[i, fourth] + d[j, third],
                )
            )
            sums.sort(axis=0)
            gaps = sums[2] - sums[1]
            idx = int(np.argmax(gaps))
            scanned += len(gaps)
            if gaps[idx] > best:
                best = int(gaps[idx])
                witness = (i, j, int(third[idx]), int(fourth[idx]))
    logger.debug("Scanned %d quadruples, max gap %d", scanned, best)
    return DeltaReport(Fraction(best, 2), witness, scanned)


def check_gk_half_hyperbolic(k: int, max_k: int = DEFAULT_MAX_K) -> bool:
    """Whether ``G_k`` has delta exactly 1/2.

    Raises:
        PreconditionError: If ``k`` is not in ``1 .. max_k``.
    """
    if not 1 <= k <= max_k:
        msg = f"k={k} is outside the checked range 1..{max_k}"
        raise PreconditionError(msg)
    return delta_hyperbolicity(gen_gk(k).graph).delta == Fraction(1, 2)
