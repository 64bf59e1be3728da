"""Wall-clock benchmark of the multipacking construction on random cacti."""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from typing import Any

from cactus_multipacking.config import BenchConfig
from cactus_multipacking.graph_families import RandomCactusParams, random_cactus
from cactus_multipacking.multipack_construct import (
    approx_multipacking,
    verify_multipacking,
)
from cactus_multipacking.utils import is_shutdown_requested

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BenchRow:
    """Timing for one size; ``seconds`` is the best of the repeats."""

    n: int
    seconds: float
    size: int
    branch: str
    verify_seconds: float | None = None

    @property
    def per_vertex_us(self) -> float:
        """Construction time per vertex in microseconds."""
        return self.seconds / self.n * 1e6


@dataclass
class BenchReport:
    """Rows in ascending size and the growth check of time per vertex."""

    max_growth: float
    rows: list[BenchRow] = field(default_factory=list)

    @property
    def growth(self) -> float | None:
        """Ratio of time per vertex at the largest size to the smallest."""
        if len(self.rows) < 2 or self.rows[0].seconds <= 0:
            return None
        return self.rows[-1].per_vertex_us / self.rows[0].per_vertex_us

    @property
    def ok(self) -> bool:
        """Whether time per vertex grew by at most ``max_growth``."""
        growth = self.growth
        return growth is None or growth <= self.max_growth

    def to_json(self) -> dict[str, Any]:
        """Rows plus the growth verdict."""
        return {
            "rows": [
                {
                    "n": row.n,
                    "seconds": round(row.seconds, 6),
                    "us_per_vertex": round(row.per_vertex_us, 4),
                    "size": row.size,
                    "branch": row.branch,
                    "verify_seconds": None
                    if row.verify_seconds is None
                    else round(row.verify_seconds, 6),
                }
                for row in self.rows
            ],
            "growth": None if self.growth is None else round(self.growth, 4),
            "max_growth": self.max_growth,
            "ok": self.ok,
        }

    def to_text(self) -> str:
        """Fixed-width table for terminals."""
        lines = [f"{'n':>10} {'seconds':>12} {'us/vertex':>10} {'|M|':>8}  branch"]
        for row in self.rows:
            lines.append(
                f"{row.n:>10} {row.seconds:>12.6f} {row.per_vertex_us:>10.4f} "
                f"{row.size:>8}  {row.branch}"
            )
        if self.growth is not None:
            verdict = "ok" if self.ok else "TOO STEEP"
            lines.append(
                f"growth {self.growth:.3f} (limit {self.max_growth}) {verdict}"
            )
        return "\n".join(lines) + "\n"


def bench_linear(config: BenchConfig) -> BenchReport:
    """Time :func:`approx_multipacking` without verification at each size.

    Graph generation is excluded from the timing. When ``config.verify`` is
    set the quadratic verification is timed separately.
    """
    report = BenchReport(config.max_growth)
    for n in config.sizes:
        if is_shutdown_requested():
            logger.warning("Benchmark interrupted before n=%d", n)
            break
        params = RandomCactusParams(
            n=n,
            cycle_prob=config.cycle_prob,
            max_cycle_len=config.max_cycle_len,
            seed=config.seed,
        )
        g = random_cactus(params)
        best = float("inf")
        for _ in range(config.repeats):
            start = time.perf_counter()
            mp, trace = approx_multipacking(g, verify=False)
            best = min(best, time.perf_counter() - start)
        verify_seconds = None
        if config.verify:
            start = time.perf_counter()
            check = verify_multipacking(g, mp.members)
            verify_seconds = time.perf_counter() - start
            if not check.ok:
                logger.error(
                    "n=%d: multipacking failed verification at %s", n, check.violation
                )
        row = BenchRow(n, best, mp.size, trace.branch.value, verify_seconds)
        report.rows.append(row)
        logger.info("n=%d: %.4fs (%.3f us/vertex)", n, row.seconds, row.per_vertex_us)
    if not report.ok:
        logger.warning("Time per vertex grew by %.2fx", report.growth)
    return report
