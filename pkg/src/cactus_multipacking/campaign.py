"""Bound-checking campaigns over G_k and seeded random cacti.

Every row runs the construction, the fractional LP and (optionally) the exact
oracles, then checks the inequalities relating them. Rows whose oracles ran
out of budget are kept as partial data; only fully known values are checked.
"""

from __future__ import annotations

import csv
import io
import logging
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import partial
from typing import Any, Literal

from cactus_multipacking.config import CampaignConfig, resolve_threads
from cactus_multipacking.exact_oracles import (
    Broadcast,
    exact_domination,
    exact_gamma_b,
    exact_mp,
    lp_fractional,
)
from cactus_multipacking.graph_core import Graph, radius_center
from cactus_multipacking.graph_families import (
    RandomCactusParams,
    SplitMix64,
    gen_gk,
    gk_optimal_broadcast,
    random_cactus,
)
from cactus_multipacking.multipack_construct import Branch, approx_multipacking
from cactus_multipacking.rational_lp import format_rational
from cactus_multipacking.utils import is_shutdown_requested

logger = logging.getLogger(__name__)

InstanceKind = Literal["gk", "random"]

CSV_COLUMNS = (
    "instance",
    "kind",
    "seed",
    "n",
    "m",
    "radius",
    "mp_exact",
    "gamma_b_exact",
    "gamma_exact",
    "mp_f",
    "approx_size",
    "approx_bound",
    "branch",
    "gamma_b_over_mp",
    "mp_f_minus_mp",
    "gamma_b_minus_mp",
    "status",
    "violations",
)


@dataclass(frozen=True)
class InstanceSpec:
    """One campaign instance: ``G_k`` or a seeded random cactus."""

    instance: str
    kind: InstanceKind
    k: int = 0
    seed: int = 0
    n: int = 0

    def build(self, config: CampaignConfig) -> tuple[Graph, list[Broadcast]]:
        """The graph and any known good broadcasts for it."""
        if self.kind == "gk":
            inst = gen_gk(self.k)
            return inst.graph, [gk_optimal_broadcast(inst)]
        params = RandomCactusParams(
            n=self.n,
            cycle_prob=config.effective_cycle_prob,
            max_cycle_len=config.max_cycle_len,
            seed=self.seed,
        )
        return random_cactus(params), []


@dataclass(frozen=True)
class CampaignRow:
    """Measurements and bound checks for one instance."""

    instance: str
    kind: InstanceKind
    seed: int | None
    n: int
    m: int
    radius: int
    mp_f: Fraction | None
    approx_size: int
    approx_bound: int
    branch: str
    mp_exact: int | None = None
    gamma_b_exact: int | None = None
    gamma_exact: int | None = None
    status: Literal["complete", "partial"] = "complete"
    violations: tuple[str, ...] = ()

    @property
    def ratio(self) -> Fraction | None:
        """``gamma_b / MP`` when both are known."""
        if self.mp_exact is None or self.gamma_b_exact is None:
            return None
        return Fraction(self.gamma_b_exact, self.mp_exact)

    @property
    def mp_f_minus_mp(self) -> Fraction | None:
        """Integrality gap of the multipacking LP."""
        if self.mp_f is None or self.mp_exact is None:
            return None
        return self.mp_f - self.mp_exact

    @property
    def gamma_b_minus_mp(self) -> int | None:
        """``gamma_b - MP`` when both are known."""
        if self.mp_exact is None or self.gamma_b_exact is None:
            return None
        return self.gamma_b_exact - self.mp_exact

    def as_record(self) -> dict[str, Any]:
        """Flat record with the CSV column names."""

        def rational(q: Fraction | None) -> str | None:
            return None if q is None else format_rational(q)

        return {
            "instance": self.instance,
            "kind": self.kind,
            "seed": self.seed,
            "n": self.n,
            "m": self.m,
            "radius": self.radius,
            "mp_exact": self.mp_exact,
            "gamma_b_exact": self.gamma_b_exact,
            "gamma_exact": self.gamma_exact,
            "mp_f": rational(self.mp_f),
            "approx_size": self.approx_size,
            "approx_bound": self.approx_bound,
            "branch": self.branch,
            "gamma_b_over_mp": rational(self.ratio),
            "mp_f_minus_mp": rational(self.mp_f_minus_mp),
            "gamma_b_minus_mp": self.gamma_b_minus_mp,
            "status": self.status,
            "violations": list(self.violations),
        }


@dataclass
class CampaignReport:
    """All rows plus aggregates; ``violations`` must be empty on success."""

    rows: list[CampaignRow] = field(default_factory=list)
    skipped: list[str] = field(default_factory=list)
    interrupted: bool = False

    @property
    def violations(self) -> list[tuple[str, str]]:
        """``(instance, message)`` for every failed check."""
        return [(row.instance, v) for row in self.rows for v in row.violations]

    @property
    def max_ratio(self) -> Fraction | None:
        """Largest ``gamma_b / MP`` over complete rows."""
        ratios = [row.ratio for row in self.rows if row.ratio is not None]
        return max(ratios) if ratios else None

    @property
    def max_gap(self) -> int | None:
        """Largest ``gamma_b - MP`` over complete rows."""
        gaps = [
            row.gamma_b_minus_mp
            for row in self.rows
            if row.gamma_b_minus_mp is not None
        ]
        return max(gaps) if gaps else None

    @property
    def branch_counts(self) -> dict[str, int]:
        """How often each construction branch fired."""
        return dict(sorted(Counter(row.branch for row in self.rows).items()))

    @property
    def fallback_rate(self) -> Fraction:
        """Share of rows that needed the fallback chain."""
        if not self.rows:
            return Fraction(0)
        hits = sum(row.branch == Branch.FALLBACK_EVERY_THIRD.value for row in self.rows)
        return Fraction(hits, len(self.rows))

    def to_json(self) -> dict[str, Any]:
        """Full JSON report."""
        ratio = self.max_ratio
        return {
            "rows": [row.as_record() for row in self.rows],
            "aggregate": {
                "instances": len(self.rows),
                "partial": sum(row.status == "partial" for row in self.rows),
                "skipped": list(self.skipped),
                "interrupted": self.interrupted,
                "max_gamma_b_over_mp": (
                    None if ratio is None else format_rational(ratio)
                ),
                "max_gamma_b_minus_mp": self.max_gap,
                "branch_counts": self.branch_counts,
                "fallback_rate": format_rational(self.fallback_rate),
                "violations": [
                    {"instance": inst, "message": msg} for inst, msg in self.violations
                ],
            },
        }

    def to_csv(self) -> str:
        """One line per row in the fixed column order."""
        buffer = io.StringIO()
        writer = csv.DictWriter(buffer, fieldnames=CSV_COLUMNS, lineterminator="\n")
        writer.writeheader()
        for row in self.rows:
            record = row.as_record()
            record["violations"] = "; ".join(row.violations)
            writer.writerow({k: "" if v is None else v for k, v in record.items()})
        return buffer.getvalue()


def instance_specs(config: CampaignConfig) -> list[InstanceSpec]:
    """Instances in report order: G_k first, then random cacti by index."""
    specs = [InstanceSpec(f"gk-{k}", "gk", k=k) for k in config.gk_range]
    rng = SplitMix64(config.seed)
    span = config.random_max_n - config.random_min_n + 1
    for i in range(config.random_count):
        n = config.random_min_n + rng.below(span)
        seed = config.seed + i
        specs.append(InstanceSpec(f"random-{i:04d}", "random", seed=seed, n=n))
    return specs


def run_row(spec: InstanceSpec, config: CampaignConfig) -> CampaignRow:
    """Measure one instance and check every bound that applies."""
    g, hints = spec.build(config)
    report = radius_center(g)
    r = report.radius
    mp, trace = approx_multipacking(g)
    violations: list[str] = []
    if not mp.verified:
        violations.append(f"approx set failed verification at {mp.violation}")
    if mp.size < -(-2 * r // 3) - 4:
        violations.append(f"approx size {mp.size} below ceil(2r/3)-4 for r={r}")

    mp_f: Fraction | None = None
    mp_value: int | None = 1 if g.n == 1 else None
    gamma_b: int | None = None
    gamma: int | None = None
    partial_row = False
    if g.n > 1:
        lp = lp_fractional(g, report)
        mp_f = lp.value
        if config.run_exact:
            mp_res = exact_mp(g, config.budget, lp)
            gb_res = exact_gamma_b(g, config.budget, hints, lp)
            dom_res = exact_domination(g, config.budget)
            mp_value, gamma_b, gamma = mp_res.value, gb_res.value, dom_res.value
            partial_row = not (mp_res.exact and gb_res.exact and dom_res.exact)
            if gb_res.witness is None or gb_res.upper > r:
                violations.append(f"gamma_b upper bound {gb_res.upper} exceeds rad {r}")
    violations.extend(_check_chain(g, r, mp.size, mp_value, mp_f, gamma_b, gamma))

    row = CampaignRow(
        instance=spec.instance,
        kind=spec.kind,
        seed=spec.seed if spec.kind == "random" else None,
        n=g.n,
        m=g.m,
        radius=r,
        mp_f=mp_f,
        approx_size=mp.size,
        approx_bound=trace.guaranteed_lower_bound,
        branch=trace.branch.value,
        mp_exact=mp_value,
        gamma_b_exact=gamma_b,
        gamma_exact=gamma,
        status="partial" if partial_row else "complete",
        violations=tuple(violations),
    )
    for message in violations:
        logger.error("%s: %s", spec.instance, message)
    return row


def _check_chain(
    g: Graph,
    r: int,
    approx: int,
    mp: int | None,
    mp_f: Fraction | None,
    gamma_b: int | None,
    gamma: int | None,
) -> list[str]:
    """The inequalities between the measured quantities, on known values only."""
    out: list[str] = []
    if mp is not None:
        if approx > mp:
            out.append(f"approx size {approx} exceeds MP {mp}")
        if 3 * approx < 2 * mp - 11:
            out.append(f"approx size {approx} below 2/3 MP - 11/3 (MP={mp})")
        if mp_f is not None and mp > mp_f:
            out.append(f"MP {mp} exceeds MP_f {mp_f}")
    if gamma_b is not None:
        if mp_f is not None and mp_f > gamma_b:
            out.append(f"MP_f {mp_f} exceeds gamma_b {gamma_b}")
        if gamma_b > r:
            out.append(f"gamma_b {gamma_b} exceeds rad {r}")
        if gamma is not None and gamma_b > gamma:
            out.append(f"gamma_b {gamma_b} exceeds gamma {gamma}")
        if mp is not None:
            if 2 * gamma_b > 3 * mp + 11:
                out.append(f"gamma_b {gamma_b} exceeds 3/2 MP + 11/2 (MP={mp})")
            if g.m == g.n - 1 and gamma_b != mp:
                out.append(f"tree with gamma_b {gamma_b} != MP {mp}")
    return out


def run_campaign(
    config: CampaignConfig, deadline_seconds: float | None = None
) -> CampaignReport:
    """Run every instance of ``config`` and aggregate the rows.

    Args:
        config: Instance sources and oracle budgets.
        deadline_seconds: Stop starting new rows after this much wall time;
            the remaining instances are listed as skipped.

    Returns:
        The report; rows are ordered by instance regardless of scheduling.
    """
    specs = instance_specs(config)
    threads = resolve_threads(config.threads)
    logger.info("Campaign of %d instances on %d worker(s)", len(specs), threads)
    report = CampaignReport()
    started = time.perf_counter()

    def out_of_time() -> bool:
        if deadline_seconds is None:
            return False
        return time.perf_counter() - started > deadline_seconds

    if threads > 1:
        worker = partial(run_row, config=config)
        with ProcessPoolExecutor(max_workers=threads) as pool:
            futures = [pool.submit(worker, spec) for spec in specs]
            for spec, future in zip(specs, futures, strict=True):
                if is_shutdown_requested() or out_of_time():
                    report.interrupted = report.interrupted or is_shutdown_requested()
                    if future.cancel():
                        report.skipped.append(spec.instance)
                        continue
                report.rows.append(future.result())
    else:
        for index, spec in enumerate(specs):
            if is_shutdown_requested() or out_of_time():
                report.interrupted = is_shutdown_requested()
                report.skipped.extend(s.instance for s in specs[index:])
                break
            report.rows.append(run_row(spec, config))
            if (index + 1) % 25 == 0:
                logger.info("Campaign progress: %d/%d", index + 1, len(specs))
    if report.skipped:
        logger.warning("Skipped %d instances", len(report.skipped))
    logger.info(
        "Campaign done: %d rows, %d violations, max gamma_b/MP %s",
        len(report.rows),
        len(report.violations),
        report.max_ratio,
    )
    return report

