"""Configuration objects for oracles, campaigns and benchmarks."""

from __future__ import annotations

import dataclasses
import json
import logging
import os
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any

from cactus_multipacking.exceptions import ConfigError

logger = logging.getLogger(__name__)

THREADS_ENV = "CACTUS_MP_THREADS"
DEFAULT_NODE_LIMIT = 10_000_000


@dataclass(frozen=True)
class OracleBudget:
    """Search-node limit shared by the exact oracles."""

    node_limit: int = DEFAULT_NODE_LIMIT

    def __post_init__(self) -> None:
        """Reject non-positive limits."""
        if self.node_limit < 1:
            msg = f"node_limit must be positive, got {self.node_limit}"
            raise ConfigError(msg)


@dataclass(frozen=True)
class CampaignConfig:
    """Instance sources and oracle settings for a bound-checking campaign.

    Attributes:
        gk_range: Values of ``k`` for the pentagon-chain family.
        random_count: Number of seeded random cacti.
        random_min_n: Smallest random instance size.
        random_max_n: Largest random instance size.
        cycle_prob: Probability of attaching a cycle rather than an edge.
        max_cycle_len: Longest attached cycle.
        seed: Base seed; instance ``i`` uses ``seed + i``.
        trees_only: Force ``cycle_prob = 0`` for the random instances.
        budget: Node limit for every exact oracle.
        threads: Worker processes; ``None`` reads the environment.
        run_exact: Run the exact oracles (otherwise only LP and approx).
    """

    gk_range: tuple[int, ...] = (1, 2, 3)
    random_count: int = 200
    random_min_n: int = 2
    random_max_n: int = 30
    cycle_prob: Fraction = Fraction(1, 2)
    max_cycle_len: int = 7
    seed: int = 0
    trees_only: bool = False
    budget: OracleBudget = field(default_factory=OracleBudget)
    threads: int | None = None
    run_exact: bool = True

    def __post_init__(self) -> None:
        """Validate ranges."""
        if self.random_count < 0:
            msg = "random_count must be non-negative"
            raise ConfigError(msg)
        if not 1 <= self.random_min_n <= self.random_max_n:
            msg = (
                f"need 1 <= random_min_n <= random_max_n, got "
                f"{self.random_min_n}..{self.random_max_n}"
            )
            raise ConfigError(msg)
        if not 0 <= self.cycle_prob <= 1:
            msg = f"cycle_prob must lie in [0, 1], got {self.cycle_prob}"
            raise ConfigError(msg)
        if self.max_cycle_len < 3:
            msg = f"max_cycle_len must be at least 3, got {self.max_cycle_len}"
            raise ConfigError(msg)
        if any(k < 1 for k in self.gk_range):
            msg = f"gk_range entries must be positive, got {self.gk_range}"
            raise ConfigError(msg)

    @property
    def effective_cycle_prob(self) -> Fraction:
        """Cycle probability after applying ``trees_only``."""
        return Fraction(0) if self.trees_only else self.cycle_prob

    @classmethod
    def from_json(cls, path: str | Path) -> CampaignConfig:
        """Load a campaign configuration whose keys equal the field names.

        Raises:
            ConfigError: On unreadable files, unknown keys or bad values.
        """
        try:
            data = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as e:
            msg = f"cannot load campaign config {path}: {e}"
            raise ConfigError(msg) from e
        if not isinstance(data, dict):
            msg = "campaign config must be a JSON object"
            raise ConfigError(msg)
        return cls.from_mapping(data)

    @classmethod
    def from_mapping(cls, data: dict[str, Any]) -> CampaignConfig:
        """Build a configuration from a plain mapping."""
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            msg = f"unknown campaign config keys: {unknown}"
            raise ConfigError(msg)
        kwargs = dict(data)
        try:
            if "gk_range" in kwargs:
                kwargs["gk_range"] = tuple(int(k) for k in kwargs["gk_range"])
            if "cycle_prob" in kwargs:
                kwargs["cycle_prob"] = Fraction(str(kwargs["cycle_prob"]))
            if "budget" in kwargs:
                kwargs["budget"] = OracleBudget(int(kwargs["budget"]))
        except (TypeError, ValueError) as e:
            msg = f"invalid campaign config value: {e}"
            raise ConfigError(msg) from e
        return cls(**kwargs)


@dataclass(frozen=True)
class BenchConfig:
    """Sizes and generator settings for the linear-time benchmark."""

    sizes: tuple[int, ...] = (10_000, 100_000)
    seed: int = 0
    cycle_prob: Fraction = Fraction(1, 2)
    max_cycle_len: int = 7
    verify: bool = False
    repeats: int = 1
    max_growth: float = 3.0

    def __post_init__(self) -> None:
        """Validate sizes and repeats."""
        if not self.sizes or any(n < 1 for n in self.sizes):
            msg = f"sizes must be positive, got {self.sizes}"
            raise ConfigError(msg)
        if list(self.sizes) != sorted(self.sizes):
            msg = f"sizes must be ascending, got {self.sizes}"
            raise ConfigError(msg)
        if self.repeats < 1:
            msg = "repeats must be at least 1"
            raise ConfigError(msg)


def resolve_threads(requested: int | None = None) -> int:
    """Worker count from the argument or ``CACTUS_MP_THREADS``.

    Invalid environment values log a warning and fall back to 1.
    """
    if requested is not None:
        return max(1, requested)
    raw = os.environ.get(THREADS_ENV)
    if raw is None:
        return 1
    try:
        value = int(raw)
    except ValueError:
        logger.warning("Ignoring %s=%r: not an integer", THREADS_ENV, raw)
        return 1
    if value < 1:
        logger.warning("Ignoring %s=%r: must be positive", THREADS_ENV, raw)
        return 1
    return value
