"""Error hierarchy shared by every module of the package."""

from __future__ import annotations

from typing import Any


class CactusMPError(Exception):
    """Base class for all errors raised by cactus_multipacking."""


class GraphInputError(CactusMPError, ValueError):
    """Malformed graph input: bad vertex ids, loops or unparsable files."""

    def __init__(self, message: str, line: int | None = None) -> None:
        """Initialize the error.

        Args:
            message: Human readable description.
            line: 1-based line number of the offending input line, if known.
        """
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class DisconnectedGraphError(GraphInputError):
    """The graph has more than one connected component."""

    def __init__(self, representatives: list[int]) -> None:
        """Initialize the error.

        Args:
            representatives: Smallest vertex id of every component.
        """
        self.representatives = representatives
        super().__init__(
            f"graph is disconnected: {len(representatives)} components "
            f"(representatives {representatives})"
        )


class NotACactusError(CactusMPError, ValueError):
    """The graph has an edge lying on two different cycles."""

    def __init__(self, message: str, certificate: Any = None) -> None:  # noqa: ANN401
        """Initialize the error.

        Args:
            message: Human readable description.
            certificate: The failing CactusCertificate.
        """
        self.certificate = certificate
        super().__init__(message)


class PreconditionError(CactusMPError, ValueError):
    """An operation was called with arguments violating its precondition."""


class InvariantViolation(CactusMPError, RuntimeError):
    """An internal structural invariant failed (a bug or a non-cactus input)."""


class DefinitionError(CactusMPError, ValueError):
    """The requested quantity is undefined for the given graph."""


class ConfigError(CactusMPError, ValueError):
    """Invalid campaign or benchmark configuration."""
