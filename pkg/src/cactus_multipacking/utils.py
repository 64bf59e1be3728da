"""Utility functions for interrupt handling and output."""

from __future__ import annotations

import logging
import signal
import sys
import threading
from pathlib import Path
from types import FrameType

logger = logging.getLogger(__name__)

# Set by the SIGINT handler; long loops poll it between rows
_shutdown_requested = threading.Event()


def setup_signal_handler() -> None:
    """Configure a Ctrl+C handler that asks long runs to stop after the current row.

    A second Ctrl+C raises KeyboardInterrupt as usual.
    """

    def signal_handler(sig: int, frame: FrameType | None) -> None:
        """Handle Ctrl+C signal for graceful shutdown."""
        if _shutdown_requested.is_set():
            logger.info("Second interrupt received, aborting")
            raise KeyboardInterrupt
        logger.info("Interrupt received (Ctrl+C), finishing the current row...")
        _shutdown_requested.set()

    signal.signal(signal.SIGINT, signal_handler)


def is_shutdown_requested() -> bool:
    """Check if a graceful shutdown was requested.

    Returns:
        True if Ctrl+C was pressed since the last reset, False otherwise.
    """
    return _shutdown_requested.is_set()


def request_shutdown() -> None:
    """Ask running loops to stop, as Ctrl+C would."""
    _shutdown_requested.set()


def reset_shutdown() -> None:
    """Clear the shutdown flag."""
    _shutdown_requested.clear()


def write_output(text: str, output: Path | None) -> None:
    """Write ``text`` to ``output``, or to stdout when no path is given."""
    if output is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    output.write_text(text)
    logger.info("Wrote %s", output)
