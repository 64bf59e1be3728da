"""Tests for interrupt handling and output helpers."""

import signal
from pathlib import Path
from unittest.mock import Mock, patch

import pytest

from cactus_multipacking.utils import (
    is_shutdown_requested,
    request_shutdown,
    reset_shutdown,
    setup_signal_handler,
    write_output,
)


class TestShutdown:
    """Test the shutdown flag and SIGINT handler."""

    def test_request_and_reset(self) -> None:
        """Test toggling the flag."""
        reset_shutdown()
        assert not is_shutdown_requested()
        request_shutdown()
        assert is_shutdown_requested()
        reset_shutdown()
        assert not is_shutdown_requested()

    @patch("cactus_multipacking.utils.signal.signal")
    def test_handler(self, mock_signal: Mock) -> None:
        """Test that the first Ctrl+C sets the flag and the second aborts."""
        reset_shutdown()
        setup_signal_handler()
        sig, handler = mock_signal.call_args[0]
        assert sig == signal.SIGINT
        handler(signal.SIGINT, None)
        assert is_shutdown_requested()
        with pytest.raises(KeyboardInterrupt):
            handler(signal.SIGINT, None)
        reset_shutdown()


class TestWriteOutput:
    """Test result writing."""

    def test_stdout(self, capsys: pytest.CaptureFixture[str]) -> None:
        """Test writing to standard output."""
        write_output("hello\n", None)
        assert capsys.readouterr().out == "hello\n"

    def test_file(self, tmp_path: Path) -> None:
        """Test writing to a file."""
        target = tmp_path / "result.txt"
        write_output("42\n", target)
        assert target.read_text() == "42\n"
