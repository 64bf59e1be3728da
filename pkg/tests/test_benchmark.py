"""Tests for the construction benchmark."""

from unittest.mock import patch

import pytest

from cactus_multipacking.benchmark import BenchReport, BenchRow, bench_linear
from cactus_multipacking.config import BenchConfig
from cactus_multipacking.utils import request_shutdown, reset_shutdown


class TestBenchReport:
    """Test growth arithmetic on hand-made rows."""

    def test_flat_growth(self) -> None:
        """Test that proportional timings pass."""
        report = BenchReport(
            3.0, [BenchRow(100, 0.01, 10, "NoJoin"), BenchRow(1000, 0.1, 90, "NoJoin")]
        )
        assert report.growth == pytest.approx(1.0)
        assert report.ok

    def test_steep_growth(self) -> None:
        """Test that quadratic timings fail."""
        report = BenchReport(
            3.0, [BenchRow(100, 0.01, 10, "NoJoin"), BenchRow(1000, 1.0, 90, "NoJoin")]
        )
        assert report.growth == pytest.approx(10.0)
        assert not report.ok
        assert "TOO STEEP" in report.to_text()

    def test_single_row(self) -> None:
        """Test that one size has no growth and passes."""
        report = BenchReport(3.0, [BenchRow(100, 0.01, 10, "NoJoin")])
        assert report.growth is None
        assert report.ok
        assert report.to_json()["growth"] is None

    def test_per_vertex(self) -> None:
        """Test microseconds per vertex."""
        assert BenchRow(1000, 0.002, 1, "NoJoin").per_vertex_us == pytest.approx(2.0)


class TestBenchLinear:
    """Test the benchmark driver on small sizes."""

    def test_small_sizes(self) -> None:
        """Test rows, verification timing and JSON keys."""
        reset_shutdown()
        report = bench_linear(BenchConfig(sizes=(50, 200), verify=True, seed=3))
        assert [row.n for row in report.rows] == [50, 200]
        assert all(row.size >= 1 for row in report.rows)
        assert all(row.verify_seconds is not None for row in report.rows)
        data = report.to_json()
        assert set(data) == {"rows", "growth", "max_growth", "ok"}
        assert set(data["rows"][0]) == {
            "n",
            "seconds",
            "us_per_vertex",
            "size",
            "branch",
            "verify_seconds",
        }

    def test_mocked_clock(self) -> None:
        """Test the growth verdict with a fake clock."""
        reset_shutdown()
        ticks = [0.0, 1.0, 0.0, 100.0]
        with patch(
            "cactus_multipacking.benchmark.time.perf_counter", side_effect=ticks
        ):
            report = bench_linear(BenchConfig(sizes=(100, 1000)))
        assert [row.seconds for row in report.rows] == [1.0, 100.0]
        assert report.growth == pytest.approx(10.0)
        assert not report.ok

    def test_interrupt(self) -> None:
        """Test that a shutdown request stops before the first size."""
        request_shutdown()
        try:
            report = bench_linear(BenchConfig(sizes=(50,)))
        finally:
            reset_shutdown()
        assert report.rows == []

    @pytest.mark.slow
    def test_linear_at_scale(self) -> None:
        """Test time per vertex from 10^4 to 10^5 vertices grows at most 3x."""
        reset_shutdown()
        report = bench_linear(BenchConfig(sizes=(10_000, 100_000), seed=1, repeats=3))
        assert [row.n for row in report.rows] == [10_000, 100_000]
        assert report.ok, report.to_text()
        assert report.rows[-1].seconds < 5.0
