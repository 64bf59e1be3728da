"""Tests for the command-line interface."""

import json
from collections.abc import Iterator
from pathlib import Path
from unittest.mock import patch

import pytest

from cactus_multipacking.cli import EXIT_INPUT, EXIT_OK, main
from cactus_multipacking.graph_families import GkInstance
from cactus_multipacking.graph_io import format_graph


@pytest.fixture
def g1_file(tmp_path: Path, g1: GkInstance) -> Path:
    """G_1 written as JSON."""
    path = tmp_path / "g1.json"
    path.write_text(format_graph(g1.graph))
    return path


@pytest.fixture
def no_signal_handler() -> Iterator[None]:
    """Keep long-running commands from installing a SIGINT handler."""
    with patch("cactus_multipacking.cli.setup_signal_handler"):
        yield


def _run(capsys: pytest.CaptureFixture[str], *argv: str) -> tuple[int, str]:
    code = main(list(argv))
    return code, capsys.readouterr().out


class TestGen:
    """Test graph generation."""

    def test_gk(self, capsys: pytest.CaptureFixture[str]) -> None:
        """Test that G_1 is printed as JSON."""
        code, out = _run(capsys, "gen", "gk", "--k", "1")
        assert code == EXIT_OK
        data = json.loads(out)
        assert data["n"] == 15
        assert len(data["edges"]) == 17

    def test_random_edge_list(self, capsys: pytest.CaptureFixture[str]) -> None:
        """Test the edge-list rendering of a random cactus."""
        code, out = _run(
            capsys, "gen", "random", "--n", "12", "--seed", "3", "--format", "edgelist"
        )
        assert code == EXIT_OK
        assert out.splitlines()[0].split()[0] == "12"

    def test_output_file(self, tmp_path: Path) -> None:
        """Test that -o writes to a file."""
        target = tmp_path / "out.json"
        assert main(["-o", str(target), "gen", "gk", "--k", "2"]) == EXIT_OK
        assert json.loads(target.read_text())["n"] == 30


class TestAnalysis:
    """Test the analysis subcommands on G_1."""

    def test_stats(self, capsys: pytest.CaptureFixture[str], g1_file: Path) -> None:
        """Test radius and centers."""
        code, out = _run(capsys, "stats", str(g1_file))
        data = json.loads(out)
        assert code == EXIT_OK
        assert data["radius"] == 4
        assert 5 in data["centers"]
        assert data["is_cactus"]

    def test_approx(self, capsys: pytest.CaptureFixture[str], g1_file: Path) -> None:
        """Test the construction result."""
        code, out = _run(capsys, "approx", str(g1_file))
        data = json.loads(out)
        assert code == EXIT_OK
        assert data["size"] == 3
        assert data["branch"] == "F1AtLeastF2"
        assert data["verified"]

    def test_approx_broadcast(
        self, capsys: pytest.CaptureFixture[str], g1_file: Path
    ) -> None:
        """Test the radial broadcast certificate."""
        code, out = _run(capsys, "approx", str(g1_file), "--broadcast")
        assert code == EXIT_OK
        assert '"4/3"' in out

    @pytest.mark.parametrize(("quantity", "value"), [("mp", 3), ("gb", 4)])
    def test_exact(
        self,
        capsys: pytest.CaptureFixture[str],
        g1_file: Path,
        quantity: str,
        value: int,
    ) -> None:
        """Test exact MP and gamma_b."""
        code, out = _run(capsys, "exact", quantity, str(g1_file))
        data = json.loads(out)
        assert code == EXIT_OK
        assert data["status"] == "exact"
        assert data["value"] == value

    def test_lp(self, capsys: pytest.CaptureFixture[str], g1_file: Path) -> None:
        """Test the LP value."""
        code, out = _run(capsys, "lp", str(g1_file))
        assert code == EXIT_OK
        assert json.loads(out)["value"] == "4/1"

    def test_hyperbolicity(
        self, capsys: pytest.CaptureFixture[str], g1_file: Path
    ) -> None:
        """Test delta of G_1."""
        code, out = _run(capsys, "hyperbolicity", str(g1_file))
        assert code == EXIT_OK
        assert json.loads(out)["delta"] == "1/2"

    def test_text_format(
        self, capsys: pytest.CaptureFixture[str], g1_file: Path
    ) -> None:
        """Test key: value output."""
        code, out = _run(capsys, "hyperbolicity", str(g1_file), "--format", "text")
        assert code == EXIT_OK
        assert 'delta: "1/2"' in out.splitlines()

    def test_weights_check(
        self, capsys: pytest.CaptureFixture[str], g1_file: Path, tmp_path: Path
    ) -> None:
        """Test a feasible fractional multipacking."""
        weights = tmp_path / "w.json"
        weights.write_text(json.dumps({"0": "1", "5": "1", "10": "1"}))
        code, out = _run(capsys, "weights-check", str(weights), str(g1_file))
        data = json.loads(out)
        assert code == EXIT_OK
        assert data["feasible"]
        assert data["value"] == "3/1"


class TestVerify:
    """Test the verify subcommand."""

    def test_multipacking(
        self, capsys: pytest.CaptureFixture[str], g1_file: Path
    ) -> None:
        """Test that {a_1, a_2, a_3} is accepted."""
        code, out = _run(capsys, "verify", "mp", str(g1_file), "--set", "0,5,10")
        assert code == EXIT_OK
        assert json.loads(out)["ok"]

    def test_broadcast(self, capsys: pytest.CaptureFixture[str], g1_file: Path) -> None:
        """Test the power-4 broadcast on a_2."""
        code, out = _run(
            capsys, "verify", "broadcast", str(g1_file), "--powers", "5:4"
        )
        data = json.loads(out)
        assert code == EXIT_OK
        assert data["dominating"]
        assert data["cost"] == 4

    def test_missing_set(self, g1_file: Path) -> None:
        """Test that verify mp without --set is a usage error."""
        assert main(["verify", "mp", str(g1_file)]) == EXIT_INPUT

    def test_unknown_vertex(self, g1_file: Path) -> None:
        """Test that ids outside the graph are rejected."""
        assert main(["verify", "mp", str(g1_file), "--set", "99"]) == EXIT_INPUT


class TestErrors:
    """Test exit codes for bad input."""

    def test_bad_flag(self) -> None:
        """Test that an unknown option returns 1 instead of exiting."""
        assert main(["gen", "gk", "--bogus"]) == EXIT_INPUT

    def test_malformed_graph(self, tmp_path: Path) -> None:
        """Test that a malformed file returns 1."""
        bad = tmp_path / "bad.txt"
        bad.write_text("3 2\n0 1\n")
        assert main(["stats", str(bad)]) == EXIT_INPUT

    def test_not_a_cactus(
        self, capsys: pytest.CaptureFixture[str], tmp_path: Path
    ) -> None:
        """Test that validate reports a witness and still exits 0."""
        theta = tmp_path / "theta.txt"
        theta.write_text("4 5\n0 1\n1 2\n2 3\n3 0\n0 2\n")
        code, out = _run(capsys, "validate", str(theta))
        data = json.loads(out)
        assert code == EXIT_OK
        assert not data["is_cactus"]
        assert len(data["witness"]) == 2


class TestLongRunning:
    """Test campaign, bench and dot."""

    def test_campaign(
        self,
        capsys: pytest.CaptureFixture[str],
        tmp_path: Path,
        no_signal_handler: None,
    ) -> None:
        """Test a tiny campaign with a CSV side file."""
        table = tmp_path / "rows.csv"
        code, out = _run(
            capsys,
            "campaign",
            "--gk",
            "1",
            "--random-count",
            "3",
            "--max-n",
            "8",
            "--threads",
            "1",
            "--csv",
            str(table),
        )
        data = json.loads(out)
        assert code == EXIT_OK
        assert data["aggregate"]["instances"] == 4
        assert table.read_text().startswith("instance,kind,seed,")

    def test_bench(
        self, capsys: pytest.CaptureFixture[str], no_signal_handler: None
    ) -> None:
        """Test the text table of a small benchmark."""
        code, out = _run(
            capsys,
            "bench",
            "--sizes",
            "30,60",
            "--max-growth",
            "1000",
            "--format",
            "text",
        )
        assert code == EXIT_OK
        assert out.splitlines()[0].split()[0] == "n"
        assert len(out.splitlines()) == 4

    def test_dot(self, capsys: pytest.CaptureFixture[str], g1_file: Path) -> None:
        """Test DOT output with the constructed multipacking boxed."""
        code, out = _run(capsys, "dot", str(g1_file), "--approx")
        assert code == EXIT_OK
        assert out.startswith('graph "G" {')
        assert out.count("shape=box") == 3
