"""Edge-list and JSON graph formats."""

from __future__ import annotations

import json
import logging
import sys
from pathlib import Path
from typing import Any, Literal

from cactus_multipacking.exceptions import GraphInputError
from cactus_multipacking.graph_core import Graph, from_edge_list

logger = logging.getLogger(__name__)

GraphFormat = Literal["json", "edgelist"]


def parse_edge_list(text: str) -> Graph:
    """Parse the edge-list format.

    Lines starting with ``#`` and blank lines are ignored. The first data
    line is ``n m``, followed by ``m`` lines ``u v`` with 0-based ids.

    Args:
        text: File contents.

    Returns:
        The parsed graph.

    Raises:
        GraphInputError: With the offending line number.
    """
    header: tuple[int, int] | None = None
    edges: list[tuple[int, int]] = []
    last_line = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        last_line = lineno
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        if len(fields) != 2:
            msg = f"expected two integers, got {line!r}"
            raise GraphInputError(msg, line=lineno)
        try:
            a, b = int(fields[0]), int(fields[1])
        except ValueError:
            msg = f"expected two integers, got {line!r}"
            raise GraphInputError(msg, line=lineno) from None
        if header is None:
            if a < 0 or b < 0:
                msg = f"header counts must be non-negative, got {line!r}"
                raise GraphInputError(msg, line=lineno)
            header = (a, b)
            continue
        if len(edges) == header[1]:
            msg = f"more than the declared {header[1]} edges"
            raise GraphInputError(msg, line=lineno)
        if not (0 <= a < header[0] and 0 <= b < header[0]):
            msg = f"vertex id out of range 0..{header[0] - 1}: {line!r}"
            raise GraphInputError(msg, line=lineno)
        if a == b:
            msg = f"loop edge at vertex {a}"
            raise GraphInputError(msg, line=lineno)
        edges.append((a, b))
    if header is None:
        msg = "missing 'n m' header line"
        raise GraphInputError(msg, line=last_line or 1)
    if len(edges) != header[1]:
        msg = f"declared {header[1]} edges but found {len(edges)}"
        raise GraphInputError(msg, line=last_line)
    return from_edge_list(edges, header[0])


def parse_json_graph(text: str) -> Graph:
    """Parse ``{"n": int, "edges": [[u, v], ...], "labels": {...}}``.

    Raises:
        GraphInputError: On malformed JSON or schema violations.
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise GraphInputError(e.msg, line=e.lineno) from None
    if not isinstance(data, dict):
        msg = "top-level JSON value must be an object"
        raise GraphInputError(msg, line=1)
    n = data.get("n")
    edges = data.get("edges")
    if not isinstance(n, int) or isinstance(n, bool):
        msg = "field 'n' must be an integer"
        raise GraphInputError(msg)
    if not isinstance(edges, list):
        msg = "field 'edges' must be a list"
        raise GraphInputError(msg)
    pairs: list[tuple[int, int]] = []
    for index, edge in enumerate(edges):
        if (
            not isinstance(edge, list)
            or len(edge) != 2
            or not all(isinstance(x, int) and not isinstance(x, bool) for x in edge)
        ):
            msg = f"edges[{index}] must be a pair of integers, got {edge!r}"
            raise GraphInputError(msg)
        pairs.append((edge[0], edge[1]))
    labels_raw = data.get("labels") or {}
    if not isinstance(labels_raw, dict):
        msg = "field 'labels' must be an object"
        raise GraphInputError(msg)
    labels: dict[int, str] = {}
    for key, name in labels_raw.items():
        try:
            labels[int(key)] = str(name)
        except ValueError:
            msg = f"label key {key!r} is not a vertex id"
            raise GraphInputError(msg) from None
    return from_edge_list(pairs, n, labels)


def parse_graph(text: str) -> Graph:
    """Parse either format, choosing JSON when the text starts with ``{``."""
    if text.lstrip().startswith("{"):
        return parse_json_graph(text)
    return parse_edge_list(text)


def load_graph(source: str | Path | None) -> Graph:
    """Read a graph from a file path, or from stdin for ``None``/``"-"``."""
    if source is None or str(source) == "-":
        logger.debug("Reading graph from stdin")
        return parse_graph(sys.stdin.read())
    path = Path(source)
    try:
        text = path.read_text()
    except OSError as e:
        msg = f"cannot read {path}: {e}"
        raise GraphInputError(msg) from e
    return parse_graph(text)


def graph_to_json_obj(g: Graph) -> dict[str, Any]:
    """JSON-ready object for ``g`` (labels only when present)."""
    obj: dict[str, Any] = {"n": g.n, "edges": [[u, v] for u, v in g.edges()]}
    if g.labels:
        obj["labels"] = {str(k): g.labels[k] for k in sorted(g.labels)}
    return obj


def format_edge_list(g: Graph, comment: str | None = None) -> str:
    """Render ``g`` in the edge-list format."""
    lines = [f"# {comment}"] if comment else []
    lines.append(f"{g.n} {g.m}")
    lines.extend(f"{u} {v}" for u, v in g.edges())
    return "\n".join(lines) + "\n"


def format_graph(g: Graph, fmt: GraphFormat = "json") -> str:
    """Render ``g`` as JSON or edge list."""
    if fmt == "edgelist":
        return format_edge_list(g)
    return json.dumps(graph_to_json_obj(g), sort_keys=True) + "\n"
