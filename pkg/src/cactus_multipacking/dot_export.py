"""Graphviz DOT rendering of graphs with multipackings and broadcasts."""

from __future__ import annotations

from collections.abc import Iterable

from cactus_multipacking.exact_oracles import Broadcast
from cactus_multipacking.graph_core import Graph


def _escape(text: str) -> str:
    return text.replace("\\", "\\\\").replace('"', '\\"')


def export_dot(
    g: Graph,
    members: Iterable[int] = (),
    broadcast: Broadcast | None = None,
    name: str = "G",
) -> str:
    """Deterministic undirected DOT text.

    Multipacking members are drawn as boxes and broadcast towers get their
    power appended to the label as ``p=<power>``. Vertices and edges are
    emitted in ascending id order.
    """
    boxed = set(members)
    powers = broadcast.powers if broadcast is not None else {}
    lines = [f'graph "{_escape(name)}" {{', "  node [shape=circle];"]
    for v in range(g.n):
        label = _escape(g.label(v))
        attrs: list[str] = []
        if v in powers:
            label = f"{label}\\np={powers[v]}"
            attrs.append("style=filled")
            attrs.append('fillcolor="lightgrey"')
        attrs.insert(0, f'label="{label}"')
        if v in boxed:
            attrs.append("shape=box")
        lines.append(f"  {v} [{', '.join(attrs)}];")
    lines.extend(f"  {u} -- {v};" for u, v in g.edges())
    lines.append("}")
    return "\n".join(lines) + "\n"
