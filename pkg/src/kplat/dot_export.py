"""Graphviz DOT output for k-graph skeletons and sh lattices."""

from __future__ import annotations

from kplat.kgraph import KGraph
from kplat.lattice import Lattice, is_regular

COLOR_STYLES = {1: "solid", 2: "dashed", 3: "dotted"}


def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def kgraph_dot(graph: KGraph) -> str:
    """Edges run range → source; colors 1-3 get line styles, higher colors a numeric label."""
    builder = ["digraph kgraph {"]
    for v in graph.vertices:
        builder.append(f"  {_quote(v)};")
    for e in graph.edges.values():
        attrs = [f"label={_quote(e.id if e.color in COLOR_STYLES else f'{e.id} [{e.color}]')}"]
        attrs.append(f"style={COLOR_STYLES.get(e.color, 'bold')}")
        builder.append(f"  {_quote(e.range)} -> {_quote(e.source)} [{', '.join(attrs)}];")
    builder.append("}")
    return "\n".join(builder) + "\n"


def lattice_dot(lattice: Lattice) -> str:
    """Hasse diagram; regular sets are drawn double-circled."""
    builder = ["digraph lattice {", "  rankdir=BT;"]
    for i, h in enumerate(lattice.elements):
        shape = "doublecircle" if is_regular(lattice.graph, h) else "circle"
        builder.append(f"  n{i} [label={_quote(str(h))}, shape={shape}];")
    for lower, upper in lattice.hasse:
        builder.append(f"  n{lower} -> n{upper};")
    builder.append("}")
    return "\n".join(builder) + "\n"


def export_dot(obj: KGraph | Lattice) -> str:
    if isinstance(obj, Lattice):
        return lattice_dot(obj)
    return kgraph_dot(obj)
