"""
kplat - finite k-graphs and their Kumjian-Pask algebras

Builds and validates k-graphs, enumerates saturated hereditary vertex sets,
computes perps and regularity, checks Condition (B), and does exact
arithmetic in KP_Q(Λ).

Usage:
    python -m kplat validate graph.kg
"""

__version__ = "0.1.0"

from .condition_b import BStatus, BVerdict, check_graph_b, check_vertex_b
from .kgraph import KGraph, KGraphError, build_kgraph, check_local_convexity
from .kgraph_format import load_kgraph, parse_kgraph, serialize_kgraph
from .kp_engine import KPElement, gen_p, gen_s, gen_sstar, ideal_membership, is_zero
from .lattice import VertexSet, double_perp, enumerate_sh_lattice, is_regular, perp, quotient_graph
from .paths import Path, UPPath, up_path

__all__ = [
    "BStatus",
    "BVerdict",
    "KGraph",
    "KGraphError",
    "KPElement",
    "Path",
    "UPPath",
    "VertexSet",
    "build_kgraph",
    "check_graph_b",
    "check_local_convexity",
    "check_vertex_b",
    "double_perp",
    "enumerate_sh_lattice",
    "gen_p",
    "gen_s",
    "gen_sstar",
    "ideal_membership",
    "is_regular",
    "is_zero",
    "load_kgraph",
    "parse_kgraph",
    "perp",
    "quotient_graph",
    "serialize_kgraph",
    "up_path",
]
