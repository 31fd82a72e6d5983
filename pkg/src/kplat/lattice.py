"""Saturated hereditary vertex sets and the vertex-level calculus of regular ideals."""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable

import networkx as nx

from kplat.config import DEFAULT_LATTICE_CAP
from kplat.kgraph import Edge, KGraph, Skeleton, build_kgraph, check_local_convexity

logger = logging.getLogger(__name__)


class LatticeError(Exception):
    """Base class for vertex-set calculus failures."""


class NotSH(LatticeError):
    """An operation that needs a saturated hereditary set got something else."""

    def __init__(self, members: Iterable[str]):
        self.members = frozenset(members)
        super().__init__(f"{format_set(self.members)} is not saturated hereditary")


class NotHereditary(LatticeError):
    def __init__(self, members: Iterable[str]):
        self.members = frozenset(members)
        super().__init__(f"{format_set(self.members)} is not hereditary")


class ForeignSet(LatticeError):
    """A vertex set built for one graph was passed with another."""

    def __init__(self, h: "VertexSet", graph: KGraph):
        super().__init__(f"{format_set(h.members)} belongs to {h.graph.describe()}, not {graph.describe()}")


class TooLarge(LatticeError):
    def __init__(self, size: int, cap: int):
        self.size = size
        self.cap = cap
        super().__init__(f"{size} vertices is above the enumeration cap of {cap}")


def format_set(members: Iterable[str]) -> str:
    return "{" + ",".join(sorted(members)) + "}"


@dataclass(frozen=True)
class VertexSet:
    """A subset of Λ^0 with its hereditary and saturated flags computed on demand."""

    graph: KGraph = field(compare=False, repr=False)
    members: frozenset[str]

    def __str__(self) -> str:
        return format_set(self.members)

    def __contains__(self, v: str) -> bool:
        return v in self.members

    def __len__(self) -> int:
        return len(self.members)

    @property
    def key(self) -> tuple:
        return (len(self.members), tuple(sorted(self.members)))

    @cached_property
    def is_hereditary(self) -> bool:
        # edges suffice: a path's vertices are reached one edge at a time
        return all(
            e.source in self.members for e in self.graph.edges.values() if e.range in self.members
        )

    @cached_property
    def is_saturated(self) -> bool:
        return not _unsaturated(self.graph, self.members)

    @property
    def is_sh(self) -> bool:
        return self.is_hereditary and self.is_saturated


def vertex_set(graph: KGraph, members: Iterable[str]) -> VertexSet:
    members = frozenset(members)
    for v in members:
        graph.check_vertex(v)
    return VertexSet(graph, members)


def is_hereditary(h: VertexSet) -> bool:
    return h.is_hereditary


def is_saturated(h: VertexSet) -> bool:
    return h.is_saturated


def _unsaturated(graph: KGraph, members: frozenset[str]) -> set[str]:
    """Vertices outside ``members`` that saturation forces in.

    A color-i source v has vΛ^{≤e_i} = {v}, so it only qualifies when already
    a member.
    """
    forced = set()
    for v in graph.vertices:
        if v in members:
            continue
        for i in range(1, graph.k + 1):
            out = graph.edges_at(v, i)
            if out and all(graph.edges[e].source in members for e in out):
                forced.add(v)
                break
    return forced


def tree_T(graph: KGraph, w: str) -> frozenset[str]:
    """T(w): every vertex reachable from w, w included."""
    graph.check_vertex(w)
    return frozenset(nx.descendants(graph.digraph, w) | {w})


def bar_closure(graph: KGraph, h: VertexSet | Iterable[str]) -> frozenset[str]:
    """{v : T(v) meets H}."""
    members = h.members if isinstance(h, VertexSet) else frozenset(h)
    out = set(members)
    for v in members:
        out |= nx.ancestors(graph.digraph, v)
    return frozenset(out)


def sh_closure(graph: KGraph, seed: Iterable[str]) -> VertexSet:
    """Least saturated hereditary set containing ``seed``."""
    current = frozenset(seed)
    for v in current:
        graph.check_vertex(v)
    while True:
        grown = set(current)
        for v in current:
            grown |= nx.descendants(graph.digraph, v)
        grown |= _unsaturated(graph, frozenset(grown))
        if grown == current:
            return VertexSet(graph, current)
        current = frozenset(grown)


def _require_sh(graph: KGraph, h: VertexSet) -> None:
    if h.graph is not graph:
        raise ForeignSet(h, graph)
    if not h.is_sh:
        raise NotSH(h.members)


def perp(graph: KGraph, h: VertexSet) -> VertexSet:
    """H(J^⊥) = Λ^0 ∖ bar(H): vertices that cannot reach H."""
    _require_sh(graph, h)
    return VertexSet(graph, frozenset(graph.vertices) - bar_closure(graph, h))


def double_perp(graph: KGraph, h: VertexSet) -> VertexSet:
    """{w : T(w) ⊆ bar(H)}."""
    _require_sh(graph, h)
    bar = bar_closure(graph, h)
    return VertexSet(graph, frozenset(w for w in graph.vertices if tree_T(graph, w) <= bar))


def is_regular(graph: KGraph, h: VertexSet) -> bool:
    return double_perp(graph, h).members == h.members


# ── the lattice ─────────────────────────────────────────────────────


@dataclass(frozen=True)
class Lattice:
    """All saturated hereditary sets of a graph, ordered by inclusion."""

    graph: KGraph = field(repr=False)
    elements: tuple[VertexSet, ...]
    meet: tuple[tuple[int, ...], ...]
    join: tuple[tuple[int, ...], ...]
    hasse: tuple[tuple[int, int], ...]

    def __len__(self) -> int:
        return len(self.elements)

    def index_of(self, h: VertexSet | Iterable[str]) -> int:
        members = h.members if isinstance(h, VertexSet) else frozenset(h)
        for i, el in enumerate(self.elements):
            if el.members == members:
                return i
        raise NotSH(members)


def _check_cap(graph: KGraph, cap: int | None) -> None:
    cap = DEFAULT_LATTICE_CAP if cap is None else cap
    if len(graph.vertices) > cap:
        raise TooLarge(len(graph.vertices), cap)


def enumerate_sh_lattice(graph: KGraph, cap: int | None = None) -> Lattice:
    """Every saturated hereditary set, as joins of principal closures.

    Raises TooLarge when the graph has more vertices than ``cap``.
    """
    _check_cap(graph, cap)
    principal = {sh_closure(graph, [v]).members for v in graph.vertices}
    found = {frozenset()}
    frontier = [frozenset()]
    while frontier:
        nxt = []
        for el in frontier:
            for p in principal:
                joined = sh_closure(graph, el | p).members
                if joined not in found:
                    found.add(joined)
                    nxt.append(joined)
        frontier = nxt

    elements = tuple(sorted((VertexSet(graph, m) for m in found), key=lambda h: h.key))
    index = {el.members: i for i, el in enumerate(elements)}
    n = len(elements)
    meet = tuple(
        tuple(index[elements[i].members & elements[j].members] for j in range(n)) for i in range(n)
    )
    join = tuple(
        tuple(index[sh_closure(graph, elements[i].members | elements[j].members).members] for j in range(n))
        for i in range(n)
    )

    order = nx.DiGraph()
    order.add_nodes_from(range(n))
    for i, j in itertools.permutations(range(n), 2):
        if elements[i].members < elements[j].members:
            order.add_edge(i, j)
    hasse = tuple(sorted(nx.transitive_reduction(order).edges()))
    logger.debug("sh lattice of %s has %d elements", graph.describe(), n)
    return Lattice(graph, elements, meet, join, hasse)


def brute_force_sh_sets(graph: KGraph, cap: int | None = None) -> list[VertexSet]:
    """Every subset of Λ^0 tested against the definitions, for cross-checking."""
    _check_cap(graph, cap)
    out = []
    vs = graph.vertices
    for r in range(len(vs) + 1):
        for combo in itertools.combinations(vs, r):
            h = VertexSet(graph, frozenset(combo))
            if h.is_sh:
                out.append(h)
    return sorted(out, key=lambda h: h.key)


def classify_regular(lattice: Lattice) -> list[tuple[VertexSet, bool]]:
    return [(h, is_regular(lattice.graph, h)) for h in lattice.elements]


# ── quotients and restrictions ──────────────────────────────────────


def _subgraph(graph: KGraph, vertices: frozenset[str], edges: list[Edge]) -> KGraph:
    kept = {e.id for e in edges}
    squares = [sq for sq in graph.squares if all(x in kept for x in sq.as_tuple())]
    return build_kgraph(Skeleton(graph.k, tuple(sorted(vertices)), tuple(edges)), squares)


def quotient_graph(graph: KGraph, h: VertexSet) -> KGraph:
    """Λ∖H: the vertices outside H and the edges whose source lies outside H."""
    _require_sh(graph, h)
    keep = frozenset(graph.vertices) - h.members
    edges = [e for e in graph.edges.values() if e.source in keep]
    out = _subgraph(graph, keep, edges)
    if check_local_convexity(graph).ok and not check_local_convexity(out).ok:
        logger.error("quotient of %s by %s lost local convexity", graph.describe(), h)
        raise LatticeError(f"quotient by {h} is not locally convex")
    return out


def restriction_graph(graph: KGraph, h: VertexSet | Iterable[str], require_hereditary: bool = True) -> KGraph:
    """Λ(H): the vertices of H and the edges with range in H.

    With ``require_hereditary=False`` a non-hereditary H keeps only the edges
    with both ends in H.
    """
    hs = h if isinstance(h, VertexSet) else vertex_set(graph, h)
    if require_hereditary and not hs.is_hereditary:
        raise NotHereditary(hs.members)
    edges = [
        e for e in graph.edges.values() if e.range in hs.members and e.source in hs.members
    ]
    return _subgraph(graph, hs.members, edges)
