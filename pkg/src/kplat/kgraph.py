"""Finite k-graphs: a k-colored skeleton plus its commuting-square table.

A path runs from its range to its source: the composite λμ exists when
r(μ) = s(λ), and an edge e "leaves" the vertex r(e).
"""

from __future__ import annotations

import itertools
import logging
from collections import Counter, defaultdict
from dataclasses import dataclass
from functools import cached_property
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping

import networkx as nx
from networkx.algorithms.isomorphism import DiGraphMatcher

logger = logging.getLogger(__name__)

Degree = tuple[int, ...]
DegreeZ = tuple[int, ...]


class KGraphError(Exception):
    """Base class for invalid or mismatched k-graph data."""


class BadReference(KGraphError):
    """An id, color or vertex reference does not exist in the skeleton."""


class BadSquare(KGraphError):
    """A square line is not a commuting square of two different colors."""

    def __init__(self, square: "Square", detail: str):
        self.square = square
        super().__init__(f"square {square.as_tuple()}: {detail}")


class MissingSquare(KGraphError):
    """A composable two-colored pair has no partner in the square table."""

    def __init__(self, pair: tuple[str, str]):
        self.pair = pair
        super().__init__(f"no square for composable pair {pair[0]}·{pair[1]}")


class NonBijective(KGraphError):
    """Two different pairs factor to the same pair."""

    def __init__(self, pair: tuple[str, str], first: tuple[str, str], second: tuple[str, str]):
        self.pair = pair
        super().__init__(
            f"pair {pair[0]}·{pair[1]} factors both as {first[0]}·{first[1]} "
            f"and as {second[0]}·{second[1]}"
        )


class CubeViolation(KGraphError):
    """The two ways of reversing a three-colored path disagree."""

    def __init__(self, triple: tuple[str, str, str]):
        self.triple = triple
        super().__init__(f"cube condition fails for {'·'.join(triple)}")


class KMismatch(KGraphError):
    """Two graphs that must share k do not."""


class HasCycle(KGraphError):
    """An operation that needs an acyclic graph met a cycle."""


# ── degrees ─────────────────────────────────────────────────────────


def zero(k: int) -> Degree:
    return (0,) * k


def unit(k: int, color: int) -> Degree:
    """The generator e_color (colors are 1-based)."""
    return tuple(1 if i == color - 1 else 0 for i in range(k))


def deg_add(a: Degree, b: Degree) -> Degree:
    return tuple(x + y for x, y in zip(a, b))


def deg_sub(a: Degree, b: Degree) -> DegreeZ:
    return tuple(x - y for x, y in zip(a, b))


def deg_leq(a: Degree, b: Degree) -> bool:
    return all(x <= y for x, y in zip(a, b))


def deg_join(a: Degree, b: Degree) -> Degree:
    return tuple(max(x, y) for x, y in zip(a, b))


def deg_meet(a: Degree, b: Degree) -> Degree:
    return tuple(min(x, y) for x, y in zip(a, b))


def degrees_upto(n: Degree) -> Iterator[Degree]:
    """All m with 0 ≤ m ≤ n, in lexicographic order."""
    return itertools.product(*(range(c + 1) for c in n))


# ── skeleton data ───────────────────────────────────────────────────


@dataclass(frozen=True)
class Edge:
    """An edge of color ``color`` with range ``range`` and source ``source``."""

    id: str
    range: str
    source: str
    color: int


@dataclass(frozen=True)
class Square:
    """A commuting square f·g = gp·fp (f, fp share a color; g, gp the other)."""

    f: str
    g: str
    gp: str
    fp: str

    def as_tuple(self) -> tuple[str, str, str, str]:
        return (self.f, self.g, self.gp, self.fp)


@dataclass(frozen=True)
class Skeleton:
    """The colored directed graph underlying a k-graph."""

    k: int
    vertices: tuple[str, ...]
    edges: tuple[Edge, ...]


@dataclass(frozen=True)
class FactorizationTable:
    squares: tuple[Square, ...] = ()


# ── the graph ───────────────────────────────────────────────────────


class KGraph:
    """A validated finite k-graph. Build instances with :func:`build_kgraph`."""

    def __init__(
        self,
        k: int,
        vertices: Iterable[str],
        edges: Mapping[str, Edge],
        swap: Mapping[tuple[str, str], tuple[str, str]],
    ):
        self.k = k
        self.vertices: tuple[str, ...] = tuple(sorted(vertices))
        self.edges: Mapping[str, Edge] = MappingProxyType(dict(sorted(edges.items())))
        self.swap: Mapping[tuple[str, str], tuple[str, str]] = MappingProxyType(dict(swap))
        self._vertex_set = frozenset(self.vertices)

        at: dict[str, dict[int, list[str]]] = {v: defaultdict(list) for v in self.vertices}
        for e in self.edges.values():
            at[e.range][e.color].append(e.id)
        self._at = {
            v: {c: tuple(sorted(at[v].get(c, ()))) for c in range(1, k + 1)}
            for v in self.vertices
        }

    def __repr__(self) -> str:
        return f"KGraph({self.describe()})"

    def describe(self) -> str:
        return (
            f"k={self.k}, {len(self.vertices)} vertices, {len(self.edges)} edges, "
            f"{len(self.squares)} squares"
        )

    def has_vertex(self, v: str) -> bool:
        return v in self._vertex_set

    def edge(self, edge_id: str) -> Edge:
        try:
            return self.edges[edge_id]
        except KeyError:
            raise BadReference(f"unknown edge {edge_id!r}") from None

    def check_vertex(self, v: str) -> None:
        if v not in self._vertex_set:
            raise BadReference(f"unknown vertex {v!r}")

    def edges_at(self, v: str, color: int) -> tuple[str, ...]:
        """vΛ^{e_color}: ids of the color-``color`` edges with range v."""
        return self._at[v][color]

    def out_edges(self, v: str) -> tuple[str, ...]:
        """All edges with range v, sorted by color then id."""
        return tuple(e for c in range(1, self.k + 1) for e in self._at[v][c])

    def is_source_in(self, v: str, color: int) -> bool:
        return not self._at[v][color]

    def is_total_source(self, v: str) -> bool:
        return all(not ids for ids in self._at[v].values())

    @cached_property
    def squares(self) -> tuple[Square, ...]:
        """Each square once, oriented so that color(f) < color(g)."""
        out = set()
        for (x, y), (yp, xp) in self.swap.items():
            if self.edges[x].color < self.edges[y].color:
                out.add(Square(x, y, yp, xp))
        return tuple(sorted(out, key=Square.as_tuple))

    @property
    def skeleton(self) -> Skeleton:
        return Skeleton(self.k, self.vertices, tuple(self.edges.values()))

    @property
    def table(self) -> FactorizationTable:
        return FactorizationTable(self.squares)

    @cached_property
    def digraph(self) -> nx.DiGraph:
        """Reachability graph: an arc r(e) → s(e) for every edge e."""
        dg = nx.DiGraph()
        dg.add_nodes_from(self.vertices)
        dg.add_edges_from((e.range, e.source) for e in self.edges.values())
        return dg

    def is_acyclic(self) -> bool:
        return nx.is_directed_acyclic_graph(self.digraph)

    def reachable_is_acyclic(self, v: str) -> bool:
        nodes = nx.descendants(self.digraph, v) | {v}
        return nx.is_directed_acyclic_graph(self.digraph.subgraph(nodes))


# ── construction and validation ─────────────────────────────────────


def build_kgraph(skeleton: Skeleton, squares: FactorizationTable | Iterable[Square] = ()) -> KGraph:
    """Validate a skeleton and square table and return the k-graph.

    Raises BadReference, BadSquare, NonBijective, MissingSquare or
    CubeViolation (k ≥ 3) when the data does not present a k-graph.
    """
    if isinstance(squares, FactorizationTable):
        squares = squares.squares
    k = skeleton.k
    if k < 1:
        raise BadReference(f"k must be positive, got {k}")

    vertices = set()
    for v in skeleton.vertices:
        if v in vertices:
            raise BadReference(f"duplicate vertex {v!r}")
        vertices.add(v)

    edges: dict[str, Edge] = {}
    for e in skeleton.edges:
        if e.id in edges:
            raise BadReference(f"duplicate edge {e.id!r}")
        if e.id in vertices:
            raise BadReference(f"edge id {e.id!r} is also a vertex id")
        if e.range not in vertices or e.source not in vertices:
            raise BadReference(f"edge {e.id!r} references an unknown vertex")
        if not 1 <= e.color <= k:
            raise BadReference(f"edge {e.id!r} has color {e.color} outside 1..{k}")
        edges[e.id] = e

    swap: dict[tuple[str, str], tuple[str, str]] = {}
    for sq in squares:
        _check_square(sq, edges)
        for key, value in (((sq.f, sq.g), (sq.gp, sq.fp)), ((sq.gp, sq.fp), (sq.f, sq.g))):
            known = swap.get(key)
            if known is not None and known != value:
                raise NonBijective(key, known, value)
            swap[key] = value

    # totality: every composable two-colored pair must factor the other way
    by_range: dict[str, list[Edge]] = defaultdict(list)
    for e in edges.values():
        by_range[e.range].append(e)
    for x in sorted(edges.values(), key=lambda e: e.id):
        for y in sorted(by_range[x.source], key=lambda e: e.id):
            if y.color != x.color and (x.id, y.id) not in swap:
                raise MissingSquare((x.id, y.id))

    graph = KGraph(k, vertices, edges, swap)
    if k >= 3:
        _check_cubes(graph)
    logger.debug("built k-graph: %s", graph.describe())
    return graph


def _check_square(sq: Square, edges: Mapping[str, Edge]) -> None:
    for eid in sq.as_tuple():
        if eid not in edges:
            raise BadReference(f"square references unknown edge {eid!r}")
    f, g, gp, fp = (edges[e] for e in sq.as_tuple())
    if f.color != fp.color or g.color != gp.color:
        raise BadSquare(sq, "f/fp and g/gp must share colors")
    if f.color == g.color:
        raise BadSquare(sq, "a square needs two different colors")
    if f.source != g.range or gp.source != fp.range:
        raise BadSquare(sq, "sides are not composable")
    if f.range != gp.range or g.source != fp.source:
        raise BadSquare(sq, "sides do not share range and source")


def _swap_at(graph: KGraph, word: list[str], i: int) -> list[str]:
    out = list(word)
    out[i], out[i + 1] = graph.swap[(word[i], word[i + 1])]
    return out


def _check_cubes(graph: KGraph) -> None:
    for x in graph.edges.values():
        for y_id in graph.out_edges(x.source):
            y = graph.edges[y_id]
            if y.color == x.color:
                continue
            for z_id in graph.out_edges(y.source):
                z = graph.edges[z_id]
                if z.color in (x.color, y.color):
                    continue
                word = [x.id, y.id, z.id]
                left = _swap_at(graph, _swap_at(graph, _swap_at(graph, word, 0), 1), 0)
                right = _swap_at(graph, _swap_at(graph, _swap_at(graph, word, 1), 0), 1)
                if left != right:
                    raise CubeViolation((x.id, y.id, z.id))


def check_local_convexity(graph: KGraph) -> "ConvexityReport":
    """Report every (v, i, j, λ) where λ ∈ vΛ^{e_i}, vΛ^{e_j} ≠ ∅ and s(λ)Λ^{e_j} = ∅."""
    witnesses = []
    for v in graph.vertices:
        for i in range(1, graph.k + 1):
            for j in range(1, graph.k + 1):
                if i == j or not graph.edges_at(v, j):
                    continue
                for lam in graph.edges_at(v, i):
                    if graph.is_source_in(graph.edges[lam].source, j):
                        witnesses.append(ConvexityWitness(v, i, j, lam))
    return ConvexityReport(tuple(witnesses))


@dataclass(frozen=True)
class ConvexityWitness:
    vertex: str
    color: int
    other_color: int
    edge: str

    def __str__(self) -> str:
        return (
            f"{self.vertex}: edge {self.edge} (color {self.color}) ends where "
            f"color {self.other_color} stops"
        )


@dataclass(frozen=True)
class ConvexityReport:
    witnesses: tuple[ConvexityWitness, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.witnesses


# ── standard graphs and constructions ───────────────────────────────


def omega_vertex(p: Degree) -> str:
    return "v" + "_".join(str(c) for c in p)


def omega_edge(p: Degree, color: int) -> str:
    return f"e{color}@" + "_".join(str(c) for c in p)


def omega_graph(k: int, m: Degree) -> KGraph:
    """Ω_{k,m}: vertices p ≤ m, an edge p → p+e_i of color i, all unit squares."""
    m = tuple(m)
    if len(m) != k:
        raise KMismatch(f"degree {m} does not have {k} coordinates")
    points = list(degrees_upto(m))
    edges = []
    for p in points:
        for i in range(1, k + 1):
            q = deg_add(p, unit(k, i))
            if deg_leq(q, m):
                edges.append(Edge(omega_edge(p, i), omega_vertex(p), omega_vertex(q), i))
    squares = []
    for p in points:
        for i, j in itertools.combinations(range(1, k + 1), 2):
            pi, pj = deg_add(p, unit(k, i)), deg_add(p, unit(k, j))
            if deg_leq(deg_add(pi, unit(k, j)), m):
                squares.append(
                    Square(omega_edge(p, i), omega_edge(pi, j), omega_edge(p, j), omega_edge(pj, i))
                )
    return build_kgraph(Skeleton(k, tuple(omega_vertex(p) for p in points), tuple(edges)), squares)


def _renamed(graph: KGraph, prefix: str) -> tuple[list[str], list[Edge], list[Square]]:
    vertices = [prefix + v for v in graph.vertices]
    edges = [
        Edge(prefix + e.id, prefix + e.range, prefix + e.source, e.color)
        for e in graph.edges.values()
    ]
    squares = [Square(*(prefix + x for x in sq.as_tuple())) for sq in graph.squares]
    return vertices, edges, squares


def disjoint_union(a: KGraph, b: KGraph) -> KGraph:
    """a ⊔ b, with ids prefixed ``L:`` and ``R:``."""
    if a.k != b.k:
        raise KMismatch(f"cannot unite a {a.k}-graph with a {b.k}-graph")
    va, ea, sa = _renamed(a, "L:")
    vb, eb, sb = _renamed(b, "R:")
    return build_kgraph(Skeleton(a.k, tuple(va + vb), tuple(ea + eb)), sa + sb)


def cartesian_product(a: KGraph, b: KGraph) -> KGraph:
    """a × b as a (k_a + k_b)-graph; colors of b are shifted up by k_a.

    Vertex (u, w) is ``u|w``; an edge e of a at w is ``e|w``; an edge f of b
    at u is ``u/f``.
    """
    k = a.k + b.k
    vertices = [f"{u}|{w}" for u in a.vertices for w in b.vertices]
    edges = []
    for e in a.edges.values():
        for w in b.vertices:
            edges.append(Edge(f"{e.id}|{w}", f"{e.range}|{w}", f"{e.source}|{w}", e.color))
    for f in b.edges.values():
        for u in a.vertices:
            edges.append(Edge(f"{u}/{f.id}", f"{u}|{f.range}", f"{u}|{f.source}", a.k + f.color))

    squares = []
    for sq in a.squares:
        for w in b.vertices:
            squares.append(Square(*(f"{x}|{w}" for x in sq.as_tuple())))
    for sq in b.squares:
        for u in a.vertices:
            squares.append(Square(*(f"{u}/{x}" for x in sq.as_tuple())))
    for e in a.edges.values():
        for f in b.edges.values():
            squares.append(
                Square(
                    f"{e.id}|{f.range}",
                    f"{e.source}/{f.id}",
                    f"{e.range}/{f.id}",
                    f"{e.id}|{f.source}",
                )
            )
    return build_kgraph(Skeleton(k, tuple(vertices), tuple(edges)), squares)


# ── isomorphism ─────────────────────────────────────────────────────


def _color_digraph(graph: KGraph) -> nx.DiGraph:
    counts: dict[tuple[str, str], Counter] = defaultdict(Counter)
    for e in graph.edges.values():
        counts[(e.range, e.source)][e.color] += 1
    dg = nx.DiGraph()
    dg.add_nodes_from(graph.vertices)
    for (r, s), colors in counts.items():
        dg.add_edge(r, s, colors=tuple(sorted(colors.items())))
    return dg


def find_isomorphism(a: KGraph, b: KGraph) -> tuple[dict[str, str], dict[str, str]] | None:
    """Return (vertex map, edge map) of a k-graph isomorphism a → b, or None.

    Brute force over skeleton isomorphisms and edge bijections; meant for
    the small graphs used in checks.
    """
    if (a.k, len(a.vertices), len(a.edges), len(a.squares)) != (
        b.k,
        len(b.vertices),
        len(b.edges),
        len(b.squares),
    ):
        return None
    matcher = DiGraphMatcher(
        _color_digraph(a), _color_digraph(b), edge_match=lambda x, y: x["colors"] == y["colors"]
    )

    def classes(graph: KGraph) -> dict[tuple[str, str, int], list[str]]:
        out: dict[tuple[str, str, int], list[str]] = defaultdict(list)
        for e in graph.edges.values():
            out[(e.range, e.source, e.color)].append(e.id)
        return out

    a_classes, b_classes = classes(a), classes(b)
    for vmap in matcher.isomorphisms_iter():
        keys = sorted(a_classes)
        choices = [
            itertools.permutations(b_classes[(vmap[r], vmap[s], c)]) for (r, s, c) in keys
        ]
        for picks in itertools.product(*choices):
            emap = {}
            for key, pick in zip(keys, picks):
                emap.update(zip(a_classes[key], pick))
            if all(
                b.swap.get((emap[x], emap[y])) == (emap[yp], emap[xp])
                for (x, y), (yp, xp) in a.swap.items()
            ):
                return dict(vmap), emap
    return None


def is_isomorphic(a: KGraph, b: KGraph) -> bool:
    return find_isomorphism(a, b) is not None
