"""Path arithmetic in a k-graph.

Finite paths are kept in canonical form: the factorization whose edge
word lists all color-1 edges first, then color 2, and so on. Infinite
boundary paths are only handled when ultimately periodic (``UPPath``).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, Sequence

import networkx as nx

from kplat.kgraph import (
    Degree,
    KGraph,
    deg_add,
    deg_join,
    deg_leq,
    deg_sub,
    degrees_upto,
    unit,
    zero,
)

logger = logging.getLogger(__name__)


class PathError(Exception):
    """Base class for path arithmetic failures."""


class NotComposable(PathError):
    def __init__(self, left: str, right: str):
        self.left = left
        self.right = right
        super().__init__(f"cannot compose {left} with {right}: source and range differ")


class BadSegments(PathError):
    """Degrees handed to a factorization are out of order or out of range."""


class ShiftBeyondEnd(PathError):
    """A shift runs past the end of a finite coordinate."""


class CycleReachable(PathError):
    """A cycle is reachable, so boundary paths are not all finite."""

    def __init__(self, vertex: str):
        self.vertex = vertex
        super().__init__(f"a cycle is reachable from {vertex}; boundary paths can be infinite")


class NotBoundary(PathError):
    """A periodic representation does not describe a boundary path."""


# ── finite paths ────────────────────────────────────────────────────


@dataclass(frozen=True)
class Path:
    """A morphism of the k-graph, stored as its canonical edge word.

    A path of degree 0 is the vertex ``range`` (== ``source``).
    """

    graph: KGraph = field(compare=False, repr=False)
    edges: tuple[str, ...]
    range: str
    source: str
    degree: Degree

    def __str__(self) -> str:
        return ".".join(self.edges) if self.edges else self.range

    @property
    def is_vertex(self) -> bool:
        return not self.edges

    @property
    def key(self) -> tuple:
        return (self.degree, self.edges, self.range)


def _canonical(graph: KGraph, word: Sequence[str]) -> tuple[str, ...]:
    word = list(word)
    changed = True
    while changed:
        changed = False
        for i in range(len(word) - 1):
            a, b = word[i], word[i + 1]
            if graph.edges[a].color > graph.edges[b].color:
                word[i], word[i + 1] = graph.swap[(a, b)]
                changed = True
    return tuple(word)


def _from_canonical(graph: KGraph, word: tuple[str, ...]) -> Path:
    degree = [0] * graph.k
    for e in word:
        degree[graph.edges[e].color - 1] += 1
    return Path(graph, word, graph.edges[word[0]].range, graph.edges[word[-1]].source, tuple(degree))


def vertex_path(graph: KGraph, v: str) -> Path:
    graph.check_vertex(v)
    return Path(graph, (), v, v, zero(graph.k))


def edge_path(graph: KGraph, edge_id: str) -> Path:
    graph.edge(edge_id)
    return _from_canonical(graph, (edge_id,))


def path_from_edges(graph: KGraph, edge_ids: Sequence[str]) -> Path:
    """The morphism e1·e2·…·en, for any composable order of colors."""
    if not edge_ids:
        raise BadSegments("a path needs at least one edge; use vertex_path for vertices")
    for eid in edge_ids:
        graph.edge(eid)
    for a, b in zip(edge_ids, edge_ids[1:]):
        if graph.edges[a].source != graph.edges[b].range:
            raise NotComposable(a, b)
    return _from_canonical(graph, _canonical(graph, edge_ids))


def compose(a: Path, b: Path) -> Path:
    """ab, defined when r(b) = s(a)."""
    if a.source != b.range:
        raise NotComposable(str(a), str(b))
    if a.is_vertex:
        return b
    if b.is_vertex:
        return a
    return _from_canonical(a.graph, _canonical(a.graph, a.edges + b.edges))


def power(a: Path, n: int) -> Path:
    out = vertex_path(a.graph, a.range)
    for _ in range(n):
        out = compose(out, a)
    return out


# ── the Ω_{k,d(λ)} picture of a path ───────────────────────────────


@dataclass
class _Grid:
    edge: dict[tuple[Degree, int], str]
    vertex: dict[Degree, str]


@lru_cache(maxsize=4096)
def _grid(graph: KGraph, word: tuple[str, ...], start: str) -> _Grid:
    """Fill in the image of every unit edge of Ω_{k,d} for the path ``word``."""
    k = graph.k
    edge_at: dict[tuple[Degree, int], str] = {}
    vertex_at: dict[Degree, str] = {zero(k): start}
    cur = zero(k)
    for e in word:
        c = graph.edges[e].color
        edge_at[(cur, c)] = e
        cur = deg_add(cur, unit(k, c))
        vertex_at[cur] = graph.edges[e].source

    pending = list(edge_at)
    while pending:
        p, i = pending.pop()
        f = edge_at[(p, i)]
        pi = deg_add(p, unit(k, i))
        for j in range(1, k + 1):
            if j == i:
                continue
            g = edge_at.get((pi, j))
            if g is None or (p, j) in edge_at:
                continue
            gp, fp = graph.swap[(f, g)]
            pj = deg_add(p, unit(k, j))
            edge_at[(p, j)] = gp
            edge_at[(pj, i)] = fp
            vertex_at[pj] = graph.edges[gp].source
            pending.extend([(p, j), (pj, i)])
        # the square may also be completed from the other side
        for j in range(1, k + 1):
            if j == i or p[j - 1] == 0:
                continue
            q = deg_sub(p, unit(k, j))
            g = edge_at.get((q, j))
            if g is None or (q, i) in edge_at:
                continue
            fp, gp = graph.swap[(g, f)]
            edge_at[(q, i)] = fp
            edge_at[(deg_add(q, unit(k, i)), j)] = gp
            vertex_at[deg_add(q, unit(k, i))] = graph.edges[fp].source
            pending.extend([(q, i), (deg_add(q, unit(k, i)), j)])
    return _Grid(edge_at, vertex_at)


def _staircase(graph: KGraph, grid: _Grid, p: Degree, q: Degree) -> Path:
    word = []
    cur = p
    for i in range(1, graph.k + 1):
        for _ in range(q[i - 1] - p[i - 1]):
            word.append(grid.edge[(cur, i)])
            cur = deg_add(cur, unit(graph.k, i))
    if not word:
        return Path(graph, (), grid.vertex[p], grid.vertex[p], zero(graph.k))
    return _from_canonical(graph, tuple(word))


def segment(a: Path, m: Degree, n: Degree) -> Path:
    """a(m, n): the piece of a between degrees m ≤ n ≤ d(a)."""
    if not (deg_leq(zero(len(m)), m) and deg_leq(m, n) and deg_leq(n, a.degree)):
        raise BadSegments(f"need 0 ≤ {m} ≤ {n} ≤ {a.degree}")
    return _staircase(a.graph, _grid(a.graph, a.edges, a.range), tuple(m), tuple(n))


def vertex_at(a: Path, p: Degree) -> str:
    """a(p), the vertex reached after the degree-p initial piece."""
    if not deg_leq(p, a.degree):
        raise BadSegments(f"{p} is not below {a.degree}")
    return _grid(a.graph, a.edges, a.range).vertex[tuple(p)]


def factor(a: Path, l: Degree, m: Degree, n: Degree) -> tuple[Path, Path, Path]:
    """Split a = a(0,l) a(l,m) a(m,n); requires l ≤ m ≤ n = d(a)."""
    if tuple(n) != a.degree:
        raise BadSegments(f"{n} is not the degree {a.degree} of {a}")
    if not (deg_leq(zero(len(l)), l) and deg_leq(l, m) and deg_leq(m, n)):
        raise BadSegments(f"need 0 ≤ {l} ≤ {m} ≤ {n}")
    return segment(a, zero(len(l)), l), segment(a, l, m), segment(a, m, n)


def is_boundary_path(a: Path) -> bool:
    """Whether every point of Ω_{k,d(a)} that is a source in color i lands on a color-i source."""
    grid = _grid(a.graph, a.edges, a.range)
    for p, v in grid.vertex.items():
        for i in range(1, a.graph.k + 1):
            if p[i - 1] == a.degree[i - 1] and not a.graph.is_source_in(v, i):
                return False
    return True


# ── enumeration ─────────────────────────────────────────────────────


def _color_sorted_words(
    graph: KGraph, v: str, lower: Degree, upper: Degree
) -> Iterator[tuple[tuple[str, ...], str]]:
    """Every color-sorted edge word from v with lower ≤ degree ≤ upper, with its source."""

    def walk(color: int, at: str, word: tuple[str, ...]) -> Iterator[tuple[tuple[str, ...], str]]:
        if color > graph.k:
            yield word, at
            return
        lo, hi = lower[color - 1], upper[color - 1]

        def block(at: str, word: tuple[str, ...], used: int):
            if used >= lo:
                yield from walk(color + 1, at, word)
            if used < hi:
                for e in graph.edges_at(at, color):
                    yield from block(graph.edges[e].source, word + (e,), used + 1)

        yield from block(at, word, 0)

    yield from walk(1, v, ())


def _paths_between(graph: KGraph, v: str, lower: Degree, upper: Degree) -> list[Path]:
    graph.check_vertex(v)
    if len(lower) != graph.k or len(upper) != graph.k:
        raise BadSegments(f"degrees must have {graph.k} coordinates")
    out = []
    for word, _ in _color_sorted_words(graph, v, tuple(lower), tuple(upper)):
        out.append(_from_canonical(graph, word) if word else vertex_path(graph, v))
    return sorted(out, key=lambda p: p.key)


def paths_of_degree(graph: KGraph, v: str, n: Degree) -> list[Path]:
    """vΛ^n, sorted."""
    return _paths_between(graph, v, n, n)


def paths_upto(graph: KGraph, v: str, n: Degree) -> list[Path]:
    """Every path with range v and degree ≤ n."""
    return _paths_between(graph, v, zero(graph.k), n)


def paths_leq(graph: KGraph, v: str, n: Degree) -> list[Path]:
    """vΛ^{≤n}: paths of degree ≤ n that stop early in color i only at a color-i source."""
    out = []
    for lam in paths_upto(graph, v, n):
        if all(
            lam.degree[i - 1] == n[i - 1] or graph.is_source_in(lam.source, i)
            for i in range(1, graph.k + 1)
        ):
            out.append(lam)
    return out


def _longest_bound(graph: KGraph, v: str) -> int:
    return len(nx.descendants(graph.digraph, v))


def finite_boundary_paths(graph: KGraph, v: str) -> list[Path]:
    """All finite boundary paths with range v; the graph below v must be acyclic."""
    graph.check_vertex(v)
    if not graph.reachable_is_acyclic(v):
        raise CycleReachable(v)
    n = _longest_bound(graph, v)
    return [lam for lam in paths_upto(graph, v, (n,) * graph.k) if is_boundary_path(lam)]


def all_paths(graph: KGraph, bound: Degree | None = None) -> list[Path]:
    """Every morphism of degree ≤ bound (all of Λ when omitted, acyclic graphs only)."""
    if bound is None:
        if not graph.is_acyclic():
            cyclic = next(v for v in graph.vertices if not graph.reachable_is_acyclic(v))
            raise CycleReachable(cyclic)
        bound = (len(graph.vertices),) * graph.k
    out = []
    for v in graph.vertices:
        out.extend(paths_upto(graph, v, bound))
    return out


def morphism_count(graph: KGraph) -> int:
    return len(all_paths(graph))


# ── ultimately periodic boundary paths ──────────────────────────────


@dataclass(frozen=True, eq=False)
class UPPath:
    """The boundary path prefix·cycle^∞. Build with :func:`up_path`.

    Equality compares the represented boundary paths, not the
    representations.
    """

    prefix: Path
    cycle: Path

    @property
    def graph(self) -> KGraph:
        return self.prefix.graph

    @property
    def range(self) -> str:
        return self.prefix.range

    @property
    def shape(self) -> tuple[int | None, ...]:
        """d_∞ of the boundary path: None on the infinite coordinates."""
        return tuple(
            None if t else d for d, t in zip(self.prefix.degree, self.cycle.degree)
        )

    def __str__(self) -> str:
        head = "" if self.prefix.is_vertex else f"{self.prefix}·"
        return f"{head}({self.cycle})^∞"

    def __repr__(self) -> str:
        return f"UPPath({self})"

    def __hash__(self) -> int:
        return hash((self.range, self.shape))

    def unrolled(self, reach: Degree) -> Path:
        """prefix·cycle^N for the least N taking every infinite coordinate to ``reach``."""
        n = 0
        for d, t, r in zip(self.prefix.degree, self.cycle.degree, reach):
            if t:
                n = max(n, -(-(r - d) // t))
        return compose(self.prefix, power(self.cycle, n))

    def segment(self, m: Degree, n: Degree) -> Path:
        """x(m, n)."""
        for i, cap in enumerate(self.shape):
            if cap is not None and n[i] > cap:
                raise ShiftBeyondEnd(f"coordinate {i + 1} ends at {cap}")
        return segment(self.unrolled(n), m, n)

    def vertex_at(self, p: Degree) -> str:
        return self.segment(p, p).range

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, UPPath):
            return NotImplemented
        if self.range != other.range or self.shape != other.shape:
            return False
        a = deg_join(self.prefix.degree, other.prefix.degree)
        if self.segment(zero(len(a)), a) != other.segment(zero(len(a)), a):
            return False
        # past a both are purely periodic, with periods t and u
        t, u = self.cycle.degree, other.cycle.degree
        if t == u:
            return self.segment(a, deg_add(a, t)) == other.segment(a, deg_add(a, t))
        if self.segment(a, deg_add(a, u)) != other.segment(a, deg_add(a, u)):
            return False
        au = deg_add(a, u)
        return self.segment(au, deg_add(au, t)) == self.segment(a, deg_add(a, t))


def _divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def _primitive_root(cycle: Path) -> Path:
    g = 0
    for c in cycle.degree:
        g = math.gcd(g, c)
    for n in sorted(_divisors(g), reverse=True):
        if n == 1:
            break
        root_degree = tuple(c // n for c in cycle.degree)
        root = segment(cycle, zero(len(root_degree)), root_degree)
        if root.source == root.range and power(root, n) == cycle:
            return root
    return cycle


def _normalize(prefix: Path, cycle: Path) -> UPPath:
    k = prefix.graph.k
    cycle = _primitive_root(cycle)
    stripped = True
    while stripped and not prefix.is_vertex:
        stripped = False
        for i in range(1, k + 1):
            if not cycle.degree[i - 1] or not prefix.degree[i - 1]:
                continue
            cut = deg_sub(prefix.degree, unit(k, i))
            last = segment(prefix, cut, prefix.degree)
            rolled = compose(last, cycle)
            if segment(rolled, cycle.degree, rolled.degree) == last:
                prefix = segment(prefix, zero(k), cut)
                cycle = segment(rolled, zero(k), cycle.degree)
                stripped = True
                break
    return UPPath(prefix, cycle)


def _check_boundary(x: UPPath) -> None:
    finite = [i for i, cap in enumerate(x.shape, start=1) if cap is not None]
    if not finite:
        return
    graph = x.graph
    reps = len(graph.vertices) + 1
    window = deg_add(x.prefix.degree, tuple(reps * t for t in x.cycle.degree))
    lam = x.unrolled(window)
    grid = _grid(graph, lam.edges, lam.range)
    for p, v in grid.vertex.items():
        for i in finite:
            if p[i - 1] == x.shape[i - 1] and not graph.is_source_in(v, i):
                raise NotBoundary(f"{x} meets {v}, which still has color-{i} edges")


def up_path(prefix: Path, cycle: Path) -> UPPath:
    """Validate and normalize prefix·cycle^∞.

    The boundary condition on finite coordinates is checked over
    |Λ^0| + 1 repetitions of the cycle.
    """
    if cycle.is_vertex:
        raise BadSegments("the repeating part must have nonzero degree")
    if cycle.range != cycle.source:
        raise NotComposable(str(cycle), str(cycle))
    if prefix.source != cycle.range:
        raise NotComposable(str(prefix), str(cycle))
    x = _normalize(prefix, cycle)
    _check_boundary(x)
    return x


def compose_with_boundary(a: Path, x: UPPath) -> UPPath:
    """a·x, defined when s(a) = r(x)."""
    if a.source != x.range:
        raise NotComposable(str(a), str(x))
    return _normalize(compose(a, x.prefix), x.cycle)


def shift(x: UPPath, p: Degree) -> UPPath:
    """σ^p(x) = x(p, ·)."""
    p = tuple(p)
    for i, cap in enumerate(x.shape):
        if cap is not None and p[i] > cap:
            raise ShiftBeyondEnd(f"cannot shift {x} by {p}: coordinate {i + 1} ends at {cap}")
    lam = x.unrolled(p)
    return _normalize(segment(lam, p, lam.degree), x.cycle)
