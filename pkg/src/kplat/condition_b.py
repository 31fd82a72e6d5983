"""Condition (B): every vertex emits a boundary path x with αx ≠ βx for α ≠ β.

αx = βx with d(α) ≤ d(β) forces x = σ^{d(β)−d(α)}(x), and σ^p(x) = x gives
the pair (r(x), x(0,p)), so witnesses are tested by comparing shifts.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

import networkx as nx

from kplat.config import DEFAULT_DEPTH
from kplat.kgraph import Degree, KGraph, deg_add
from kplat.lattice import VertexSet, is_regular, quotient_graph
from kplat.paths import (
    NotBoundary,
    Path,
    UPPath,
    finite_boundary_paths,
    is_boundary_path,
    path_from_edges,
    paths_upto,
    shift,
    up_path,
    vertex_path,
)

logger = logging.getLogger(__name__)

# Ultimately periodic candidates tried per vertex before giving up
SEARCH_BUDGET = 2000


class ConditionBError(Exception):
    """Base class for Condition (B) failures."""


class NotOneGraph(ConditionBError):
    def __init__(self, k: int):
        self.k = k
        super().__init__(f"exact check needs a 1-graph, got k={k}")


class PreconditionFailed(ConditionBError):
    """The quotient check was asked for a graph or set it does not apply to."""


class BStatus(str, Enum):
    SATISFIED = "satisfied"
    VIOLATED = "violated"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class BVerdict:
    status: BStatus
    witness: Path | UPPath | None = None
    certificate: str | None = None
    bound: int | None = None

    def __str__(self) -> str:
        if self.status is BStatus.SATISFIED:
            return "satisfied"
        if self.status is BStatus.VIOLATED:
            return f"VIOLATED ({self.certificate})"
        return f"unknown (depth {self.bound})"


def _satisfied(witness: Path | UPPath) -> BVerdict:
    return BVerdict(BStatus.SATISFIED, witness=witness)


def _violated(certificate: str) -> BVerdict:
    return BVerdict(BStatus.VIOLATED, certificate=certificate)


# ── witnesses ───────────────────────────────────────────────────────


def is_aperiodic_witness(x: Path | UPPath, bound: int | Degree) -> bool:
    """True iff σ^m(x) ≠ σ^n(x) for all m ≠ n with m ∧ n = 0 and m, n ≤ bound.

    Only shifts along the infinite coordinates of x are considered; a finite
    boundary path always passes.
    """
    if isinstance(x, Path):
        return True
    k = len(x.shape)
    if isinstance(bound, int):
        bound = (bound,) * k
    ranges = [range(b + 1) if cap is None else range(1) for b, cap in zip(bound, x.shape)]
    shifted: dict[tuple[int, ...], UPPath] = {}
    by_vertex: dict[str, list[tuple[int, ...]]] = {}
    for m in itertools.product(*ranges):
        y = shift(x, m)
        shifted[m] = y
        by_vertex.setdefault(y.range, []).append(m)
    for group in by_vertex.values():
        for m, n in itertools.combinations(group, 2):
            if any(a and b for a, b in zip(m, n)):
                continue
            if shifted[m] == shifted[n]:
                logger.debug("%s is fixed by the shift pair %s, %s", x, m, n)
                return False
    return True


def _edges_to_path(graph: KGraph, start: str, word: Sequence[str]) -> Path:
    return path_from_edges(graph, list(word)) if word else vertex_path(graph, start)


def _forced_cycle(graph: KGraph, v: str, color: int) -> list[str] | None:
    """The color-``color`` edges of a cycle at v along which every vertex has one such edge."""
    cur, word, seen = v, [], {v}
    while len(graph.edges_at(cur, color)) == 1:
        e = graph.edges_at(cur, color)[0]
        word.append(e)
        cur = graph.edges[e].source
        if cur == v:
            return word
        if cur in seen:
            return None
        seen.add(cur)
    return None


def _greedy_tail(graph: KGraph, w: str) -> tuple[list[str], list[str]]:
    """Follow first edges from w until a vertex repeats: (lead-in, cycle)."""
    word: list[str] = []
    position = {w: 0}
    cur = w
    while True:
        e = graph.out_edges(cur)[0]
        word.append(e)
        cur = graph.edges[e].source
        if cur in position:
            i = position[cur]
            return word[:i], word[i:]
        position[cur] = len(word)


def _edge_between(graph: KGraph, a: str, b: str) -> str:
    return min(e for e in graph.out_edges(a) if graph.edges[e].source == b)


def _cycle_through(graph: KGraph, v: str) -> list[str] | None:
    for e in graph.out_edges(v):
        s = graph.edges[e].source
        if s == v:
            return [e]
        if nx.has_path(graph.digraph, s, v):
            route = nx.shortest_path(graph.digraph, s, v)
            return [e] + [_edge_between(graph, a, b) for a, b in zip(route, route[1:])]
    return None


def _nearest_sink(graph: KGraph, v: str) -> list[str] | None:
    routes = nx.single_source_shortest_path(graph.digraph, v)
    sinks = [w for w in routes if graph.is_total_source(w)]
    if not sinks:
        return None
    target = min(sinks, key=lambda w: (len(routes[w]), w))
    route = routes[target]
    return [_edge_between(graph, a, b) for a, b in zip(route, route[1:])]


# ── per-vertex checks ───────────────────────────────────────────────


def check_vertex_b_1graph(graph: KGraph, v: str) -> BVerdict:
    """Exact check for 1-graphs: v fails iff it sits on a cycle without exits."""
    if graph.k != 1:
        raise NotOneGraph(graph.k)
    graph.check_vertex(v)

    cycle = _forced_cycle(graph, v, 1)
    if cycle is not None:
        return _violated(f"exit-less cycle {'.'.join(cycle)}")

    route = _nearest_sink(graph, v)
    if route is not None:
        return _satisfied(_edges_to_path(graph, v, route))

    loop = _cycle_through(graph, v)
    if loop is None:
        lead, tail = _greedy_tail(graph, v)
        return _satisfied(up_path(_edges_to_path(graph, v, lead), path_from_edges(graph, tail)))

    # leave the cycle at its first exit after going round often enough that
    # no period of the tail can match the repeated cycle
    t = next(i for i, e in enumerate(loop) if len(graph.out_edges(graph.edges[e].range)) > 1)
    exit_edge = next(e for e in graph.out_edges(graph.edges[loop[t]].range) if e != loop[t])
    lead, tail = _greedy_tail(graph, graph.edges[exit_edge].source)
    laps = -(-len(tail) // len(loop)) + 1
    word = loop * laps + loop[:t] + [exit_edge] + lead
    return _satisfied(up_path(path_from_edges(graph, word), path_from_edges(graph, tail)))


def _cycles_at(graph: KGraph, w: str, box: Degree) -> list[Path]:
    return [c for c in paths_upto(graph, w, box) if not c.is_vertex and c.source == w]


def _search_periodic_witness(graph: KGraph, v: str, depth: int) -> UPPath | None:
    tried = 0
    k = graph.k
    for level in range(1, depth + 1):
        box = (level,) * k
        cycles: dict[str, list[Path]] = {}
        for u in paths_upto(graph, v, box):
            if u.source not in cycles:
                cycles[u.source] = _cycles_at(graph, u.source, box)
            for c in cycles[u.source]:
                if max(max(u.degree), max(c.degree)) != level:
                    continue
                tried += 1
                if tried > SEARCH_BUDGET:
                    logger.warning("gave up on %s after %d candidates", v, SEARCH_BUDGET)
                    return None
                try:
                    x = up_path(u, c)
                except NotBoundary:
                    continue
                pump = deg_add(x.prefix.degree, tuple(2 * t for t in x.cycle.degree))
                if is_aperiodic_witness(x, pump):
                    return x
    return None


def check_vertex_b(graph: KGraph, v: str, depth: int = DEFAULT_DEPTH) -> BVerdict:
    """Condition (B) at v: exact for k = 1, a bounded search otherwise."""
    if graph.k == 1:
        return check_vertex_b_1graph(graph, v)
    graph.check_vertex(v)

    if graph.reachable_is_acyclic(v):
        found = finite_boundary_paths(graph, v)
        if found:
            return _satisfied(found[0])

    reach = nx.descendants(graph.digraph, v) | {v}
    if any(graph.is_total_source(w) for w in reach):
        box = (min(depth, len(graph.vertices)),) * graph.k
        for lam in paths_upto(graph, v, box):
            if graph.is_total_source(lam.source) and is_boundary_path(lam):
                return _satisfied(lam)

    if all(len(graph.edges_at(w, c)) <= 1 for w in reach for c in range(1, graph.k + 1)):
        # a single boundary path leaves v; it is shift-invariant iff some
        # color walks back to v
        for c in range(1, graph.k + 1):
            cycle = _forced_cycle(graph, v, c)
            if cycle is not None:
                return _violated(f"forced color-{c} cycle {'.'.join(cycle)}")

    witness = _search_periodic_witness(graph, v, depth)
    if witness is not None:
        return _satisfied(witness)
    logger.warning("condition (B) at %s undecided at depth %d", v, depth)
    return BVerdict(BStatus.UNKNOWN, bound=depth)


# ── whole graphs ────────────────────────────────────────────────────


@dataclass(frozen=True)
class GraphBVerdict:
    verdicts: dict[str, BVerdict] = field(default_factory=dict)

    @property
    def aggregate(self) -> BStatus:
        statuses = {b.status for b in self.verdicts.values()}
        if BStatus.VIOLATED in statuses:
            return BStatus.VIOLATED
        if BStatus.UNKNOWN in statuses:
            return BStatus.UNKNOWN
        return BStatus.SATISFIED

    def format_line(self) -> str:
        return "; ".join(f"{v}: {b}" for v, b in self.verdicts.items())


def check_graph_b(graph: KGraph, depth: int = DEFAULT_DEPTH) -> GraphBVerdict:
    return GraphBVerdict({v: check_vertex_b(graph, v, depth) for v in graph.vertices})


# ── brute force for 1-graphs ────────────────────────────────────────


def _simple_cycles_at(graph: KGraph, w: str, limit: int):
    """Edge words of the cycles at w with at most ``limit`` edges that visit no vertex twice."""

    def grow(at: str, word: list[str], seen: frozenset[str]):
        for e in graph.out_edges(at):
            nxt = graph.edges[e].source
            if nxt == w:
                yield word + [e]
            elif nxt not in seen and len(word) + 1 < limit:
                yield from grow(nxt, word + [e], seen | {nxt})

    yield from grow(w, [], frozenset({w}))


def separation_oracle_1graph(
    graph: KGraph, v: str, depth: int | None = None, max_period: int | None = None
) -> BVerdict:
    """Brute-force Condition (B) at v, sharing nothing with the exact decider.

    Candidates are the finite boundary paths and the paths u·c^∞ with
    d(u) ≤ ``depth`` and c a cycle at s(u) of at most ``max_period`` edges.
    A candidate separates every α ≠ β of degree ≤ ``max_period`` when
    σ^p(x) ≠ x for 1 ≤ p ≤ ``max_period``. The bounds default to
    max(12, 2|Λ^0|) and max(6, |Λ^0|), enough for an exit-less cycle through
    every vertex and for the exit of any other cycle to be reached.
    """
    if graph.k != 1:
        raise NotOneGraph(graph.k)
    graph.check_vertex(v)
    n = len(graph.vertices)
    depth = max(12, 2 * n) if depth is None else depth
    max_period = max(6, n) if max_period is None else max_period
    periods = range(1, max_period + 1)

    level: list[list[str]] = [[]]
    for length in range(depth + 1):
        following: list[list[str]] = []
        for word in level:
            at = graph.edges[word[-1]].source if word else v
            if graph.is_total_source(at):
                return _satisfied(_edges_to_path(graph, v, word))
            # u = v alone gives c^∞, which σ^{d(c)} fixes
            if word:
                prefix = path_from_edges(graph, word)
                for cycle in _simple_cycles_at(graph, at, max_period):
                    try:
                        x = up_path(prefix, path_from_edges(graph, cycle))
                    except NotBoundary:
                        continue
                    if all(shift(x, (p,)) != x for p in periods):
                        return _satisfied(x)
            if length < depth:
                following.extend(word + [e] for e in graph.out_edges(at))
        level = following
    logger.debug("oracle found no separating path at %s (depth %d, period %d)", v, depth, max_period)
    return _violated(f"every path from {v} up to depth {depth} is fixed by a shift of at most {max_period}")


# ── quotients ───────────────────────────────────────────────────────


@dataclass(frozen=True)
class QuotientBReport:
    subset: VertexSet
    quotient: KGraph
    result: GraphBVerdict

    @property
    def violations(self) -> list[str]:
        return [v for v, b in self.result.verdicts.items() if b.status is BStatus.VIOLATED]

    @property
    def inconclusive(self) -> list[str]:
        return [v for v, b in self.result.verdicts.items() if b.status is BStatus.UNKNOWN]

    @property
    def ok(self) -> bool:
        return not self.violations


def theorem5_check(graph: KGraph, h: VertexSet, depth: int = DEFAULT_DEPTH) -> QuotientBReport:
    """Check that Λ∖H satisfies Condition (B) when Λ does and H is regular."""
    before = check_graph_b(graph, depth)
    if before.aggregate is not BStatus.SATISFIED:
        raise PreconditionFailed(f"graph does not verify condition (B): {before.format_line()}")
    if not is_regular(graph, h):
        raise PreconditionFailed(f"{h} is not regular")
    quotient = quotient_graph(graph, h)
    report = QuotientBReport(h, quotient, check_graph_b(quotient, depth))
    if report.violations:
        logger.error("quotient by %s violates condition (B) at %s", h, report.violations)
    return report
