"""Seeded random k-graphs for the test corpora."""

from __future__ import annotations

import logging
import math

import numpy as np

from kplat.kgraph import (
    Edge,
    KGraph,
    KGraphError,
    Skeleton,
    Square,
    build_kgraph,
    cartesian_product,
    check_local_convexity,
)

logger = logging.getLogger(__name__)

MAX_ATTEMPTS = 50


def _random_1graph(rng: np.random.Generator, n: int, density: float, acyclic: bool) -> KGraph:
    vertices = tuple(f"v{i}" for i in range(n))
    edges = []
    for r in range(n):
        for s in range(n):
            if acyclic and s <= r:
                continue
            if rng.random() < density:
                edges.append(Edge(f"e{len(edges)}", vertices[r], vertices[s], 1))
    return build_kgraph(Skeleton(1, vertices, tuple(edges)))


def _factor_sizes(rng: np.random.Generator, k: int, n: int) -> list[int]:
    """k factor sizes, each at least 1, with product at most n."""
    sizes = []
    budget = n
    for i in range(k):
        remaining = k - i
        top = max(1, int(math.floor(budget ** (1 / remaining) + 1e-9)))
        size = int(rng.integers(1, top + 1))
        sizes.append(size)
        budget = max(1, budget // size)
    return sizes


def _reshuffle(rng: np.random.Generator, graph: KGraph, rounds: int) -> KGraph:
    """Swap the images of squares sharing outer range and source, keeping valid tables."""
    squares = list(graph.squares)
    current = graph
    for _ in range(rounds):
        if len(squares) < 2:
            break
        i, j = (int(x) for x in rng.choice(len(squares), size=2, replace=False))
        a, b = squares[i], squares[j]
        e = graph.edges
        same_colors = e[a.f].color == e[b.f].color and e[a.g].color == e[b.g].color
        same_ends = e[a.f].range == e[b.f].range and e[a.g].source == e[b.g].source
        if not (same_colors and same_ends) or (a.gp, a.fp) == (b.gp, b.fp):
            continue
        trial = list(squares)
        trial[i] = Square(a.f, a.g, b.gp, b.fp)
        trial[j] = Square(b.f, b.g, a.gp, a.fp)
        try:
            current = build_kgraph(current.skeleton, trial)
        except KGraphError:
            continue
        squares = trial
    return current


def random_kgraph(
    k: int,
    nvertices: int,
    density: float,
    seed: int,
    acyclic: bool = False,
) -> KGraph:
    """A random k-graph with at most ``nvertices`` vertices, deterministic in ``seed``.

    For k ≥ 2 this is a product of random 1-graphs with its square table
    randomly reshuffled; outputs that are not locally convex are redrawn.
    """
    if k < 1 or nvertices < 1 or not 0.0 <= density <= 1.0:
        raise ValueError(f"need k ≥ 1, nvertices ≥ 1 and 0 ≤ density ≤ 1, got {k}, {nvertices}, {density}")
    rng = np.random.default_rng(seed)
    if k == 1:
        return _random_1graph(rng, nvertices, density, acyclic)

    for attempt in range(MAX_ATTEMPTS):
        sizes = _factor_sizes(rng, k, nvertices)
        graph = _random_1graph(rng, sizes[0], density, acyclic)
        for size in sizes[1:]:
            graph = cartesian_product(graph, _random_1graph(rng, size, density, acyclic))
        graph = _reshuffle(rng, graph, int(rng.integers(0, 2 * len(graph.squares) + 1)))
        if check_local_convexity(graph).ok:
            return graph
        logger.debug("attempt %d was not locally convex, redrawing", attempt)
    raise RuntimeError(f"no locally convex {k}-graph after {MAX_ATTEMPTS} attempts")
