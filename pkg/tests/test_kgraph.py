"""Tests for kgraph.py."""

import sys
from pathlib import Path

import networkx as nx
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from kplat.kgraph import (
    BadReference,
    BadSquare,
    CubeViolation,
    Edge,
    KGraphError,
    KMismatch,
    MissingSquare,
    NonBijective,
    Skeleton,
    Square,
    build_kgraph,
    cartesian_product,
    check_local_convexity,
    deg_add,
    deg_join,
    deg_leq,
    deg_meet,
    deg_sub,
    degrees_upto,
    disjoint_union,
    find_isomorphism,
    is_isomorphic,
    omega_graph,
    unit,
)
from kplat.generator import random_kgraph
from kplat.kgraph_format import parse_kgraph
from kplat.paths import paths_of_degree


def _loop(k: int = 1) -> Skeleton:
    return Skeleton(k, ("v",), (Edge("x", "v", "v", 1),))


class TestDegrees:
    def test_arithmetic(self):
        assert deg_add((1, 2), (3, 0)) == (4, 2)
        assert deg_sub((1, 2), (3, 0)) == (-2, 2)
        assert deg_join((1, 2), (3, 0)) == (3, 2)
        assert deg_meet((1, 2), (3, 0)) == (1, 0)

    def test_order_is_componentwise(self):
        assert deg_leq((1, 0), (1, 1))
        assert not deg_leq((2, 0), (1, 1))

    def test_unit_is_one_based(self):
        assert unit(3, 1) == (1, 0, 0)
        assert unit(3, 3) == (0, 0, 1)

    def test_degrees_upto(self):
        assert list(degrees_upto((1, 1))) == [(0, 0), (0, 1), (1, 0), (1, 1)]


class TestBuild:
    def test_g1(self, g1):
        assert g1.k == 1
        assert g1.vertices == ("a", "b")
        assert sorted(g1.edges) == ["e", "f", "g"]
        assert g1.squares == ()
        assert g1.describe() == "k=1, 2 vertices, 3 edges, 0 squares"

    def test_out_edges_sorted_by_color_then_id(self, g1):
        assert g1.out_edges("a") == ("e", "g")
        assert g1.edges_at("b", 1) == ("f",)

    def test_sources(self, chain):
        assert chain.is_total_source("c")
        assert not chain.is_source_in("a", 1)

    def test_torus_square(self, torus):
        assert torus.squares == (Square("a", "b", "b", "a"),)
        assert torus.swap[("a", "b")] == ("b", "a")
        assert torus.swap[("b", "a")] == ("a", "b")

    def test_missing_square(self):
        skel = Skeleton(2, ("v",), (Edge("a", "v", "v", 1), Edge("b", "v", "v", 2)))
        with pytest.raises(MissingSquare) as exc:
            build_kgraph(skel)
        assert exc.value.pair in (("a", "b"), ("b", "a"))

    def test_non_bijective(self):
        skel = Skeleton(
            2,
            ("v",),
            (Edge("a1", "v", "v", 1), Edge("a2", "v", "v", 1), Edge("b", "v", "v", 2)),
        )
        squares = [Square("a1", "b", "b", "a1"), Square("a2", "b", "b", "a1")]
        with pytest.raises(NonBijective):
            build_kgraph(skel, squares)

    def test_square_needs_two_colors(self):
        skel = Skeleton(2, ("v",), (Edge("a1", "v", "v", 1), Edge("a2", "v", "v", 1)))
        with pytest.raises(BadSquare):
            build_kgraph(skel, [Square("a1", "a2", "a2", "a1")])

    def test_unknown_vertex(self):
        with pytest.raises(BadReference):
            build_kgraph(Skeleton(1, ("v",), (Edge("x", "v", "w", 1),)))

    def test_color_out_of_range(self):
        with pytest.raises(BadReference):
            build_kgraph(Skeleton(1, ("v",), (Edge("x", "v", "v", 2),)))

    def test_duplicate_edge(self):
        skel = Skeleton(1, ("v",), (Edge("x", "v", "v", 1), Edge("x", "v", "v", 1)))
        with pytest.raises(BadReference):
            build_kgraph(skel)

    def test_three_torus_satisfies_cubes(self):
        skel = Skeleton(
            3,
            ("v",),
            (Edge("a", "v", "v", 1), Edge("b", "v", "v", 2), Edge("c", "v", "v", 3)),
        )
        squares = [Square("a", "b", "b", "a"), Square("a", "c", "c", "a"), Square("b", "c", "c", "b")]
        graph = build_kgraph(skel, squares)
        assert len(graph.squares) == 3

    def test_noncommuting_twists_break_the_cube(self):
        # a_i·b = b·a_σ(i) and a_i·c = c·a_τ(i) with σ, τ transpositions that do not commute
        skel = Skeleton(
            3,
            ("v",),
            tuple(Edge(f"a{i}", "v", "v", 1) for i in (1, 2, 3)) + (Edge("b", "v", "v", 2), Edge("c", "v", "v", 3)),
        )
        sigma = {1: 2, 2: 1, 3: 3}
        tau = {1: 1, 2: 3, 3: 2}
        squares = [Square(f"a{i}", "b", "b", f"a{sigma[i]}") for i in (1, 2, 3)]
        squares += [Square(f"a{i}", "c", "c", f"a{tau[i]}") for i in (1, 2, 3)]
        squares.append(Square("b", "c", "c", "b"))
        with pytest.raises(CubeViolation):
            build_kgraph(skel, squares)

    def test_edge_id_shared_with_vertex(self):
        with pytest.raises(BadReference):
            build_kgraph(Skeleton(1, ("v", "x"), (Edge("x", "v", "v", 1),)))

    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 100_000), st.integers(1, 4), st.data())
    def test_one_mutated_square_entry_is_rejected(self, seed, n, data):
        graph = random_kgraph(2, n, 0.5, seed)
        squares = list(graph.squares)
        assume(squares)
        i = data.draw(st.integers(0, len(squares) - 1))
        slot = data.draw(st.integers(0, 3))
        entries = list(squares[i].as_tuple())
        replacement = data.draw(st.sampled_from(sorted(set(graph.edges) - {entries[slot]}) + ["nowhere"]))
        entries[slot] = replacement
        squares[i] = Square(*entries)
        with pytest.raises(KGraphError):
            build_kgraph(graph.skeleton, squares)

    def test_acyclicity(self, g1, chain):
        assert not g1.is_acyclic()
        assert chain.is_acyclic()
        assert not g1.reachable_is_acyclic("a")


class TestLocalConvexity:
    def test_one_graphs_are_convex(self, g1):
        assert check_local_convexity(g1).ok

    def test_fork_into_sources(self):
        skel = Skeleton(
            2,
            ("u", "w", "x"),
            (Edge("a", "u", "w", 1), Edge("b", "u", "x", 2)),
        )
        report = check_local_convexity(build_kgraph(skel))
        assert not report.ok
        assert {(w.vertex, w.color, w.other_color, w.edge) for w in report.witnesses} == {
            ("u", 1, 2, "a"),
            ("u", 2, 1, "b"),
        }

    def test_omega_is_convex(self, omega11):
        assert check_local_convexity(omega11).ok


class TestConstructions:
    def test_omega(self, omega11):
        assert omega11.vertices == ("v0_0", "v0_1", "v1_0", "v1_1")
        assert len(omega11.edges) == 4
        assert len(omega11.squares) == 1
        assert omega11.is_acyclic()

    def test_omega_needs_matching_k(self):
        with pytest.raises(KMismatch):
            omega_graph(2, (1,))

    def test_disjoint_union(self, g2):
        union = disjoint_union(g2, g2)
        assert union.vertices == ("L:v", "R:v")
        assert len(union.edges) == 4

    def test_union_needs_same_k(self, g2, torus):
        with pytest.raises(KMismatch):
            disjoint_union(g2, torus)

    def test_product_of_loops_is_torus(self, torus):
        loop = build_kgraph(_loop())
        product = cartesian_product(loop, loop)
        assert product.k == 2
        assert product.vertices == ("v|v",)
        assert is_isomorphic(product, torus)

    def test_product_of_intervals_is_omega(self, omega11):
        interval = omega_graph(1, (1,))
        assert is_isomorphic(cartesian_product(interval, interval), omega11)


class TestIsomorphism:
    def test_self(self, g1):
        found = find_isomorphism(g1, g1)
        assert found is not None
        vmap, emap = found
        assert vmap == {"a": "a", "b": "b"}
        assert emap == {"e": "e", "f": "f", "g": "g"}

    def test_renamed(self, g1):
        renamed = parse_kgraph(
            "kgraph 1 k=1\nvertex p\nvertex q\nedge l p p 1\nedge m p q 1\nedge n q q 1\n"
        )
        vmap, emap = find_isomorphism(g1, renamed)
        assert vmap == {"a": "p", "b": "q"}
        assert emap["e"] == "m"

    def test_different_shapes(self, g1, chain):
        assert not is_isomorphic(g1, chain)

    def test_twisted_square_table(self):
        skel = Skeleton(
            2,
            ("v",),
            (
                Edge("a1", "v", "v", 1),
                Edge("a2", "v", "v", 1),
                Edge("b1", "v", "v", 2),
                Edge("b2", "v", "v", 2),
            ),
        )
        straight = [
            Square(a, b, b, a) for a in ("a1", "a2") for b in ("b1", "b2")
        ]
        twisted = [
            Square("a1", "b1", "b2", "a2"),
            Square("a1", "b2", "b1", "a1"),
            Square("a2", "b1", "b1", "a2"),
            Square("a2", "b2", "b2", "a1"),
        ]
        assert not is_isomorphic(build_kgraph(skel, straight), build_kgraph(skel, twisted))


def _walk_classes(graph, v, n):
    """Edge walks from v with n[i] edges of color i, up to square moves."""
    length = sum(n)
    walks = []

    def grow(at, word, counts):
        if len(word) == length:
            walks.append(tuple(word))
            return
        for e in graph.out_edges(at):
            c = graph.edges[e].color
            if counts[c - 1] < n[c - 1]:
                bumped = list(counts)
                bumped[c - 1] += 1
                grow(graph.edges[e].source, word + [e], bumped)

    grow(v, [], [0] * graph.k)
    moves = nx.Graph()
    moves.add_nodes_from(walks)
    for word in walks:
        for i in range(length - 1):
            pair = (word[i], word[i + 1])
            if pair in graph.swap:
                moves.add_edge(word, word[:i] + graph.swap[pair] + word[i + 2:])
    return nx.number_connected_components(moves)


class TestPathCounts:
    @pytest.mark.parametrize("n", [(1, 0), (1, 1), (2, 1), (2, 2)])
    def test_twisted_table(self, n):
        skel = Skeleton(
            2,
            ("v",),
            (
                Edge("a1", "v", "v", 1),
                Edge("a2", "v", "v", 1),
                Edge("b1", "v", "v", 2),
                Edge("b2", "v", "v", 2),
            ),
        )
        twisted = [
            Square("a1", "b1", "b2", "a2"),
            Square("a1", "b2", "b1", "a1"),
            Square("a2", "b1", "b1", "a2"),
            Square("a2", "b2", "b2", "a1"),
        ]
        graph = build_kgraph(skel, twisted)
        assert len(paths_of_degree(graph, "v", n)) == _walk_classes(graph, "v", n)

    @settings(max_examples=25, deadline=None)
    @given(st.integers(0, 100_000), st.integers(2, 3), st.integers(1, 6))
    def test_canonical_forms_count_square_classes(self, seed, k, nv):
        graph = random_kgraph(k, nv, 0.4, seed)
        assume(len(graph.edges) <= 12)
        for v in graph.vertices:
            for n in degrees_upto((2,) * k if k == 2 else (1,) * k):
                assert len(paths_of_degree(graph, v, n)) == _walk_classes(graph, v, n)
