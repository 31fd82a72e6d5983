"""Tests for lattice.py."""

import sys
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from kplat.generator import random_kgraph
from kplat.kgraph import is_isomorphic
from kplat.kgraph_format import load_kgraph
from kplat.lattice import (
    ForeignSet,
    NotHereditary,
    NotSH,
    TooLarge,
    VertexSet,
    bar_closure,
    brute_force_sh_sets,
    classify_regular,
    double_perp,
    enumerate_sh_lattice,
    format_set,
    is_regular,
    perp,
    quotient_graph,
    restriction_graph,
    sh_closure,
    tree_T,
    vertex_set,
)

FIXTURES = Path(__file__).parent / "fixtures"


def _members(sets):
    return [sorted(h.members) for h in sets]


class TestVertexSets:
    def test_format(self):
        assert format_set(["b", "a"]) == "{a,b}"
        assert format_set([]) == "{}"

    def test_g1_b_is_sh(self, g1):
        h = vertex_set(g1, ["b"])
        assert h.is_hereditary
        assert h.is_saturated
        assert str(h) == "{b}"

    def test_g1_a_is_not_hereditary(self, g1):
        assert not vertex_set(g1, ["a"]).is_hereditary

    def test_chain_sink_is_not_saturated(self, chain):
        h = vertex_set(chain, ["c"])
        assert h.is_hereditary
        assert not h.is_saturated

    def test_unknown_vertex(self, g1):
        with pytest.raises(Exception):
            vertex_set(g1, ["zz"])


class TestClosures:
    def test_tree(self, g1):
        assert tree_T(g1, "a") == {"a", "b"}
        assert tree_T(g1, "b") == {"b"}

    def test_bar(self, g1, g5):
        assert bar_closure(g1, vertex_set(g1, ["b"])) == {"a", "b"}
        assert bar_closure(g5, ["v"]) == {"v"}

    def test_sh_closure(self, g1, chain):
        assert sh_closure(g1, ["b"]).members == {"b"}
        assert sh_closure(g1, ["a"]).members == {"a", "b"}
        assert sh_closure(chain, ["c"]).members == {"a", "b", "c"}

    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 100_000), st.integers(1, 2), st.integers(1, 6), st.data())
    def test_sh_closure_is_a_closure_operator(self, seed, k, n, data):
        graph = random_kgraph(k, n, 0.4, seed)
        small = frozenset(data.draw(st.sets(st.sampled_from(graph.vertices))))
        large = small | frozenset(data.draw(st.sets(st.sampled_from(graph.vertices))))
        once = sh_closure(graph, small)
        assert small <= once.members
        assert once.is_sh
        assert sh_closure(graph, once.members).members == once.members
        assert once.members <= sh_closure(graph, large).members


class TestPerp:
    def test_g1(self, g1):
        h = vertex_set(g1, ["b"])
        assert perp(g1, h).members == frozenset()
        assert double_perp(g1, h).members == {"a", "b"}
        assert not is_regular(g1, h)

    def test_g5(self, g5):
        h = vertex_set(g5, ["v"])
        assert perp(g5, h).members == {"w"}
        assert double_perp(g5, h).members == {"v"}
        assert is_regular(g5, h)

    def test_needs_sh(self, g1):
        with pytest.raises(NotSH):
            perp(g1, vertex_set(g1, ["a"]))
        with pytest.raises(NotSH):
            double_perp(g1, vertex_set(g1, ["a"]))

    def test_set_from_another_graph(self, g1, g2):
        h = vertex_set(g2, ["v"])
        with pytest.raises(ForeignSet):
            perp(g1, h)
        with pytest.raises(ForeignSet):
            double_perp(g1, h)
        with pytest.raises(ForeignSet):
            quotient_graph(g1, h)


class TestLattice:
    def test_g1(self, g1):
        lattice = enumerate_sh_lattice(g1)
        assert _members(lattice.elements) == [[], ["b"], ["a", "b"]]
        assert lattice.hasse == ((0, 1), (1, 2))
        assert lattice.meet[1][2] == 1
        assert lattice.join[0][1] == 1
        assert lattice.index_of(["b"]) == 1

    def test_chain_has_only_trivial_sets(self, chain):
        assert _members(enumerate_sh_lattice(chain).elements) == [[], ["a", "b", "c"]]

    def test_g5(self, g5):
        lattice = enumerate_sh_lattice(g5)
        assert _members(lattice.elements) == [[], ["v"], ["w"], ["v", "w"]]
        assert len(lattice.hasse) == 4
        assert lattice.join[1][2] == 3
        assert lattice.meet[1][2] == 0

    def test_index_of_unknown(self, g1):
        with pytest.raises(NotSH):
            enumerate_sh_lattice(g1).index_of(["a"])

    def test_cap(self, g1):
        with pytest.raises(TooLarge):
            enumerate_sh_lattice(g1, cap=1)

    def test_classify(self, g1):
        lattice = enumerate_sh_lattice(g1)
        assert [(str(h), ok) for h, ok in classify_regular(lattice)] == [
            ("{}", True),
            ("{b}", False),
            ("{a,b}", True),
        ]

    @settings(max_examples=25, deadline=None)
    @given(st.integers(0, 10_000), st.integers(1, 2), st.integers(1, 6))
    def test_enumeration_matches_brute_force(self, seed, k, n):
        graph = random_kgraph(k, n, 0.35, seed)
        lattice = enumerate_sh_lattice(graph)
        assert _members(lattice.elements) == _members(brute_force_sh_sets(graph))
        for h in lattice.elements:
            assert perp(graph, h).is_sh
            assert h.members <= double_perp(graph, h).members


class TestQuotients:
    def test_g1(self, g1):
        q = quotient_graph(g1, vertex_set(g1, ["b"]))
        assert q.vertices == ("a",)
        assert list(q.edges) == ["g"]

    def test_g5(self, g5, g2):
        q = quotient_graph(g5, vertex_set(g5, ["v"]))
        assert q.vertices == ("w",)
        assert is_isomorphic(q, g2)

    def test_everything(self, g1):
        q = quotient_graph(g1, vertex_set(g1, ["a", "b"]))
        assert q.vertices == ()
        assert not q.edges

    def test_keeps_squares(self):
        torus2 = load_kgraph(FIXTURES / "torus.kg")
        q = quotient_graph(torus2, VertexSet(torus2, frozenset()))
        assert q.squares == torus2.squares

    def test_needs_sh(self, g1):
        with pytest.raises(NotSH):
            quotient_graph(g1, vertex_set(g1, ["a"]))

    def test_restriction(self, g1):
        r = restriction_graph(g1, vertex_set(g1, ["b"]))
        assert r.vertices == ("b",)
        assert list(r.edges) == ["f"]

    def test_restriction_needs_hereditary(self, g1):
        with pytest.raises(NotHereditary):
            restriction_graph(g1, ["a"])
        loose = restriction_graph(g1, ["a"], require_hereditary=False)
        assert list(loose.edges) == ["g"]
