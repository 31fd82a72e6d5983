"""Tests for kgraph_format.py."""

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from kplat.kgraph import MissingSquare, is_isomorphic, omega_graph
from kplat.kgraph_format import (
    ParseError,
    ValidationError,
    canonical,
    load_kgraph,
    parse_document,
    parse_kgraph,
    save_kgraph,
    serialize_kgraph,
)

G1_CANONICAL = """kgraph 1 k=1
vertex a
vertex b
edge e a b 1
edge f b b 1
edge g a a 1
"""


class TestParse:
    def test_g1(self, fixtures_dir):
        graph = load_kgraph(fixtures_dir / "G1.kg")
        assert graph.vertices == ("a", "b")
        assert graph.edges["e"].range == "a"
        assert graph.edges["e"].source == "b"

    def test_document(self):
        doc = parse_document("kgraph 1 k=2\nvertex v\nedge a v v 1\nedge b v v 2\nsquare a b b a\n")
        assert doc.k == 2
        assert doc.version == 1
        assert len(doc.squares) == 1

    def test_lines_in_any_order(self):
        text = "kgraph 1 k=1\nedge e a b 1\nvertex b\nvertex a\n"
        assert parse_kgraph(text).vertices == ("a", "b")

    def test_comments_and_blank_lines(self):
        text = "# header follows\n\nkgraph 1 k=1   # one color\nvertex v  # the only vertex\n"
        assert parse_kgraph(text).vertices == ("v",)

    def test_unknown_vertex_reports_position(self, fixtures_dir):
        with pytest.raises(ParseError) as exc:
            load_kgraph(fixtures_dir / "broken.kg")
        assert exc.value.line == 4
        assert exc.value.column == 10
        assert "unknown vertex 'b'" in str(exc.value)

    @pytest.mark.parametrize(
        "text, line",
        [
            ("vertex a\n", 1),
            ("kgraph 2 k=1\n", 1),
            ("kgraph 1 k=0\n", 1),
            ("kgraph 1 k=1\nnode a\n", 2),
            ("kgraph 1 k=1\nvertex a b\n", 2),
            ("kgraph 1 k=1\nvertex a\nvertex a\n", 3),
            ("kgraph 1 k=1\nvertex 9a\n", 2),
            ("kgraph 1 k=1\nvertex a\nedge e a a 2\n", 3),
            ("kgraph 1 k=2\nvertex a\nedge e a a 1\nsquare e x x e\n", 4),
            ("", 1),
        ],
    )
    def test_parse_errors(self, text, line):
        with pytest.raises(ParseError) as exc:
            parse_kgraph(text)
        assert exc.value.line == line

    def test_validation_error_wraps_cause(self):
        text = "kgraph 1 k=2\nvertex v\nedge a v v 1\nedge b v v 2\n"
        with pytest.raises(ValidationError) as exc:
            parse_kgraph(text)
        assert isinstance(exc.value.cause, MissingSquare)

    def test_edge_id_shared_with_vertex(self):
        with pytest.raises(ParseError) as exc:
            parse_kgraph("kgraph 1 k=1\nvertex v\nvertex x\nedge x v v 1\n")
        assert (exc.value.line, exc.value.column) == (4, 6)
        assert "also a vertex" in str(exc.value)


class TestSerialize:
    def test_canonical_text(self, g1):
        assert serialize_kgraph(g1) == G1_CANONICAL

    def test_canonical_is_idempotent(self, fixtures_dir):
        text = (fixtures_dir / "G1.kg").read_text()
        assert canonical(text) == G1_CANONICAL
        assert canonical(canonical(text)) == canonical(text)

    def test_squares_written(self, torus):
        assert serialize_kgraph(torus).splitlines()[-1] == "square a b b a"

    def test_save_and_load(self, tmp_path):
        graph = omega_graph(2, (1, 2))
        target = tmp_path / "omega.kg"
        save_kgraph(graph, target)
        again = load_kgraph(target)
        assert serialize_kgraph(again) == serialize_kgraph(graph)
        assert is_isomorphic(again, graph)
