"""The line-oriented ``.kg`` document format.

    kgraph 1 k=2
    vertex a
    edge e a b 1
    square f g gp fp      # f·g = gp·fp

The header comes first; the other lines may appear in any order.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from pathlib import Path as FilePath

from kplat.config import FORMAT_VERSION
from kplat.kgraph import Edge, KGraph, KGraphError, Skeleton, Square, build_kgraph

logger = logging.getLogger(__name__)

ID_PATTERN = re.compile(r"[A-Za-z_][A-Za-z0-9_@|/:']*\Z")
HEADER_PATTERN = re.compile(r"k=(\d+)\Z")


class FormatError(Exception):
    """Base class for document errors."""


class ParseError(FormatError):
    def __init__(self, line: int, column: int, message: str):
        self.line = line
        self.column = column
        self.message = message
        super().__init__(f"line {line}, column {column}: {message}")


class ValidationError(FormatError):
    """The document parses but does not describe a k-graph."""

    def __init__(self, cause: KGraphError):
        self.cause = cause
        super().__init__(f"invalid k-graph: {cause}")


@dataclass(frozen=True)
class KGraphDocument:
    version: int
    k: int
    vertices: tuple[str, ...]
    edges: tuple[Edge, ...]
    squares: tuple[Square, ...]


@dataclass(frozen=True)
class _Token:
    text: str
    line: int
    column: int


def _tokens(line_no: int, line: str) -> list[_Token]:
    body = line.split("#", 1)[0]
    return [_Token(m.group(), line_no, m.start() + 1) for m in re.finditer(r"\S+", body)]


def _check_id(tok: _Token) -> str:
    if not ID_PATTERN.match(tok.text):
        raise ParseError(tok.line, tok.column, f"bad identifier {tok.text!r}")
    return tok.text


_ARITY = {"vertex": 1, "edge": 4, "square": 4}


def parse_document(text: str) -> KGraphDocument:
    header: list[_Token] | None = None
    vertices: dict[str, _Token] = {}
    edges: dict[str, tuple[_Token, ...]] = {}
    squares: list[tuple[_Token, ...]] = []

    for line_no, line in enumerate(text.splitlines(), start=1):
        toks = _tokens(line_no, line)
        if not toks:
            continue
        if header is None:
            if toks[0].text != "kgraph":
                raise ParseError(line_no, toks[0].column, "expected the 'kgraph <version> k=<k>' header")
            header = toks
            continue
        directive = toks[0]
        if directive.text not in _ARITY:
            raise ParseError(line_no, directive.column, f"unknown directive {directive.text!r}")
        args = toks[1:]
        if len(args) != _ARITY[directive.text]:
            column = args[-1].column if args else directive.column
            raise ParseError(
                line_no, column, f"'{directive.text}' takes {_ARITY[directive.text]} arguments, got {len(args)}"
            )
        if directive.text == "vertex":
            v = _check_id(args[0])
            if v in vertices:
                raise ParseError(line_no, args[0].column, f"duplicate vertex {v!r}")
            vertices[v] = args[0]
        elif directive.text == "edge":
            for tok in args[:3]:
                _check_id(tok)
            if args[0].text in edges:
                raise ParseError(line_no, args[0].column, f"duplicate edge {args[0].text!r}")
            edges[args[0].text] = tuple(args)
        else:
            for tok in args:
                _check_id(tok)
            squares.append(tuple(args))

    if header is None:
        raise ParseError(1, 1, "empty document")
    version, k = _parse_header(header)

    edge_records = []
    for eid, (id_tok, r_tok, s_tok, c_tok) in sorted(edges.items()):
        if eid in vertices:
            raise ParseError(id_tok.line, id_tok.column, f"edge id {eid!r} is also a vertex id")
        for tok in (r_tok, s_tok):
            if tok.text not in vertices:
                raise ParseError(tok.line, tok.column, f"unknown vertex {tok.text!r}")
        if not c_tok.text.isdigit() or not 1 <= int(c_tok.text) <= k:
            raise ParseError(c_tok.line, c_tok.column, f"color must be an integer in 1..{k}")
        edge_records.append(Edge(eid, r_tok.text, s_tok.text, int(c_tok.text)))

    square_records = []
    for toks in squares:
        for tok in toks:
            if tok.text not in edges:
                raise ParseError(tok.line, tok.column, f"unknown edge {tok.text!r}")
        square_records.append(Square(*(t.text for t in toks)))

    return KGraphDocument(version, k, tuple(sorted(vertices)), tuple(edge_records), tuple(square_records))


def _parse_header(toks: list[_Token]) -> tuple[int, int]:
    line = toks[0].line
    if len(toks) != 3:
        raise ParseError(line, toks[0].column, "expected 'kgraph <version> k=<k>'")
    if not toks[1].text.isdigit() or int(toks[1].text) != FORMAT_VERSION:
        raise ParseError(line, toks[1].column, f"unsupported format version {toks[1].text!r}")
    m = HEADER_PATTERN.match(toks[2].text)
    if not m or int(m.group(1)) < 1:
        raise ParseError(line, toks[2].column, "expected k=<positive integer>")
    return int(toks[1].text), int(m.group(1))


def document_to_kgraph(doc: KGraphDocument) -> KGraph:
    try:
        return build_kgraph(Skeleton(doc.k, doc.vertices, doc.edges), doc.squares)
    except KGraphError as e:
        raise ValidationError(e) from e


def parse_kgraph(text: str) -> KGraph:
    return document_to_kgraph(parse_document(text))


def serialize_kgraph(graph: KGraph) -> str:
    lines = [f"kgraph {FORMAT_VERSION} k={graph.k}"]
    lines.extend(f"vertex {v}" for v in graph.vertices)
    lines.extend(f"edge {e.id} {e.range} {e.source} {e.color}" for e in graph.edges.values())
    lines.extend("square " + " ".join(sq.as_tuple()) for sq in graph.squares)
    return "\n".join(lines) + "\n"


def canonical(text: str) -> str:
    return serialize_kgraph(parse_kgraph(text))


def load_kgraph(path: str | FilePath) -> KGraph:
    text = FilePath(path).read_text(encoding="utf-8")
    graph = parse_kgraph(text)
    logger.debug("loaded %s from %s", graph.describe(), path)
    return graph


def save_kgraph(graph: KGraph, path: str | FilePath) -> None:
    FilePath(path).write_text(serialize_kgraph(graph), encoding="utf-8")
