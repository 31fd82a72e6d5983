"""Parse and evaluate algebra expressions such as ``sstar(g) * s(g) - p(a)``.

    expr  := term (("+" | "-") term)*
    term  := unary (("*" | "·") unary)*
    unary := "-" unary | atom
    atom  := INT ["/" INT] | "p(" ID ")" | "s(" path ")" | "sstar(" path ")" | "(" expr ")"
    path  := ID ("." ID)*
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from kplat.kgraph import KGraph
from kplat.kp_engine import KPElement, gen_p, gen_s, gen_sstar
from kplat.paths import NotComposable, Path, path_from_edges, vertex_path


class KPExprError(Exception):
    """Base class for expression errors."""


class ExprSyntaxError(KPExprError):
    def __init__(self, column: int, message: str):
        self.column = column
        super().__init__(f"column {column}: {message}")


class UnknownEdge(KPExprError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"unknown edge or vertex {name!r}")


class ExprNotComposable(KPExprError):
    def __init__(self, literal: str):
        self.literal = literal
        super().__init__(f"path {literal!r} is not composable")


# ── syntax tree ─────────────────────────────────────────────────────


@dataclass(frozen=True)
class Num:
    value: Fraction


@dataclass(frozen=True)
class Gen:
    kind: str  # "p", "s" or "sstar"
    path: tuple[str, ...]


@dataclass(frozen=True)
class Neg:
    operand: "KPExpr"


@dataclass(frozen=True)
class BinOp:
    op: str  # "+", "-" or "*"
    left: "KPExpr"
    right: "KPExpr"


KPExpr = Union[Num, Gen, Neg, BinOp]

_TOKEN = re.compile(
    r"\s*(?:(?P<int>\d+)|(?P<id>[A-Za-z_][A-Za-z0-9_@|/:']*)|(?P<op>[-+*·/().]))"
)


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    column: int


def _tokenize(text: str) -> list[_Tok]:
    out = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            col = pos + 1 + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise ExprSyntaxError(col, f"unexpected character {text[col - 1]!r}")
        kind = m.lastgroup
        out.append(_Tok(kind, m.group(kind), m.start(kind) + 1))
        pos = m.end()
    out.append(_Tok("end", "", len(text) + 1))
    return out


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    @property
    def peek(self) -> _Tok:
        return self.toks[self.i]

    def take(self, text: str | None = None, kind: str | None = None) -> _Tok:
        tok = self.peek
        if (text is not None and tok.text != text) or (kind is not None and tok.kind != kind):
            wanted = repr(text) if text is not None else kind
            found = repr(tok.text) if tok.kind != "end" else "end of input"
            raise ExprSyntaxError(tok.column, f"expected {wanted}, found {found}")
        self.i += 1
        return tok

    def parse(self) -> KPExpr:
        node = self.expr()
        self.take(kind="end")
        return node

    def expr(self) -> KPExpr:
        node = self.term()
        while self.peek.text in ("+", "-"):
            op = self.take().text
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> KPExpr:
        node = self.unary()
        while self.peek.text in ("*", "·"):
            self.take()
            node = BinOp("*", node, self.unary())
        return node

    def unary(self) -> KPExpr:
        if self.peek.text == "-":
            self.take()
            return Neg(self.unary())
        return self.atom()

    def atom(self) -> KPExpr:
        tok = self.peek
        if tok.kind == "int":
            self.take()
            value = Fraction(int(tok.text))
            if self.peek.text == "/":
                self.take()
                den = self.take(kind="int")
                if int(den.text) == 0:
                    raise ExprSyntaxError(den.column, "division by zero")
                value /= int(den.text)
            return Num(value)
        if tok.text == "(":
            self.take()
            node = self.expr()
            self.take(")")
            return node
        if tok.kind == "id" and tok.text in ("p", "s", "sstar"):
            self.take()
            self.take("(")
            path = [self.take(kind="id").text]
            if tok.text != "p":
                while self.peek.text == ".":
                    self.take()
                    path.append(self.take(kind="id").text)
            self.take(")")
            return Gen(tok.text, tuple(path))
        found = repr(tok.text) if tok.kind != "end" else "end of input"
        raise ExprSyntaxError(tok.column, f"expected a number, p(...), s(...), sstar(...) or '(', found {found}")


def parse_expr(text: str) -> KPExpr:
    return _Parser(text).parse()


# ── evaluation ──────────────────────────────────────────────────────


def _unit(graph: KGraph) -> KPElement:
    out = KPElement(graph)
    for v in graph.vertices:
        out = out + gen_p(graph, v)
    return out


def _resolve(graph: KGraph, ids: tuple[str, ...]) -> Path:
    if len(ids) == 1 and graph.has_vertex(ids[0]):
        return vertex_path(graph, ids[0])
    for name in ids:
        if name not in graph.edges:
            raise UnknownEdge(name)
    try:
        return path_from_edges(graph, list(ids))
    except NotComposable:
        raise ExprNotComposable(".".join(ids)) from None


def _as_element(graph: KGraph, value: Fraction | KPElement) -> KPElement:
    return _unit(graph) * value if isinstance(value, Fraction) else value


def evaluate(node: KPExpr, graph: KGraph) -> Fraction | KPElement:
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Gen):
        if node.kind == "p":
            if not graph.has_vertex(node.path[0]):
                raise UnknownEdge(node.path[0])
            return gen_p(graph, node.path[0])
        path = _resolve(graph, node.path)
        return gen_s(graph, path) if node.kind == "s" else gen_sstar(graph, path)
    if isinstance(node, Neg):
        value = evaluate(node.operand, graph)
        return -value
    left, right = evaluate(node.left, graph), evaluate(node.right, graph)
    if node.op == "*":
        if isinstance(left, Fraction) and isinstance(right, Fraction):
            return left * right
        if isinstance(left, Fraction):
            return right * left
        return left * right
    if isinstance(left, Fraction) and isinstance(right, Fraction):
        return left + right if node.op == "+" else left - right
    left, right = _as_element(graph, left), _as_element(graph, right)
    return left + right if node.op == "+" else left - right


def parse_kp_expr(text: str, graph: KGraph) -> KPElement:
    """Parse ``text`` and evaluate it in KP_Q(graph); a bare number means a multiple of 1."""
    return _as_element(graph, evaluate(parse_expr(text), graph))
