"""Exact arithmetic in the Kumjian–Pask algebra KP_Q(Λ).

Elements are finite sums Σ c·s_α s_{β*} with s(α) = s(β) and rational c.
Products use the expansion s_{β*}s_μ = Σ s_γ s_{δ*} over βγ = μδ in
Λ^{≤ d(β)∨d(μ)}; zero tests expand every term to a common level.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence, Union

from kplat.kgraph import (
    Degree,
    DegreeZ,
    KGraph,
    KGraphError,
    deg_add,
    deg_join,
    deg_leq,
    deg_sub,
    zero,
)
from kplat.lattice import NotSH, VertexSet, sh_closure
from kplat.paths import (
    Path,
    PathError,
    compose,
    path_from_edges,
    paths_leq,
    paths_upto,
    segment,
    vertex_path,
)
from kplat.rep_oracle import build_rep_oracle

logger = logging.getLogger(__name__)

Scalar = Union[int, Fraction]
Pair = tuple[Path, Path]


class KPError(Exception):
    """Base class for algebra engine failures."""


class GraphMismatch(KPError):
    def __init__(self) -> None:
        super().__init__("elements belong to different graphs")


class UnknownVertex(KPError):
    def __init__(self, vertex: str):
        self.vertex = vertex
        super().__init__(f"unknown vertex {vertex!r}")


class UnknownPath(KPError):
    def __init__(self, path: str, detail: str):
        self.path = path
        super().__init__(f"bad path {path!r}: {detail}")


class LevelTooSmall(KPError):
    def __init__(self, level: Degree, needed: Degree):
        self.level = level
        self.needed = needed
        super().__init__(f"cannot expand to {level}: a term already has degree {needed}")


def _pair_key(pair: Pair) -> tuple:
    return (pair[0].key, pair[1].key)


def _format_coefficient(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _format_monomial(alpha: Path, beta: Path) -> str:
    if alpha.is_vertex and beta.is_vertex:
        return f"p({alpha.range})"
    if beta.is_vertex:
        return f"s({alpha})"
    if alpha.is_vertex:
        return f"sstar({beta})"
    return f"s({alpha})*sstar({beta})"


class KPElement:
    """An immutable element Σ c·s_α s_{β*} of KP_Q(Λ).

    ``==`` compares stored terms; use :func:`equals` for equality in the
    algebra.
    """

    def __init__(self, graph: KGraph, terms: Mapping[Pair, Scalar] | None = None):
        clean: dict[Pair, Fraction] = {}
        for pair, c in (terms or {}).items():
            c = Fraction(c)
            if c:
                clean[pair] = c
        self.graph = graph
        self.terms: Mapping[Pair, Fraction] = MappingProxyType(
            dict(sorted(clean.items(), key=lambda kv: _pair_key(kv[0])))
        )

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, KPElement):
            return NotImplemented
        return self.graph is other.graph and dict(self.terms) == dict(other.terms)

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def __repr__(self) -> str:
        return f"KPElement({self})"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for i, ((alpha, beta), c) in enumerate(self.terms.items()):
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            body = _format_monomial(alpha, beta)
            if mag != 1:
                body = f"{_format_coefficient(mag)}*{body}"
            if i == 0:
                parts.append(body if sign == "+" else f"-{body}")
            else:
                parts.append(f" {sign} {body}")
        return "".join(parts)

    def _check(self, other: "KPElement") -> None:
        if self.graph is not other.graph:
            raise GraphMismatch()

    def __add__(self, other: "KPElement") -> "KPElement":
        self._check(other)
        out = dict(self.terms)
        for pair, c in other.terms.items():
            out[pair] = out.get(pair, 0) + c
        return KPElement(self.graph, out)

    def __neg__(self) -> "KPElement":
        return KPElement(self.graph, {p: -c for p, c in self.terms.items()})

    def __sub__(self, other: "KPElement") -> "KPElement":
        return self + (-other)

    def __mul__(self, other: "KPElement | Scalar") -> "KPElement":
        if isinstance(other, KPElement):
            return multiply(self, other)
        if isinstance(other, (int, Fraction)):
            return KPElement(self.graph, {p: c * other for p, c in self.terms.items()})
        return NotImplemented

    def __rmul__(self, other: Scalar) -> "KPElement":
        if isinstance(other, (int, Fraction)):
            return self * other
        return NotImplemented

    @property
    def level(self) -> Degree:
        """Componentwise max of d(α) ∨ d(β) over the terms."""
        out = zero(self.graph.k)
        for alpha, beta in self.terms:
            out = deg_join(out, deg_join(alpha.degree, beta.degree))
        return out


# ── generators ──────────────────────────────────────────────────────


def as_path(graph: KGraph, lam: Path | str | Sequence[str]) -> Path:
    """Accept a Path, a vertex id, an edge id, ``"e.f"`` or a list of edge ids."""
    if isinstance(lam, Path):
        if lam.graph is not graph:
            raise GraphMismatch()
        return lam
    if isinstance(lam, str):
        if graph.has_vertex(lam):
            return vertex_path(graph, lam)
        lam = lam.split(".")
    try:
        return path_from_edges(graph, list(lam))
    except (KGraphError, PathError) as e:
        raise UnknownPath(".".join(lam), str(e)) from None


def zero_element(graph: KGraph) -> KPElement:
    return KPElement(graph)


def gen_p(graph: KGraph, v: str) -> KPElement:
    if not graph.has_vertex(v):
        raise UnknownVertex(v)
    idv = vertex_path(graph, v)
    return KPElement(graph, {(idv, idv): 1})


def gen_s(graph: KGraph, lam: Path | str | Sequence[str]) -> KPElement:
    lam = as_path(graph, lam)
    return KPElement(graph, {(lam, vertex_path(graph, lam.source)): 1})


def gen_sstar(graph: KGraph, lam: Path | str | Sequence[str]) -> KPElement:
    lam = as_path(graph, lam)
    return KPElement(graph, {(vertex_path(graph, lam.source), lam): 1})


# ── products ────────────────────────────────────────────────────────


@lru_cache(maxsize=16384)
def _leq(graph: KGraph, v: str, n: Degree) -> tuple[Path, ...]:
    return tuple(paths_leq(graph, v, n))


@lru_cache(maxsize=65536)
def ghost_times_path(graph: KGraph, beta: Path, mu: Path) -> tuple[Pair, ...]:
    """s_{β*}s_μ as the pairs (γ, δ) with βγ = μδ ∈ Λ^{≤ d(β)∨d(μ)}."""
    if beta.range != mu.range:
        return ()
    n = deg_join(beta.degree, mu.degree)
    k = graph.k
    out = []
    for lam in _leq(graph, beta.range, n):
        if not (deg_leq(beta.degree, lam.degree) and deg_leq(mu.degree, lam.degree)):
            continue
        if segment(lam, zero(k), beta.degree) != beta or segment(lam, zero(k), mu.degree) != mu:
            continue
        out.append(
            (segment(lam, beta.degree, lam.degree), segment(lam, mu.degree, lam.degree))
        )
    return tuple(out)


def multiply(a: KPElement, b: KPElement) -> KPElement:
    a._check(b)
    out: dict[Pair, Fraction] = {}
    for (alpha, beta), c in a.terms.items():
        for (mu, nu), d in b.terms.items():
            for gamma, delta in ghost_times_path(a.graph, beta, mu):
                key = (compose(alpha, gamma), compose(nu, delta))
                out[key] = out.get(key, 0) + c * d
    return KPElement(a.graph, out)


def star(a: KPElement) -> KPElement:
    return KPElement(a.graph, {(beta, alpha): c for (alpha, beta), c in a.terms.items()})


def term_degree(pair: Pair) -> DegreeZ:
    return deg_sub(pair[0].degree, pair[1].degree)


def graded_parts(a: KPElement) -> dict[DegreeZ, KPElement]:
    """Split a by d(α) − d(β)."""
    buckets: dict[DegreeZ, dict[Pair, Fraction]] = {}
    for pair, c in a.terms.items():
        buckets.setdefault(term_degree(pair), {})[pair] = c
    return {deg: KPElement(a.graph, terms) for deg, terms in sorted(buckets.items())}


# ── normal forms and zero tests ─────────────────────────────────────


def expand_to_level(a: KPElement, n: Degree) -> KPElement:
    """Rewrite each s_α s_{β*} as Σ s_{αγ} s_{(βγ)*} over γ ∈ s(α)Λ^{≤ n − d(α)∨d(β)}."""
    n = tuple(n)
    out: dict[Pair, Fraction] = {}
    for (alpha, beta), c in a.terms.items():
        m = deg_join(alpha.degree, beta.degree)
        if not deg_leq(m, n):
            raise LevelTooSmall(n, m)
        for gamma in _leq(a.graph, alpha.source, deg_sub(n, m)):
            key = (compose(alpha, gamma), compose(beta, gamma))
            out[key] = out.get(key, 0) + c
    return KPElement(a.graph, out)


def normal_form(a: KPElement, level: Degree | None = None) -> KPElement:
    return expand_to_level(a, a.level if level is None else level)


@dataclass(frozen=True)
class ZeroTest:
    result: bool
    method: str  # "oracle" or "engine-normal-form"


def zero_test(a: KPElement) -> ZeroTest:
    if not a.terms:
        return ZeroTest(True, "engine-normal-form")
    if a.graph.is_acyclic():
        return ZeroTest(build_rep_oracle(a.graph).is_zero(a), "oracle")
    return ZeroTest(not normal_form(a).terms, "engine-normal-form")


def is_zero(a: KPElement) -> bool:
    return zero_test(a).result


def equals(a: KPElement, b: KPElement) -> bool:
    return is_zero(a - b)


# ── ideals ──────────────────────────────────────────────────────────


def ideal_membership(a: KPElement, h: VertexSet) -> bool:
    """Whether a ∈ I(H), by expanding until every source has entered H or settled outside."""
    if not h.is_sh:
        raise NotSH(h.members)
    nv = len(a.graph.vertices)
    level = deg_add(a.level, (nv,) * a.graph.k)
    expanded = expand_to_level(a, level)
    return all(alpha.source in h.members for alpha, _ in expanded.terms)


def default_ideal_cap(graph: KGraph) -> int:
    """2·|Λ^0| per color."""
    return 2 * len(graph.vertices)


def _projection_vertex(x: KPElement) -> str | None:
    """v when x is a nonzero multiple of p_v, else None."""
    if not x.terms:
        return None
    ends = {alpha.range for alpha, _ in x.terms} | {beta.range for _, beta in x.terms}
    if len(ends) != 1:
        return None
    (v,) = ends
    level = x.level
    mine = normal_form(x, level)
    ref = normal_form(gen_p(x.graph, v), level)
    if not mine.terms or set(mine.terms) != set(ref.terms):
        return None
    ratios = {mine.terms[p] / ref.terms[p] for p in ref.terms}
    return v if len(ratios) == 1 else None


def vertex_set_of_ideal(
    graph: KGraph, generators: Iterable[KPElement], cap: int | None = None
) -> VertexSet:
    """H(J) for J generated by ``generators``, from products s_{λ*}·a·s_ρ with d(λ), d(ρ) ≤ cap.

    Exact for vertex-projection generators; otherwise a lower bound.
    """
    cap = default_ideal_cap(graph) if cap is None else cap
    box = (cap,) * graph.k
    found: set[str] = set()
    for a in generators:
        if a.graph is not graph:
            raise GraphMismatch()
        direct = _projection_vertex(a)
        if direct is not None:
            found.add(direct)
            continue
        lefts = [lam for w in sorted({al.range for al, _ in a.terms}) for lam in paths_upto(graph, w, box)]
        rights = [rho for w in sorted({be.range for _, be in a.terms}) for rho in paths_upto(graph, w, box)]
        for lam in lefts:
            left = gen_sstar(graph, lam) * a
            if not left:
                continue
            for rho in rights:
                v = _projection_vertex(left * gen_s(graph, rho))
                if v is not None:
                    found.add(v)
    logger.debug("ideal generators reach projections at %s", sorted(found))
    return sh_closure(graph, found)


def lift(a: KPElement, graph: KGraph) -> KPElement:
    """Carry an element of KP(Λ∖H) (or of any subgraph) into KP(Λ) along ids."""

    def carry(p: Path) -> Path:
        return vertex_path(graph, p.range) if p.is_vertex else path_from_edges(graph, list(p.edges))

    return KPElement(graph, {(carry(al), carry(be)): c for (al, be), c in a.terms.items()})
