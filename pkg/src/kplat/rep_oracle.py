"""A faithful matrix picture of KP_Q(Λ) for acyclic k-graphs.

The algebra acts on the span of the finite boundary paths: s_λ sends x to
λx when r(x) = s(λ), s_{λ*} is the transpose and p_v projects onto the
paths with range v. All arithmetic is exact, over sympy's QQ.
"""

from __future__ import annotations

import logging
from fractions import Fraction
from functools import lru_cache
from typing import TYPE_CHECKING, Iterable

from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from kplat.kgraph import HasCycle, KGraph
from kplat.paths import Path, all_paths, compose, edge_path, finite_boundary_paths, paths_leq

if TYPE_CHECKING:
    from kplat.kp_engine import KPElement

logger = logging.getLogger(__name__)


class RelationFailed(Exception):
    """An assigned matrix family breaks one of the KP relations."""

    def __init__(self, relation: str, detail: str):
        self.relation = relation
        super().__init__(f"{relation} fails: {detail}")


def _qq(c: Fraction | int) -> object:
    c = Fraction(c)
    return QQ(c.numerator, c.denominator)


class RepOracle:
    """Matrices for p_v, s_λ and s_{λ*} on the boundary-path basis."""

    def __init__(self, graph: KGraph, basis: list[Path]):
        self.graph = graph
        self.basis = basis
        self.index = {(x.range, x.edges): i for i, x in enumerate(basis)}
        self.size = len(basis)
        self._s_cache: dict[tuple[str, tuple[str, ...]], DomainMatrix] = {}

    def __repr__(self) -> str:
        return f"RepOracle({self.graph.describe()}, basis={self.size})"

    # ── generators ──

    def _from_entries(self, entries: dict[tuple[int, int], object]) -> DomainMatrix:
        return DomainMatrix.from_dok(entries, (self.size, self.size), QQ)

    def zero(self) -> DomainMatrix:
        return DomainMatrix.zeros((self.size, self.size), QQ)

    def identity(self) -> DomainMatrix:
        return DomainMatrix.eye(self.size, QQ)

    def p(self, v: str) -> DomainMatrix:
        return self._from_entries({(i, i): QQ(1) for i, x in enumerate(self.basis) if x.range == v})

    def s(self, lam: Path) -> DomainMatrix:
        key = (lam.range, lam.edges)
        if key not in self._s_cache:
            entries = {}
            for j, x in enumerate(self.basis):
                if x.range == lam.source:
                    target = compose(lam, x)
                    entries[(self.index[(target.range, target.edges)], j)] = QQ(1)
            self._s_cache[key] = self._from_entries(entries)
        return self._s_cache[key]

    def sstar(self, lam: Path) -> DomainMatrix:
        return self.s(lam).transpose()

    def pair(self, alpha: Path, beta: Path) -> DomainMatrix:
        """The image of s_α s_{β*}."""
        return self.s(alpha) * self.sstar(beta)

    def image(self, element: "KPElement") -> DomainMatrix:
        out = self.zero()
        for (alpha, beta), c in element.terms.items():
            out = out + self.pair(alpha, beta) * _qq(c)
        return out

    def is_zero(self, element: "KPElement") -> bool:
        return self.image(element).is_zero_matrix

    # ── spans ──

    def span_rank(self, matrices: Iterable[DomainMatrix]) -> int:
        """Dimension of the linear span of ``matrices``."""
        n = self.size
        rows: dict[tuple[int, int], object] = {}
        count = 0
        for m in matrices:
            for (i, j), value in m.to_dok().items():
                if value:
                    rows[(count, i * n + j)] = value
            count += 1
        if not count or not rows:
            return 0
        return DomainMatrix.from_dok(rows, (count, n * n), QQ).rank()

    def pairs(self, within: Iterable[str] | None = None) -> list[tuple[Path, Path]]:
        """All (α, β) with s(α) = s(β), optionally with the shared source in ``within``."""
        allowed = None if within is None else set(within)
        by_source: dict[str, list[Path]] = {}
        for lam in all_paths(self.graph):
            by_source.setdefault(lam.source, []).append(lam)
        out = []
        for v, paths in sorted(by_source.items()):
            if allowed is not None and v not in allowed:
                continue
            out.extend((a, b) for a in paths for b in paths)
        return out

    def dimension(self) -> int:
        return self.span_rank(self.pair(a, b) for a, b in self.pairs())

    def ideal_spanning(self, h: Iterable[str]) -> list[DomainMatrix]:
        """Images spanning I(H) = span{s_α s_{β*} : s(α) = s(β) ∈ H}."""
        return [self.pair(a, b) for a, b in self.pairs(h)]

    def ideal_dimension(self, h: Iterable[str]) -> int:
        return self.span_rank(self.ideal_spanning(h))

    def annihilator_vertices(self, h: Iterable[str]) -> frozenset[str]:
        """{v : p_v·N = N·p_v = 0 for every N in I(H)}."""
        spanning = self.ideal_spanning(h)
        out = set()
        for v in self.graph.vertices:
            pv = self.p(v)
            if all((pv * m).is_zero_matrix and (m * pv).is_zero_matrix for m in spanning):
                out.add(v)
        return frozenset(out)

    def generated_ideal_basis(self, generators: Iterable[DomainMatrix]) -> list[DomainMatrix]:
        """An independent spanning set of the two-sided ideal generated by ``generators``."""
        algebra = [self.pair(a, b) for a, b in self.pairs()]
        basis: list[DomainMatrix] = []
        rank = 0
        for g in generators:
            for left in algebra:
                lg = left * g
                if lg.is_zero_matrix:
                    continue
                for right in algebra:
                    candidate = lg * right
                    if candidate.is_zero_matrix:
                        continue
                    new_rank = self.span_rank(basis + [candidate])
                    if new_rank > rank:
                        basis.append(candidate)
                        rank = new_rank
        return basis

    def contains(self, basis: list[DomainMatrix], m: DomainMatrix) -> bool:
        """Whether m lies in the span of ``basis``."""
        return self.span_rank(basis + [m]) == self.span_rank(basis)

    def independent(self, matrices: Iterable[DomainMatrix]) -> list[DomainMatrix]:
        """A linearly independent subfamily with the same span."""
        basis: list[DomainMatrix] = []
        for m in matrices:
            if not m.is_zero_matrix and self.span_rank(basis + [m]) > len(basis):
                basis.append(m)
        return basis

    def annihilator(self, spanning: list[DomainMatrix]) -> list[DomainMatrix]:
        """A basis of J^⊥ = {X : XN = NX = 0 for all N in J}, J spanned by ``spanning``.

        X runs over the algebra; the conditions are linear in its
        coordinates and the kernel comes from ``DomainMatrix.nullspace``.
        """
        algebra = self.independent(self.pair(a, b) for a, b in self.pairs())
        spanning = [m for m in spanning if not m.is_zero_matrix]
        if not spanning or not algebra:
            return algebra
        n = self.size
        block = n * n
        entries: dict[tuple[int, int], object] = {}
        for col, a in enumerate(algebra):
            offset = 0
            for m in spanning:
                for product in (a * m, m * a):
                    for (i, j), value in product.to_dok().items():
                        if value:
                            entries[(offset + i * n + j, col)] = value
                    offset += block
        system = DomainMatrix.from_dok(entries, (2 * len(spanning) * block, len(algebra)), QQ)
        kernel = system.nullspace()
        combos: dict[int, DomainMatrix] = {}
        for (row, col), c in kernel.to_dok().items():
            if c:
                combos[row] = combos.get(row, self.zero()) + algebra[col] * c
        return [combos[row] for row in sorted(combos)]

    def is_regular_ideal(self, spanning: list[DomainMatrix]) -> bool:
        """J^⊥⊥ = J for the ideal spanned by ``spanning``; J ⊆ J^⊥⊥ always, so dimensions decide."""
        return self.span_rank(self.annihilator(self.annihilator(spanning))) == self.span_rank(spanning)

    # ── relations ──

    def validate(self) -> None:
        """Check KP1–KP4 on vertices and edges as matrix identities."""
        g = self.graph
        total = self.zero()
        for v in g.vertices:
            pv = self.p(v)
            total = total + pv
            for w in g.vertices:
                expected = pv if v == w else self.zero()
                if not (pv * self.p(w) - expected).is_zero_matrix:
                    raise RelationFailed("KP1", f"p_{v} p_{w}")
        if not (total - self.identity()).is_zero_matrix:
            raise RelationFailed("KP1", "vertex projections do not sum to the identity")

        edges = [edge_path(g, e) for e in g.edges]
        for lam in edges:
            s = self.s(lam)
            if not (self.p(lam.range) * s - s).is_zero_matrix or not (s * self.p(lam.source) - s).is_zero_matrix:
                raise RelationFailed("KP2", f"edge {lam}")
            for mu in edges:
                if mu.degree != lam.degree:
                    continue
                expected = self.p(lam.source) if mu == lam else self.zero()
                if not (self.sstar(lam) * self.s(mu) - expected).is_zero_matrix:
                    raise RelationFailed("KP3", f"s_{lam}* s_{mu}")
        for v in g.vertices:
            for i in range(1, g.k + 1):
                n = tuple(int(j == i - 1) for j in range(g.k))
                total = self.zero()
                for lam in paths_leq(g, v, n):
                    total = total + self.pair(lam, lam)
                if not (total - self.p(v)).is_zero_matrix:
                    raise RelationFailed("KP4", f"vertex {v}, color {i}")


@lru_cache(maxsize=64)
def build_rep_oracle(graph: KGraph) -> RepOracle:
    """Build and validate the oracle; the graph must be acyclic."""
    if not graph.is_acyclic():
        raise HasCycle(f"{graph.describe()} has a cycle; no finite faithful representation")
    basis = []
    for v in graph.vertices:
        basis.extend(finite_boundary_paths(graph, v))
    basis.sort(key=lambda x: x.key)
    oracle = RepOracle(graph, basis)
    oracle.validate()
    logger.debug("oracle for %s on %d boundary paths", graph.describe(), oracle.size)
    return oracle
