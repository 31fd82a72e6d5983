"""Tests for theorem_lab.py."""

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from kplat.condition_b import PreconditionFailed
from kplat.kgraph import Edge, HasCycle, Skeleton, build_kgraph, cartesian_product, omega_graph
from kplat.kgraph_format import parse_kgraph, serialize_kgraph
from kplat.lattice import NotSH, enumerate_sh_lattice, vertex_set
from kplat.reports import TheoremReport
from kplat.theorem_lab import (
    GRADING_PAIRS,
    SUITE_THEOREMS,
    ZERO_TEST_ELEMENTS,
    _check_unknown_share,
    _reproducer,
    build_corpus,
    run_suite,
    verify_grading,
    verify_kp_axioms,
    verify_lattice_iso,
    verify_quotient_iso,
    verify_regular_ideal_sets,
    verify_regular_ideals_graded,
    verify_regular_quotients,
    verify_thm3,
    verify_thm5,
    verify_thm31_33,
    verify_zero_tests,
)


@pytest.fixture
def omega111():
    return omega_graph(3, (1, 1, 1))


@pytest.fixture
def torus3(torus):
    loop = build_kgraph(Skeleton(1, ("x",), (Edge("c", "x", "x", 1),)))
    return cartesian_product(torus, loop)


class TestLatticeIso:
    def test_fixtures(self, g1, g5, chain):
        for graph in (g1, g5, chain):
            report = verify_lattice_iso(graph)
            assert report.status == "pass", report.to_text()
            assert report.instances == len(enumerate_sh_lattice(graph).elements)


class TestPerp:
    def test_g1(self, g1):
        report = verify_thm3(g1)
        assert report.theorem == "3"
        assert report.instances == 3
        assert report.status == "pass", report.to_text()

    def test_oracle_backed(self, chain, omega11):
        assert verify_thm3(chain).status == "pass"
        assert verify_thm3(omega11).status == "pass"

    def test_higher_rank(self, torus):
        assert verify_thm3(torus).status == "pass"

    def test_rank_three(self, omega111, torus3):
        assert verify_thm3(omega111).status == "pass"
        assert verify_thm3(torus3).status == "pass"
        assert verify_lattice_iso(omega111).status == "pass"
        assert verify_lattice_iso(torus3).status == "pass"


class TestConditionB:
    def test_regular_quotients_of_g5(self, g5):
        report = verify_thm5(g5)
        assert report.instances == 4
        assert report.status == "pass", report.to_text()

    def test_precondition(self, g1):
        with pytest.raises(PreconditionFailed):
            verify_thm5(g1)


class TestQuotientIso:
    def test_chain(self, chain):
        for h in enumerate_sh_lattice(chain).elements:
            report = verify_quotient_iso(chain, h)
            assert report.status == "pass", report.to_text()

    def test_omega(self, omega11):
        for h in enumerate_sh_lattice(omega11).elements:
            assert verify_quotient_iso(omega11, h).status == "pass"

    def test_rank_three(self, omega111):
        for h in enumerate_sh_lattice(omega111).elements:
            assert verify_quotient_iso(omega111, h).status == "pass"

    def test_proper_quotient(self):
        # b is a sink fed only by a, so {b} is saturated hereditary and a survives
        graph = parse_kgraph("kgraph 1 k=1\nvertex a\nvertex b\nvertex c\nedge e a b 1\nedge f a c 1\n")
        report = verify_quotient_iso(graph, vertex_set(graph, ["b"]))
        assert report.status == "pass", report.to_text()
        assert report.instances > 1

    def test_needs_acyclic(self, g1):
        with pytest.raises(HasCycle):
            verify_quotient_iso(g1, vertex_set(g1, ["b"]))

    def test_needs_sh(self, chain):
        with pytest.raises(NotSH):
            verify_quotient_iso(chain, vertex_set(chain, ["c"]))


class TestLargestGradedIdeal:
    def test_always_partial(self, chain):
        report = verify_thm31_33(chain)
        assert report.status == "partial"
        assert not report.failures
        assert report.instances > 0

    def test_cyclic_graphs_use_the_engine_only(self, g1):
        assert not verify_thm31_33(g1).failures


class TestRegularIdeals:
    @pytest.mark.parametrize(
        "harness", [verify_regular_ideal_sets, verify_regular_ideals_graded, verify_regular_quotients]
    )
    def test_acyclic_fixtures(self, harness, chain, omega11):
        for graph in (chain, omega11):
            report = harness(graph)
            assert not report.failures, report.to_text()
            assert report.instances > 0
            assert report.status == "partial"

    def test_two_blocks(self):
        graph = parse_kgraph("kgraph 1 k=1\nvertex a\nvertex b\nvertex c\nedge e a b 1\nedge f a c 1\n")
        report = verify_regular_quotients(graph)
        assert not report.failures, report.to_text()

    @pytest.mark.parametrize(
        "harness", [verify_regular_ideal_sets, verify_regular_ideals_graded, verify_regular_quotients]
    )
    def test_needs_acyclic(self, harness, g1):
        with pytest.raises(HasCycle):
            harness(g1)


class TestAlgebra:
    def test_kp_axioms(self, g1, g2, chain, omega11, torus):
        for graph in (g1, g2, chain, omega11, torus):
            report = verify_kp_axioms(graph)
            assert report.status == "pass", report.to_text()

    def test_kp_axioms_rank_three(self, omega111, torus3):
        assert verify_kp_axioms(omega111).status == "pass"
        assert verify_kp_axioms(torus3, bound=(1, 1, 1)).status == "pass"

    def test_kp_default_bound_reaches_degree_two(self, g2):
        # degree-2 paths join the KP2, KP4 and expansion checks
        assert verify_kp_axioms(g2).instances > verify_kp_axioms(g2, bound=(1,)).instances

    def test_grading(self, g2, omega11):
        assert verify_grading(g2, samples=10).status == "pass"
        assert verify_grading(omega11, samples=10, seed=3).status == "pass"

    def test_zero_tests(self, chain, omega11):
        assert verify_zero_tests(chain, samples=10).status == "pass"
        assert verify_zero_tests(omega11, samples=10).status == "pass"

    def test_zero_tests_need_acyclic(self, g2):
        with pytest.raises(HasCycle):
            verify_zero_tests(g2)

    def test_default_sample_sizes(self, g2, chain):
        assert verify_grading(g2).instances == GRADING_PAIRS == 500
        assert verify_zero_tests(chain).instances == ZERO_TEST_ELEMENTS == 1000


class TestReproducer:
    def test_inputs_follow_the_graph(self, g1):
        text = _reproducer(g1, set="b", depth="8")
        assert text.startswith(serialize_kgraph(g1))
        assert text.endswith("set b\ndepth 8\n")


class TestUnknownShare:
    def _merged(self, unknown):
        merged = TheoremReport(theorem="5", graph="corpus")
        _check_unknown_share(merged, [TheoremReport(theorem="5", graph="t", instances=10, unknown=unknown)])
        return merged

    def test_over_a_fifth_fails(self):
        assert self._merged(3).status == "fail"

    def test_a_fifth_is_allowed(self):
        assert not self._merged(2).failures

    def test_no_higher_rank_instances(self):
        merged = TheoremReport(theorem="5", graph="corpus")
        _check_unknown_share(merged, [])
        assert not merged.failures


class TestCorpus:
    def test_shape_and_determinism(self):
        shape = {1: (4, 3), 2: (2, 3)}
        corpus = build_corpus(shape, seed=5)
        assert [g.k for g in corpus] == [1, 1, 1, 1, 2, 2]
        again = build_corpus(shape, seed=5)
        assert [serialize_kgraph(g) for g in corpus] == [serialize_kgraph(g) for g in again]

    @pytest.mark.slow
    def test_small_suite(self):
        corpus = build_corpus({1: (6, 4), 2: (2, 4)}, seed=1)
        reports = run_suite(corpus, depth=8)
        assert tuple(r.theorem for r in reports) == SUITE_THEOREMS
        for report in reports:
            assert report.status != "fail", report.to_text()

    @pytest.mark.slow
    def test_worker_count_does_not_change_results(self):
        corpus = build_corpus({1: (4, 3), 2: (1, 3)}, seed=2)
        serial = run_suite(corpus, depth=6, workers=1)
        pooled = run_suite(corpus, depth=6, workers=2)
        assert [r.to_text() for r in serial] == [r.to_text() for r in pooled]

    @pytest.mark.slow
    def test_default_corpus(self):
        corpus = build_corpus()
        reports = {r.theorem: r for r in run_suite(corpus)}
        for report in reports.values():
            assert report.status != "fail", report.to_text()
        assert reports["zero"].instances >= ZERO_TEST_ELEMENTS
        assert reports["grading"].instances == GRADING_PAIRS * len(corpus)
