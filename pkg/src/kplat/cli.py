"""Command-line surface: ``kplat <command> FILE ...``.

Exit codes: 0 success or pass, 1 a property fails or a theorem violation was
found, 2 usage, parse or input error, 3 the only outcome was Unknown.
"""

from __future__ import annotations

import argparse
import logging
import sys
from argparse import Namespace
from pathlib import Path as FilePath
from typing import Callable

from kplat.condition_b import BStatus, ConditionBError, check_graph_b, check_vertex_b
from kplat.config import ConfigError, Settings, load_settings
from kplat.dot_export import export_dot
from kplat.generator import random_kgraph
from kplat.kgraph import KGraph, KGraphError, check_local_convexity
from kplat.kgraph_format import FormatError, load_kgraph, serialize_kgraph
from kplat.kp_engine import (
    KPError,
    graded_parts,
    ideal_membership,
    normal_form,
    vertex_set_of_ideal,
    zero_test,
)
from kplat.kp_expr import KPExprError, parse_kp_expr
from kplat.lattice import (
    LatticeError,
    VertexSet,
    classify_regular,
    double_perp,
    enumerate_sh_lattice,
    is_regular,
    perp,
    quotient_graph,
    vertex_set,
)
from kplat.paths import PathError
from kplat.reports import TheoremReport, format_reports
from kplat.theorem_lab import (
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

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_UNKNOWN = 3

THEOREMS = ("1", "3", "5", "31", "32", "33", "34", "60", "quotient", "kp", "grading", "zero")

# Errors that mean the input was unusable
INPUT_ERRORS = (
    FormatError,
    KGraphError,
    PathError,
    LatticeError,
    KPError,
    KPExprError,
    ConditionBError,
    ConfigError,
    OSError,
    ValueError,
)

Result = tuple[str, int]


def _parse_set(graph: KGraph, text: str) -> VertexSet:
    return vertex_set(graph, [v.strip() for v in text.split(",") if v.strip()])


def _write_or_return(text: str, out: str | None) -> str:
    if out is None:
        return text
    FilePath(out).write_text(text, encoding="utf-8")
    return f"wrote {out}\n"


def _report_code(reports: list[TheoremReport]) -> int:
    if any(r.failures for r in reports):
        return EXIT_FAILED
    if any(r.unknown for r in reports):
        return EXIT_UNKNOWN
    return EXIT_OK


# ── commands ────────────────────────────────────────────────────────


def cmd_validate(args: Namespace, settings: Settings) -> Result:
    graph = load_kgraph(args.file)
    lines = [f"valid k-graph: {graph.describe()}"]
    convexity = check_local_convexity(graph)
    if convexity.ok:
        lines.append("locally convex")
    else:
        lines.append("not locally convex:")
        lines.extend(f"  {w}" for w in convexity.witnesses)
    if args.dot:
        lines.append(_write_or_return(export_dot(graph), args.dot).rstrip("\n"))
    return "\n".join(lines) + "\n", EXIT_OK if convexity.ok else EXIT_FAILED


def cmd_lattice(args: Namespace, settings: Settings) -> Result:
    graph = load_kgraph(args.file)
    lattice = enumerate_sh_lattice(graph, settings.lattice_cap)
    lines = [str(h) for h in lattice.elements]
    if args.dot:
        lines.append(_write_or_return(export_dot(lattice), args.dot).rstrip("\n"))
    return "\n".join(lines) + "\n", EXIT_OK


def cmd_perp(args: Namespace, settings: Settings) -> Result:
    graph = load_kgraph(args.file)
    return f"{perp(graph, _parse_set(graph, args.set))}\n", EXIT_OK


def cmd_doubleperp(args: Namespace, settings: Settings) -> Result:
    graph = load_kgraph(args.file)
    return f"{double_perp(graph, _parse_set(graph, args.set))}\n", EXIT_OK


def cmd_regular(args: Namespace, settings: Settings) -> Result:
    graph = load_kgraph(args.file)
    if args.set is None:
        lattice = enumerate_sh_lattice(graph, settings.lattice_cap)
        lines = [f"{h}: {'regular' if ok else 'not regular'}" for h, ok in classify_regular(lattice)]
        return "\n".join(lines) + "\n", EXIT_OK
    h = _parse_set(graph, args.set)
    if is_regular(graph, h):
        return "regular\n", EXIT_OK
    return f"not regular; double-perp = {double_perp(graph, h)}\n", EXIT_OK


def cmd_quotient(args: Namespace, settings: Settings) -> Result:
    graph = load_kgraph(args.file)
    quotient = quotient_graph(graph, _parse_set(graph, args.set))
    return _write_or_return(serialize_kgraph(quotient), args.out), EXIT_OK


def cmd_condition_b(args: Namespace, settings: Settings) -> Result:
    graph = load_kgraph(args.file)
    depth = settings.condition_b_depth
    if args.vertex is not None:
        verdict = check_vertex_b(graph, args.vertex, depth)
        code = EXIT_UNKNOWN if verdict.status is BStatus.UNKNOWN else EXIT_OK
        return f"{args.vertex}: {verdict}\n", code
    result = check_graph_b(graph, depth)
    code = EXIT_UNKNOWN if result.aggregate is BStatus.UNKNOWN else EXIT_OK
    return result.format_line() + "\n", code


def cmd_kp_eval(args: Namespace, settings: Settings) -> Result:
    graph = load_kgraph(args.file)
    a = parse_kp_expr(args.expr, graph)
    if args.is_zero:
        test = zero_test(a)
        return f"{'true' if test.result else 'false'} ({test.method})\n", EXIT_OK
    if args.graded:
        parts = graded_parts(a)
        if not parts:
            return "0\n", EXIT_OK
        lines = [f"{','.join(str(x) for x in deg)}: {part}" for deg, part in parts.items()]
        return "\n".join(lines) + "\n", EXIT_OK
    if args.in_ideal is not None:
        member = ideal_membership(a, _parse_set(graph, args.in_ideal))
        return f"{'true' if member else 'false'}\n", EXIT_OK
    if args.vertex_set:
        return f"{vertex_set_of_ideal(graph, [a], settings.ideal_degree_cap)}\n", EXIT_OK
    return f"{normal_form(a)}\n", EXIT_OK


def cmd_verify(args: Namespace, settings: Settings) -> Result:
    graph = load_kgraph(args.file)
    cap, depth = settings.lattice_cap, settings.condition_b_depth
    theorem = args.theorem
    if theorem == "1":
        report = verify_lattice_iso(graph, cap)
    elif theorem == "3":
        report = verify_thm3(graph, cap)
    elif theorem == "5":
        report = verify_thm5(graph, depth, cap)
    elif theorem in ("31", "33"):
        report = verify_thm31_33(graph, depth, cap, settings.ideal_degree_cap)
    elif theorem == "32":
        report = verify_regular_ideal_sets(graph)
    elif theorem == "34":
        report = verify_regular_ideals_graded(graph, depth)
    elif theorem == "60":
        report = verify_regular_quotients(graph, depth)
    elif theorem == "quotient":
        if args.set is None:
            raise ValueError("--theorem quotient needs --set")
        report = verify_quotient_iso(graph, _parse_set(graph, args.set))
    elif theorem == "kp":
        report = verify_kp_axioms(graph)
    elif theorem == "grading":
        report = verify_grading(graph, seed=settings.corpus_seed)
    else:
        report = verify_zero_tests(graph, seed=settings.corpus_seed)
    return report.to_text(), _report_code([report])


def cmd_suite(args: Namespace, settings: Settings) -> Result:
    shape = {1: (args.n1, 8), 2: (args.n2, 6), 3: (args.n3, 4)}
    corpus = build_corpus(shape, seed=settings.corpus_seed)
    reports = run_suite(corpus, settings.condition_b_depth, settings.lattice_cap, settings.workers)
    return format_reports(reports), _report_code(reports)


def cmd_gen(args: Namespace, settings: Settings) -> Result:
    graph = random_kgraph(args.k, args.vertices, args.density, args.seed, acyclic=args.acyclic)
    return _write_or_return(serialize_kgraph(graph), args.out), EXIT_OK


COMMANDS: dict[str, Callable[[Namespace, Settings], Result]] = {
    "validate": cmd_validate,
    "lattice": cmd_lattice,
    "perp": cmd_perp,
    "doubleperp": cmd_doubleperp,
    "regular": cmd_regular,
    "quotient": cmd_quotient,
    "condition-b": cmd_condition_b,
    "kp-eval": cmd_kp_eval,
    "verify": cmd_verify,
    "suite": cmd_suite,
    "gen": cmd_gen,
}


# ── argument parsing ────────────────────────────────────────────────


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kplat", description="k-graphs, their sh lattices and Kumjian-Pask algebras")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-v", "--verbose", action="store_true", help="debug logging and tracebacks")
    sub = parser.add_subparsers(dest="command", required=True)

    def command(name: str, help_text: str, with_file: bool = True) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text, parents=[common])
        if with_file:
            p.add_argument("file", help="k-graph document (.kg)")
        return p

    p = command("validate", "parse, validate and check local convexity")
    p.add_argument("--dot", metavar="OUT", help="write the skeleton as DOT")

    p = command("lattice", "list every saturated hereditary set")
    p.add_argument("--dot", metavar="OUT", help="write the Hasse diagram as DOT")

    for name, help_text in (("perp", "H^⊥ of a saturated hereditary set"), ("doubleperp", "H^⊥⊥")):
        p = command(name, help_text)
        p.add_argument("--set", required=True, help="comma-separated vertex ids")

    p = command("regular", "regularity of one set, or of the whole lattice")
    p.add_argument("--set", help="comma-separated vertex ids")

    p = command("quotient", "the quotient graph by a saturated hereditary set")
    p.add_argument("--set", required=True, help="comma-separated vertex ids")
    p.add_argument("--out", help="write the quotient here instead of stdout")

    p = command("condition-b", "check Condition (B)")
    p.add_argument("--vertex", help="check a single vertex")
    p.add_argument("--depth", type=int, help="search depth (default KPLAT_DEPTH or 8)")

    p = command("kp-eval", "evaluate an algebra expression")
    p.add_argument("--expr", required=True)
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--is-zero", action="store_true")
    mode.add_argument("--graded", action="store_true", help="print homogeneous components")
    mode.add_argument("--in-ideal", metavar="SET", help="membership in I(H)")
    mode.add_argument("--vertex-set", action="store_true", help="H(J) of the ideal J the expression generates")

    p = command("verify", "run a theorem harness on one graph")
    p.add_argument("--theorem", required=True, choices=THEOREMS)
    p.add_argument("--set", help="vertex ids for --theorem quotient")
    p.add_argument("--depth", type=int)

    p = command("suite", "run every harness over a random corpus", with_file=False)
    p.add_argument("--n1", type=int, default=200)
    p.add_argument("--n2", type=int, default=50)
    p.add_argument("--n3", type=int, default=10)
    p.add_argument("--seed", type=int)
    p.add_argument("--depth", type=int)
    p.add_argument("--workers", type=int, help="processes (default KPLAT_WORKERS or one per CPU)")

    p = command("gen", "draw a random k-graph", with_file=False)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--vertices", type=int, required=True)
    p.add_argument("--density", type=float, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--acyclic", action="store_true")
    p.add_argument("--out")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK

    logging.basicConfig(
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        level=logging.DEBUG if args.verbose else logging.WARNING,
        stream=sys.stderr,
    )

    try:
        settings = load_settings(
            condition_b_depth=getattr(args, "depth", None),
            corpus_seed=args.seed if args.command == "suite" else None,
            workers=args.workers if args.command == "suite" else None,
        )
        output, code = COMMANDS[args.command](args, settings)
    except INPUT_ERRORS as e:
        if args.verbose:
            logger.exception("%s failed", args.command)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE

    sys.stdout.write(output)
    return code


if __name__ == "__main__":
    sys.exit(main())
