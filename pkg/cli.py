"""morsecell command line.

JSON reports go to standard output, the human summary to standard error.
Exit codes: 0 verified / predicate true, 1 refuted / predicate false,
2 usage or input error, 3 search budget exceeded.
"""
import argparse
import json
import logging
import sys
from typing import Dict, List, Optional

from betti import betti_table, minimality_verdict
from config import Settings, load_settings
from critical import (
    BridgeFriendlyAlgorithm,
    CellFamily,
    TotalOrder,
    bridge_friendly_obstruction,
    critical_cells,
    format_subset,
    is_bridge_friendly,
    lyubeznik_minimal,
)
from errors import MorsecellError, ParseError
from graphs import edge_ideal, enumerate_connected, parse_graph_spec, recognize_bf, recognize_labc
from ideal import MonomialIdeal, hhz_subideal, power, scale
from search import SearchResult, exists_bf_order, exists_bm_order, exists_lyubeznik_order
from store import OutcomeStore
from suites import CATALOG, RuntimeClass, SuiteContext, get_suite, run_suite, select_suites

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_FALSE, EXIT_ERROR, EXIT_BUDGET = 0, 1, 2, 3

SEARCHES = {
    "lyubeznik": exists_lyubeznik_order,
    "bridge-friendly": exists_bf_order,
    "bm": exists_bm_order,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="morsecell", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--field", choices=["gf2"], default="gf2", help="coefficient field (only gf2)")
    parser.add_argument("--log-level", default=None, help="overrides MORSECELL_LOG_LEVEL")
    parser.add_argument("--env-file", default=None, help="read settings from this .env file")
    commands = parser.add_subparsers(dest="command", required=True)

    def input_flags(p):
        p.add_argument("-i", "--ideal", help="ideal JSON file")
        p.add_argument("-g", "--graph", help="graph spec; its edge ideal is used")

    ideal = commands.add_parser("ideal", help="ideal operations").add_subparsers(dest="action", required=True)
    p = ideal.add_parser("power")
    input_flags(p)
    p.add_argument("-n", type=int, required=True)
    p = ideal.add_parser("hhz")
    input_flags(p)
    p.add_argument("-m", required=True, help='monomial such as "x1^2*x2"')
    p = ideal.add_parser("scale")
    input_flags(p)
    p.add_argument("-f", required=True, help="monomial factor")
    input_flags(ideal.add_parser("betti"))

    graph = commands.add_parser("graph", help="graph operations").add_subparsers(dest="action", required=True)
    graph.add_parser("build").add_argument("-g", "--graph", required=True)
    graph.add_parser("edge-ideal").add_argument("-g", "--graph", required=True)
    p = graph.add_parser("recognize")
    p.add_argument("-g", "--graph", required=True)
    family = p.add_mutually_exclusive_group(required=True)
    family.add_argument("--labc", action="store_true")
    family.add_argument("--bf", action="store_true")
    graph.add_parser("enumerate").add_argument("-n", type=int, required=True)

    check = commands.add_parser("check", help="per-order checks").add_subparsers(dest="action", required=True)
    for name in ("lyubeznik", "bm", "bridge-friendly"):
        p = check.add_parser(name)
        input_flags(p)
        p.add_argument("--order", required=True, help="comma-separated generators, largest first")
        if name == "bridge-friendly":
            p.add_argument("--algorithm", choices=[a.value for a in BridgeFriendlyAlgorithm],
                           default=BridgeFriendlyAlgorithm.DEFINITIONAL.value)

    search = commands.add_parser("search", help="existence of a good order").add_subparsers(dest="action",
                                                                                              required=True)
    for name in SEARCHES:
        p = search.add_parser(name)
        input_flags(p)
        search_flags(p)
        p.add_argument("--budget", type=int, default=None, help="maximum orders to evaluate")
        p.add_argument("--symmetry", choices=["on", "off"], default="off")

    p = commands.add_parser("verify", help="run verification suites")
    p.add_argument("suite", nargs="?", default="all", help="suite id or 'all'")
    p.add_argument("--class", dest="runtime_class", choices=[c.value for c in RuntimeClass],
                   default=RuntimeClass.MINUTES.value)
    p.add_argument("--list", action="store_true", help="list the catalog and exit")
    search_flags(p)
    return parser


def search_flags(p: argparse.ArgumentParser):
    p.add_argument("--jobs", type=int, default=None, help="worker processes (MORSECELL_JOBS)")
    p.add_argument("--cache", default=None, help="sqlite outcome cache (MORSECELL_CACHE)")
    p.add_argument("--progress", action="store_true", help="show a progress bar on stderr")


def _load_ideal(args) -> MonomialIdeal:
    if getattr(args, "ideal", None):
        return MonomialIdeal.load(args.ideal)
    if getattr(args, "graph", None):
        return edge_ideal(parse_graph_spec(args.graph))
    raise ParseError("an ideal file (-i) or a graph spec (-g) is required")


def _emit(command: str, code: int, result) -> int:
    print(json.dumps({"command": command, "exit_code": code, "result": result}, indent=2))
    return code


def _store(args, settings: Settings) -> Optional[OutcomeStore]:
    path = args.cache or settings.cache_path
    return OutcomeStore(path) if path else None


def cmd_ideal(args) -> int:
    I = _load_ideal(args)
    if args.action == "power":
        return _emit("ideal power", EXIT_OK, power(I, args.n).to_json())
    if args.action == "hhz":
        return _emit("ideal hhz", EXIT_OK, hhz_subideal(I, I.parse_monomial(args.m)).to_json())
    if args.action == "scale":
        return _emit("ideal scale", EXIT_OK, scale(I.parse_monomial(args.f), I).to_json())
    table = betti_table(I)
    logger.info(f"Betti totals of {I}: {table.totals()}")
    return _emit("ideal betti", EXIT_OK, {"totals": table.totals(), "entries": table.to_records()})


def cmd_graph(args) -> int:
    if args.action == "enumerate":
        graphs = [G.to_json() for G in enumerate_connected(args.n)]
        logger.info(f"{len(graphs)} connected graphs on {args.n} vertices")
        return _emit("graph enumerate", EXIT_OK, {"n": args.n, "count": len(graphs), "graphs": graphs})
    G = parse_graph_spec(args.graph)
    if args.action == "build":
        return _emit("graph build", EXIT_OK, G.to_json())
    if args.action == "edge-ideal":
        return _emit("graph edge-ideal", EXIT_OK, edge_ideal(G).to_json())
    if args.labc:
        params = recognize_labc(G)
        return _emit("graph recognize", EXIT_OK if params else EXIT_FALSE, params._asdict() if params else None)
    tw = recognize_bf(G)
    return _emit("graph recognize", EXIT_OK if tw else EXIT_FALSE, tw.to_json() if tw else None)


def cmd_check(args) -> int:
    I = _load_ideal(args)
    order = TotalOrder.parse(I, args.order)
    command = f"check {args.action}"
    if args.action == "lyubeznik":
        verdict = lyubeznik_minimal(I, order)
        result = {"minimal": verdict.minimal}
        if not verdict.minimal:
            result["cell"] = format_subset(I, verdict.cell)
            result["bridge"] = I.format_monomial(I.gens[verdict.bridge])
        return _emit(command, EXIT_OK if verdict.minimal else EXIT_FALSE, result)
    if args.action == "bm":
        cells = critical_cells(I, order, CellFamily.BARILE_MACCHIA)
        betti = betti_table(I)
        verdict = minimality_verdict(cells, betti)
        result = {"minimal": verdict.minimal, "cell_totals": cells.totals(), "betti_totals": betti.totals()}
        if verdict.discrepancy:
            d = verdict.discrepancy
            result["discrepancy"] = {"i": d.i, "degree": list(d.degree), "cells": d.cells, "betti": d.betti}
        return _emit(command, EXIT_OK if verdict.minimal else EXIT_FALSE, result)
    friendly = is_bridge_friendly(I, order, args.algorithm)
    result = {"bridge_friendly": friendly, "algorithm": args.algorithm}
    if not friendly:
        ob = bridge_friendly_obstruction(I, order)
        if ob is not None:
            result["obstruction"] = {
                "tau": format_subset(I, ob.tau),
                "m1": I.format_monomial(I.gens[ob.m1]),
                "m2": I.format_monomial(I.gens[ob.m2]),
                "m3": I.format_monomial(I.gens[ob.m3]),
            }
    return _emit(command, EXIT_OK if friendly else EXIT_FALSE, result)


def cmd_search(args, settings: Settings) -> int:
    I = _load_ideal(args)
    budget = args.budget if args.budget is not None else settings.budget
    outcome = SEARCHES[args.action](
        I, budget, args.symmetry == "on",
        jobs=args.jobs or settings.jobs,
        store=_store(args, settings),
        progress=args.progress or settings.progress,
    )
    code = {
        SearchResult.WITNESS_FOUND: EXIT_OK,
        SearchResult.EXHAUSTED_NEGATIVE: EXIT_FALSE,
        SearchResult.BUDGET_EXCEEDED: EXIT_BUDGET,
    }[outcome.result]
    return _emit(f"search {args.action}", code, outcome.to_json())


def cmd_verify(args, settings: Settings) -> int:
    if args.list:
        listing = [{"id": s.id, "description": s.description, "runtime_class": s.runtime_class.value}
                   for s in CATALOG.values()]
        return _emit("verify --list", EXIT_OK, listing)
    runtime_class = RuntimeClass(args.runtime_class)
    suites = select_suites(runtime_class) if args.suite == "all" else [get_suite(args.suite)]
    context = SuiteContext(
        jobs=args.jobs or settings.jobs,
        extended=runtime_class is RuntimeClass.EXTENDED,
        store=_store(args, settings),
        progress=args.progress or settings.progress,
    )
    reports: List[Dict] = []
    verified = True
    for suite in suites:
        report = run_suite(suite, context)
        verified &= report.verified
        reports.append(report.to_json())
        logger.info(f"{'✅' if report.verified else '❌'} {suite.id}: {report.to_json()['status']}")
    code = EXIT_OK if verified else EXIT_FALSE
    return _emit(f"verify {args.suite}", code, {"status": "verified" if verified else "refuted", "suites": reports})


def run(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_ERROR if e.code not in (0, None) else EXIT_OK
    try:
        settings = load_settings(args.env_file)
        level = (args.log_level or settings.log_level).upper()
        logging.basicConfig(level=level, format='%(asctime)s - %(levelname)s - %(message)s',
                            stream=sys.stderr, force=True)
        if args.command == "ideal":
            return cmd_ideal(args)
        if args.command == "graph":
            return cmd_graph(args)
        if args.command == "check":
            return cmd_check(args)
        if args.command == "search":
            return cmd_search(args, settings)
        return cmd_verify(args, settings)
    except (MorsecellError, ValueError) as e:
        logger.error(f"❌ {type(e).__name__}: {e}")
        return EXIT_ERROR


def main():
    """Main function"""
    sys.exit(run())


if __name__ == "__main__":
    main()
