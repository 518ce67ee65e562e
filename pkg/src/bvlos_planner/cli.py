"""Command-line entry point: ``bvlos-plan <command> ...``.

Results go to stdout, diagnostics to stderr. The exit status is 0 on success
(including a well-formed "no path" answer), 1 on input or runtime errors, 2 on
malformed command lines, and 3 when ``validate`` finds a solver/oracle
disagreement.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import sys
import warnings
from pathlib import Path

from .oracle import DEFAULT_VERTEX_BUDGET, OracleBudgetError
from .report import EXPORT_FORMATS, export_plan, plan
from .scenario import (
    RISK_PROFILES, PlanRequest, ScenarioError, generate_scenario, load_scenario, parse_cell,
)
from .solver import MODES, SolverError
from .validation import Instance, cross_check, random_instances

log = logging.getLogger("bvlos_planner")

EXIT_ERROR = 1
EXIT_DISAGREE = 3
DEFAULT_MAX_EXPANSIONS = 2_000_000


def _cell_arg(text: str):
    try:
        return parse_cell(text)
    except ScenarioError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _add_request_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--scenario", required=True, type=Path, help="scenario JSON file")
    p.add_argument("--from", dest="start", type=_cell_arg, metavar="X,Y,Z",
                   help="start cell (default: the scenario's request)")
    p.add_argument("--to", dest="goal", type=_cell_arg, metavar="X,Y,Z",
                   help="goal cell (default: the scenario's request)")
    p.add_argument("--mode", choices=list(MODES), default=None,
                   help="objective (default: the scenario's request, else full)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bvlos-plan",
        description="Maximum-dependability drone mission planning over a multi-layer airspace model.",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging on stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("plan", help="solve one mission and print its summary")
    _add_request_args(p)
    p.add_argument("--out-dir", type=Path, help="also export records, tables and summary here")
    p.add_argument("--records", action="store_true", help="print the per-vertex path records")

    p = sub.add_parser("graph", help="build the dependability graph and print its statistics")
    p.add_argument("--scenario", required=True, type=Path)
    p.add_argument("--dump", type=Path, help="write the line-oriented graph dump to this file")

    p = sub.add_parser("gen", help="generate a seeded synthetic scenario")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--h", type=int, required=True)
    p.add_argument("--towers", type=int, default=0)
    p.add_argument("--obstacle-density", type=float, default=0.0)
    p.add_argument("--nofly-density", type=float, default=0.0)
    p.add_argument("--risk-profile", choices=RISK_PROFILES, default="uniform")
    p.add_argument("--cell-side", type=float, default=20.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--from", dest="start", type=_cell_arg, metavar="X,Y,Z")
    p.add_argument("--to", dest="goal", type=_cell_arg, metavar="X,Y,Z")
    p.add_argument("--mode", choices=list(MODES), default="full")
    p.add_argument("-o", "--output", type=Path, help="write here instead of stdout")

    p = sub.add_parser("validate", help="cross-check the solver against brute-force enumeration")
    p.add_argument("--scenario", type=Path,
                   help="check this scenario's request instead of random instances")
    p.add_argument("--count", type=int, default=50, help="number of random instances")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mode", choices=list(MODES), default=None,
                   help="objective to check (default: all modes)")
    p.add_argument("--vertex-budget", type=int, default=DEFAULT_VERTEX_BUDGET)
    p.add_argument("--max-expansions", type=int, default=DEFAULT_MAX_EXPANSIONS,
                   help="partial paths the enumeration may extend before refusing an instance")

    p = sub.add_parser("export", help="write plot tables, path records and summary")
    _add_request_args(p)
    p.add_argument("--out-dir", type=Path, required=True)
    p.add_argument("--format", dest="formats", action="append", choices=EXPORT_FORMATS,
                   help="restrict to these outputs (repeatable; default: all)")
    return parser


def _plan(args, scenario):
    return plan(scenario, args.start, args.goal, args.mode)


def cmd_plan(args) -> int:
    scenario = load_scenario(args.scenario)
    report = _plan(args, scenario)
    summary = report.summary()
    if args.records:
        summary["records"] = report.records()
    print(json.dumps(summary, indent=2))
    if args.out_dir:
        for p in export_plan(report, args.out_dir):
            log.info("wrote %s", p)
    return 0


def cmd_graph(args) -> int:
    scenario = load_scenario(args.scenario)
    graph = scenario.build_graph()
    if args.dump:
        with args.dump.open("w") as fh:
            graph.dump(fh)
        log.info("wrote %s", args.dump)
    print(json.dumps(graph.stats(), indent=2))
    return 0


def cmd_gen(args) -> int:
    scenario = generate_scenario(
        args.n, args.m, args.h, args.towers, args.obstacle_density, args.risk_profile,
        args.seed, cell_side_m=args.cell_side, nofly_density=args.nofly_density,
    )
    if args.start is not None and args.goal is not None:
        scenario = dataclasses.replace(
            scenario, request=PlanRequest(args.start, args.goal, args.mode))
    text = scenario.dumps()
    if args.output:
        args.output.write_text(text)
        log.info("wrote %s", args.output)
    else:
        sys.stdout.write(text)
    return 0


def cmd_validate(args) -> int:
    modes = [args.mode] if args.mode else list(MODES)
    if args.scenario:
        sc = load_scenario(args.scenario)
        if sc.request is None:
            raise ScenarioError(f"{args.scenario} has no request to validate")
        instances = [Instance(sc, sc.build_graph(), sc.request.start, sc.request.goal)]
    else:
        instances = list(random_instances(args.count, args.seed, args.vertex_budget))
    disagreements = refused = 0
    for k, inst in enumerate(instances):
        for mode in modes:
            head = f"{k}\t{mode}\t{inst.start}->{inst.goal}\t|V|={inst.graph.vertex_count()}"
            try:
                r = cross_check(inst, mode, args.vertex_budget, args.max_expansions)
            except OracleBudgetError as exc:
                refused += 1
                print(f"{head}\trefused: {exc}")
                continue
            verdict = "agree" if r.agree else "DISAGREE"
            disagreements += not r.agree
            print(f"{head}\tsolver={r.solver!r}\toracle={r.oracle!r}\t{verdict}")
    checked = len(instances) * len(modes) - refused
    print(f"{checked - disagreements}/{checked} agree, {refused} refused by the enumeration")
    return EXIT_DISAGREE if disagreements else 0


def cmd_export(args) -> int:
    scenario = load_scenario(args.scenario)
    report = _plan(args, scenario)
    for p in export_plan(report, args.out_dir, args.formats or EXPORT_FORMATS):
        print(p)
    return 0


COMMANDS = {
    "plan": cmd_plan,
    "graph": cmd_graph,
    "gen": cmd_gen,
    "validate": cmd_validate,
    "export": cmd_export,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s", stream=sys.stderr)
    logging.captureWarnings(True)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("default")
            return COMMANDS[args.command](args)
    except (ScenarioError, SolverError, OracleBudgetError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
