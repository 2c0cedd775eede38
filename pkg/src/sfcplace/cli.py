"""Command-line front end.

Subcommands: ``solve`` (one solver, report out), ``compare`` (exact vs
greedy per-edge table), ``export`` (LP file), ``gen`` (problem files).

Exit codes are a stable contract: 0 solved (optimal or feasible), 1 usage,
parse or validation failure, 2 infeasible, 3 timeout with an incumbent.
"""

from __future__ import annotations

import argparse
import sys
from typing import Sequence

from . import exact, greedy, milp, oracle, report, scenario, serialize
from .model import INFEASIBLE, TIMEOUT, InvalidProblemError, ModelError

_STATUS_EXIT = {INFEASIBLE: 2, TIMEOUT: 3}


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on usage errors; 2 means infeasible here, so remap."""

    def error(self, message):
        self.exit(1, f"{self.prog}: error: {message}\n")


def _build_parser() -> _Parser:
    parser = _Parser(prog="sfcplace", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="solve a problem file and write a report")
    solve.add_argument("problem", help="problem file (JSON)")
    solve.add_argument("--solver", choices=("exact", "greedy", "oracle"), default="exact")
    solve.add_argument("--time-limit", type=float, default=None, metavar="SECONDS")
    solve.add_argument("--out", default=None, help="also write the report as JSON")

    compare = sub.add_parser("compare", help="run exact and greedy, tabulate per-edge latency")
    compare.add_argument("problem", help="problem file (JSON)")
    compare.add_argument("--time-limit", type=float, default=None, metavar="SECONDS")
    compare.add_argument("--format", choices=("csv", "table"), default="table")
    compare.add_argument("--out", default=None, help="also write the rendering to a file")

    export = sub.add_parser("export", help="write the problem as an LP file")
    export.add_argument("problem", help="problem file (JSON)")
    export.add_argument("--mode", choices=milp.MODES, default=milp.CORRECTED)
    export.add_argument("--big-m", type=int, default=None)
    export.add_argument("--out", default=None, help="LP destination (default stdout)")

    gen = sub.add_parser("gen", help="generate a problem file")
    gen.add_argument("kind", choices=("vepc", "random"))
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--nodes", type=int, default=10)
    gen.add_argument("--instances", type=int, default=8, help="random kind only")
    gen.add_argument("--edge-density", type=float, default=0.3, help="random kind only")
    gen.add_argument("--rule-density", type=float, default=0.3, help="random kind only")
    gen.add_argument("--out", default=None, help="destination (default stdout)")
    return parser


def _load(path: str):
    try:
        return serialize.load_problem(path)
    except (OSError, serialize.SchemaError, InvalidProblemError, ValueError) as exc:
        print(f"sfcplace: {exc}", file=sys.stderr)
        return None


def _cmd_solve(args) -> int:
    problem = _load(args.problem)
    if problem is None:
        return 1
    if args.solver == "exact":
        result = exact.solve(problem, exact.SolverConfig(time_limit=args.time_limit))
    elif args.solver == "greedy":
        result = greedy.solve_greedy(problem)
    else:
        try:
            result = oracle.enumerate_optimal(problem)
        except oracle.EnumerationLimitError as exc:
            print(f"sfcplace: {exc}", file=sys.stderr)
            return 1
    if args.out:
        serialize.save_report(result, args.out)
    sys.stdout.write(report.render_solve_table(result))
    return _STATUS_EXIT.get(result.status, 0)


def _cmd_compare(args) -> int:
    problem = _load(args.problem)
    if problem is None:
        return 1
    exact_report = exact.solve(problem, exact.SolverConfig(time_limit=args.time_limit))
    greedy_report = greedy.solve_greedy(problem)
    if exact_report.placement is None or greedy_report.placement is None:
        which = "exact" if exact_report.placement is None else "greedy"
        print(f"sfcplace: {which} solver found no placement", file=sys.stderr)
        return 2
    rows = report.comparison_rows(exact_report, greedy_report)
    if args.format == "csv":
        text = report.render_comparison_csv(rows)
    else:
        text = report.render_comparison_table(rows)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    sys.stdout.write(text)
    return _STATUS_EXIT.get(exact_report.status, 0)


def _cmd_export(args) -> int:
    problem = _load(args.problem)
    if problem is None:
        return 1
    try:
        if args.mode == milp.FAITHFUL:
            encoding = milp.encode_faithful(problem, args.big_m)
        else:
            encoding = milp.encode_corrected(problem, args.big_m)
    except ValueError as exc:
        print(f"sfcplace: {exc}", file=sys.stderr)
        return 1
    text = milp.write_lp(encoding)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
        print(f"variables {len(encoding.variables)} constraints {len(encoding.constraints)}")
    else:
        sys.stdout.write(text)
        print(
            f"variables {len(encoding.variables)} constraints {len(encoding.constraints)}",
            file=sys.stderr,
        )
    return 0


def _cmd_gen(args) -> int:
    try:
        params = scenario.ScenarioParams(seed=args.seed, node_count=args.nodes)
        if args.kind == "vepc":
            problem = scenario.vepc_problem(params)
        else:
            problem = scenario.random_problem(
                params, args.instances, args.edge_density, args.rule_density
            )
    except (ValueError, ModelError) as exc:
        print(f"sfcplace: {exc}", file=sys.stderr)
        return 1
    text = serialize.dumps_canonical(serialize.problem_to_dict(problem))
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
        print(f"seed {args.seed}")
    else:
        sys.stdout.write(text)
        print(f"seed {args.seed}", file=sys.stderr)
    return 0


_COMMANDS = {"solve": _cmd_solve, "compare": _cmd_compare, "export": _cmd_export, "gen": _cmd_gen}


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = _build_parser().parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 1
    return _COMMANDS[args.command](args)


if __name__ == "__main__":
    raise SystemExit(main())
