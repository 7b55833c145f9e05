"""Command-line front end: check, params, reduce, and bench subcommands.

Exit codes: 0 team satisfies the formula, 1 it does not, 2 usage or parse
error, 3 work budget exceeded.  All machine-readable output is
line-oriented ``key=value`` text (CSV for bench).
"""

from __future__ import annotations

import argparse
import sys
import time
from dataclasses import dataclass
from pathlib import Path

from .evaluator import (
    BudgetExceededError,
    Engine,
    find_dep_violation,
    run_check,
)
from .graph import GraphError, gaifman, treewidth_exact, treewidth_greedy
from .model import (
    EvaluationError,
    Structure,
    StructureError,
    Team,
    TeamError,
    parse_structure,
    parse_team,
    structure_to_text,
    team_to_text,
)
from .reductions import CNFError, parse_dimacs, parse_pdl, reduce_3sat, reduce_pdl
from .syntax import DepAtom, Formula, FormulaSyntaxError, analyze, parse_formula, pretty

EXIT_SAT = 0
EXIT_UNSAT = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3

DEFAULT_BUDGET = 10_000_000
DEFAULT_TREEWIDTH_LIMIT = 20

_ENGINES = {
    "naive": Engine.NAIVE,
    "opt": Engine.OPTIMIZED,
    "fo": Engine.FO_TARSKI,
    "auto": Engine.AUTO,
}


@dataclass(frozen=True)
class ParameterReport:
    """The nine parameter values of a model-checking instance."""

    splits: int
    foralls: int
    arity: int
    vars: int
    free_vars: int
    size: int
    structure_size: int
    team_size: int
    treewidth: int
    treewidth_is_exact: bool

    def lines(self) -> list[str]:
        tag = "exact" if self.treewidth_is_exact else "upper-bound"
        return [
            f"splits={self.splits}",
            f"foralls={self.foralls}",
            f"arity={self.arity}",
            f"vars={self.vars}",
            f"free_vars={self.free_vars}",
            f"size={self.size}",
            f"structure_size={self.structure_size}",
            f"team_size={self.team_size}",
            f"treewidth={self.treewidth}({tag})",
        ]


def build_report(
    structure: Structure,
    team: Team,
    formula: Formula,
    treewidth_limit: int = DEFAULT_TREEWIDTH_LIMIT,
) -> ParameterReport:
    """All nine parameters; treewidth is exact up to the vertex limit."""
    params = analyze(formula)
    graph = gaifman(structure)
    if len(graph.vertices) <= treewidth_limit:
        treewidth, _ = treewidth_exact(graph, treewidth_limit)
        exact = True
    else:
        treewidth, _ = treewidth_greedy(graph)
        exact = False
    return ParameterReport(
        splits=params.splits,
        foralls=params.foralls,
        arity=params.arity,
        vars=params.vars,
        free_vars=params.free_vars,
        size=params.size,
        structure_size=structure.size,
        team_size=len(team),
        treewidth=treewidth,
        treewidth_is_exact=exact,
    )


def _load_instance(args) -> tuple[Structure, Team, Formula]:
    structure = parse_structure(Path(args.structure_file).read_text())
    team = parse_team(Path(args.team_file).read_text(), structure)
    formula = parse_formula(
        Path(args.formula_file).read_text().strip(), structure.vocabulary()
    )
    return structure, team, formula


def _resolve_budget(value: int) -> int | None:
    return None if value <= 0 else value


def cmd_check(args) -> int:
    if args.threads < 1:
        raise ValueError("--threads must be at least 1")
    structure, team, formula = _load_instance(args)
    outcome = run_check(
        structure, team, formula, _ENGINES[args.engine], _resolve_budget(args.budget)
    )
    print("SAT" if outcome.satisfied else "UNSAT")
    print(f"engine={outcome.engine.value}")
    print(f"expansions={outcome.expansions}")
    if not outcome.satisfied and isinstance(formula, DepAtom):
        pair = find_dep_violation(structure, team, formula)
        if pair is not None:
            for tag, assignment in zip(("witness_row1", "witness_row2"), pair):
                named = assignment.named(structure)
                print(f"{tag}=" + " ".join(named[v] for v in team.domain))
    return EXIT_SAT if outcome.satisfied else EXIT_UNSAT


def cmd_params(args) -> int:
    structure, team, formula = _load_instance(args)
    for line in build_report(structure, team, formula).lines():
        print(line)
    return EXIT_SAT


def cmd_reduce(args) -> int:
    text = Path(args.input_file).read_text()
    if args.kind == "3sat":
        structure, team, formula = reduce_3sat(parse_dimacs(text))
    else:
        structure, team, formula = reduce_pdl(parse_pdl(text))
    prefix = args.output_prefix
    paths = {
        "structure": Path(f"{prefix}.structure"),
        "team": Path(f"{prefix}.team"),
        "formula": Path(f"{prefix}.formula"),
    }
    paths["structure"].write_text(structure_to_text(structure))
    paths["team"].write_text(team_to_text(team, structure))
    paths["formula"].write_text(pretty(formula) + "\n")
    for path in paths.values():
        print(path)
    return EXIT_SAT


# --- bench families ---------------------------------------------------------
#
# Each family stresses exactly one growth direction with an unsatisfiable
# instance, so no search can short-circuit and the node counts expose the
# engines' asymptotics.

def _bench_instance(family: str, value: int) -> tuple[Structure, Team, Formula]:
    if family == "team-size":
        names = [f"e{i}" for i in range(max(value, 1))]
        structure = Structure(names, relations={"R": (1, [])})
        team = Team.from_named_rows(("x",), [(n,) for n in names[:value]], structure)
        formula = parse_formula("R(x) | R(x)", structure.vocabulary())
        return structure, team, formula
    if family == "universe-size":
        if value < 1:
            raise ValueError("universe-size values must be at least 1")
        names = [f"e{i}" for i in range(value)]
        structure = Structure(names, relations={"R": (1, [])})
        return structure, Team.of_empty_assignment(), parse_formula(
            "exists z R(z)", structure.vocabulary()
        )
    if family == "splits":
        structure = Structure(("0", "1"), relations={"R": (1, [])})
        team = Team.from_named_rows(("x",), [("0",), ("1",)], structure)
        formula = parse_formula(
            " | ".join(["R(x)"] * (value + 1)), structure.vocabulary()
        )
        return structure, team, formula
    raise ValueError(f"unknown bench family {family!r}")


def _parse_range(text: str) -> range:
    lo, sep, hi = text.partition("..")
    if not sep or not lo.isdigit() or not hi.isdigit():
        raise ValueError(f"bad range {text!r}, expected LO..HI")
    return range(int(lo), int(hi) + 1)


def cmd_bench(args) -> int:
    values = _parse_range(args.range)
    engine = _ENGINES[args.engine]
    budget = _resolve_budget(args.budget)
    lines = ["param,value,engine,nodes,millis,status"]
    for value in values:
        structure, team, formula = _bench_instance(args.family, value)
        start = time.perf_counter()
        try:
            outcome = run_check(structure, team, formula, engine, budget)
            nodes, status = outcome.expansions, "ok"
        except BudgetExceededError as exc:
            nodes, status = exc.expansions, "budget-exceeded"
        millis = round((time.perf_counter() - start) * 1000.0, 3)
        lines.append(f"{args.family},{value},{args.engine},{nodes},{millis},{status}")
    text = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_SAT


def build_arg_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="teamcheck",
        description="Team-semantics model checking for dependence-logic formulas.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_engine_flags(p):
        p.add_argument(
            "--engine",
            choices=sorted(_ENGINES),
            default="auto",
            help="evaluation engine (default: auto)",
        )
        p.add_argument(
            "--budget",
            type=int,
            default=DEFAULT_BUDGET,
            help=f"node-expansion budget, 0 for unlimited (default: {DEFAULT_BUDGET})",
        )

    check = sub.add_parser("check", help="decide whether the team satisfies the formula")
    check.add_argument("structure_file")
    check.add_argument("team_file")
    check.add_argument("formula_file")
    add_engine_flags(check)
    check.add_argument(
        "--threads",
        type=int,
        default=1,
        help="worker count hint; evaluation output is identical at any value",
    )
    check.set_defaults(func=cmd_check)

    params = sub.add_parser("params", help="report the nine instance parameters")
    params.add_argument("structure_file")
    params.add_argument("team_file")
    params.add_argument("formula_file")
    params.set_defaults(func=cmd_params)

    reduce_p = sub.add_parser("reduce", help="emit a model-checking instance")
    reduce_p.add_argument("kind", choices=("3sat", "pdl"))
    reduce_p.add_argument("input_file")
    reduce_p.add_argument("output_prefix")
    reduce_p.set_defaults(func=cmd_reduce)

    bench = sub.add_parser("bench", help="run a scaling benchmark family")
    bench.add_argument(
        "--family", choices=("team-size", "universe-size", "splits"), required=True
    )
    bench.add_argument("--range", required=True, help="inclusive LO..HI")
    bench.add_argument(
        "--engine", choices=sorted(_ENGINES), default="opt", help="engine (default: opt)"
    )
    bench.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    bench.add_argument("--seed", type=int, default=0, help="seed for randomized families")
    bench.add_argument("--out", help="CSV output path (default: stdout)")
    bench.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    args = build_arg_parser().parse_args(argv)
    try:
        return args.func(args)
    except BudgetExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (
        FormulaSyntaxError,
        StructureError,
        TeamError,
        EvaluationError,
        CNFError,
        GraphError,
        ValueError,
        OSError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
