"""Command line interface.

Exit codes: 0 success (or positive decision / agreement), 1 negative decision
or disagreement, 2 usage or I/O error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .formula import FormulaError, brute_force_sat, read_formula
from .fpair import split_to_pair
from .labeled_graph import (
    AlphabetError,
    GraphFormatError,
    read_graph,
    read_pattern,
    solve_pmlg,
    solve_pmlg_bitparallel,
    write_graph,
    write_pattern,
)
from .pipeline import TARGETS, GridPoint, StageError, bench, stats, verify, write_bench_csv
from .pmlg_reduce import build_final_pmlg
from .rooted_tree import TreeFormatError, contains, read_tree, write_tree
from .subtree_reduce import build_final_subtree

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE = 0, 1, 2


def _int_list(text: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers: {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fsat-reduce",
        description="Reduce formula satisfiability to graph pattern matching and subtree containment.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sat", help="brute-force satisfiability of a formula file")
    p.add_argument("formula")

    p = sub.add_parser("reduce", help="emit a reduced instance")
    red = p.add_subparsers(dest="target", required=True)
    rp = red.add_parser("pmlg")
    rp.add_argument("formula")
    rp.add_argument("--graph", required=True)
    rp.add_argument("--pattern", required=True)
    rs = red.add_parser("subtree")
    rs.add_argument("formula")
    rs.add_argument("--t1", required=True)
    rs.add_argument("--t2", required=True)

    p = sub.add_parser("solve", help="solve an instance from files")
    sol = p.add_subparsers(dest="target", required=True)
    sp = sol.add_parser("pmlg")
    sp.add_argument("graph")
    sp.add_argument("pattern")
    sp.add_argument("--bitparallel", action="store_true")
    st = sol.add_parser("subtree")
    st.add_argument("t1")
    st.add_argument("t2")

    p = sub.add_parser("verify", help="check satisfiability is preserved end to end")
    p.add_argument("formula")
    p.add_argument("--target", choices=TARGETS, default="both")

    p = sub.add_parser("stats", help="measured and predicted instance sizes")
    p.add_argument("formula")

    p = sub.add_parser("bench", help="time reductions and solvers on random formulas")
    p.add_argument("--n-list", type=_int_list, required=True)
    p.add_argument("--s-list", type=_int_list, required=True)
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--target", choices=TARGETS, default="both")
    p.add_argument("--budget-s", type=float, default=None)
    p.add_argument("--out", default=None, help="append rows to this CSV (default stdout)")
    return parser


def _decision(flag: bool) -> int:
    print("true" if flag else "false")
    return EXIT_OK if flag else EXIT_NEGATIVE


def run(args: argparse.Namespace) -> int:
    if args.command == "sat":
        result = brute_force_sat(read_formula(args.formula))
        if result.satisfiable:
            print("SAT " + "".join(map(str, result.witness)) + f" count={result.count}")
        else:
            print("UNSAT count=0")
        return EXIT_OK if result.satisfiable else EXIT_NEGATIVE

    if args.command == "reduce":
        inst = split_to_pair(read_formula(args.formula))
        if args.target == "pmlg":
            final = build_final_pmlg(inst, provenance={"formula": args.formula})
            with open(args.graph, "w", encoding="ascii") as fh:
                write_graph(final.graph, fh)
            with open(args.pattern, "w", encoding="ascii") as fh:
                write_pattern(final.pattern, fh)
            print(f"V={final.graph.num_vertices} E={final.graph.num_edges} |P|={len(final.pattern)}")
        else:
            trees = build_final_subtree(inst)
            with open(args.t1, "w", encoding="ascii") as fh:
                write_tree(trees.t_a, fh)
            with open(args.t2, "w", encoding="ascii") as fh:
                write_tree(trees.t_b, fh)
            print(f"|T1|={trees.t_a.size} |T2|={trees.t_b.size}")
        return EXIT_OK

    if args.command == "solve":
        if args.target == "pmlg":
            with open(args.graph, encoding="ascii") as fh:
                graph = read_graph(fh)
            with open(args.pattern, encoding="ascii") as fh:
                pattern = read_pattern(fh)
            solver = solve_pmlg_bitparallel if args.bitparallel else solve_pmlg
            return _decision(solver(graph, pattern))
        with open(args.t1, encoding="ascii") as fh:
            t1 = read_tree(fh)
        with open(args.t2, encoding="ascii") as fh:
            t2 = read_tree(fh)
        return _decision(contains(t1, t2))

    if args.command == "verify":
        report = verify(read_formula(args.formula), args.target)
        print(json.dumps(report.as_dict(), indent=2))
        return EXIT_OK if report.agree else EXIT_NEGATIVE

    if args.command == "stats":
        print(json.dumps(stats(read_formula(args.formula)).as_dict(), indent=2))
        return EXIT_OK

    if args.command == "bench":
        grid = [GridPoint(n, s, args.trials, args.seed) for n in args.n_list for s in args.s_list]
        rows = bench(grid, args.target, args.budget_s)
        if args.out is None:
            write_bench_csv(rows, sys.stdout)
        else:
            fresh = not os.path.exists(args.out) or os.path.getsize(args.out) == 0
            with open(args.out, "a", encoding="ascii", newline="") as fh:
                write_bench_csv(rows, fh, header=fresh)
        return EXIT_OK

    raise AssertionError(args.command)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return run(args)
    except (OSError, FormulaError, GraphFormatError, AlphabetError, TreeFormatError, StageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
