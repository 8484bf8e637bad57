"""Formula-SAT reductions to pattern matching on labeled graphs and subtree isomorphism."""

from .formula import Formula, brute_force_sat, evaluate, parse_formula, random_formula, render_formula
from .fpair import FormulaPairInstance, brute_force_pair, evaluate_pair, split_to_pair
from .labeled_graph import LabeledGraph, Pattern, oracle_pmlg, solve_pmlg, solve_pmlg_bitparallel
from .pipeline import stats, verify
from .pmlg_reduce import build_final_pmlg, graph_for, pattern_for, universal_gadget
from .rooted_tree import RootedTree, contains, oracle_contains, tree_stats
from .subtree_reduce import build_final_subtree, tree_a_for, tree_b_for, universal_tree

__all__ = [
    "Formula", "FormulaPairInstance", "LabeledGraph", "Pattern", "RootedTree",
    "brute_force_pair", "brute_force_sat", "build_final_pmlg", "build_final_subtree",
    "contains", "evaluate", "evaluate_pair", "graph_for", "oracle_contains", "oracle_pmlg",
    "parse_formula", "pattern_for", "random_formula", "render_formula", "solve_pmlg",
    "solve_pmlg_bitparallel", "split_to_pair", "stats", "tree_a_for", "tree_b_for",
    "tree_stats", "universal_gadget", "universal_tree", "verify",
]
