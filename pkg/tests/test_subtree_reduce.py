import dataclasses
import itertools
import random

import pytest

from conftest import all_formulas
from fsat_reduce.formula import brute_force_sat, parse_formula, random_formula
from fsat_reduce.fpair import PairLeaf, evaluate_nodes, split_to_pair
from fsat_reduce.rooted_tree import TreeStats, canonical_encoding, contains, oracle_contains, tree_stats
from fsat_reduce.subtree_reduce import (
    T_A_BOUND_CONSTANT,
    T_B_BOUND_CONSTANT,
    build_final_subtree,
    final_tree_bounds,
    final_tree_sizes,
    gadget_height,
    gate_tree_pair,
    skeleton_exponent,
    subinstance,
    tree_a_for,
    tree_a_size,
    tree_b_for,
    tree_b_size,
    universal_tree,
    universal_tree_size,
)


def x1():
    return split_to_pair(parse_formula("x1"))


def test_a_leaf_gadgets():
    inst = x1()
    zero, one = tree_a_for(inst, 0), tree_a_for(inst, 1)
    assert tree_stats(zero) == TreeStats(3, 1, 2)
    assert tree_stats(one) == TreeStats(2, 1, 1)
    b = tree_b_for(inst, 0)
    assert tree_stats(b) == TreeStats(2, 1, 1)
    assert not contains(zero, b)
    assert contains(one, b)


def test_b_leaf_gadgets():
    inst = split_to_pair(parse_formula("(x1&x2)"))
    sub = subinstance(inst, 1)
    assert sub.nodes == (PairLeaf("B", 0),)
    for j, expect in ((0, False), (1, True)):
        t_a, t_b = gate_tree_pair(inst, 1, 0, j)
        assert canonical_encoding(t_a) == "(()())"
        assert contains(t_a, t_b) is expect


def test_universal_tree_for_single_leaf():
    inst = x1()
    u = universal_tree(inst)
    assert canonical_encoding(u) == "(()())"
    assert contains(tree_a_for(inst, 0), u) and contains(tree_a_for(inst, 1), u)


def _leaf_pruned(tree):
    """Encoding with every node of height <= 1 replaced by a bare marker."""
    enc = {}
    for u in tree.postorder():
        if tree.node_height(u) <= 1:
            enc[u] = "*"
        else:
            enc[u] = "(" + "".join(sorted(enc[c] for c in tree.children[u])) + ")"
    return enc[tree.root]


def check_gate_trees(inst, i, j):
    values = evaluate_nodes(inst.nodes, inst.a_set[i], inst.b_set[j])
    for node in range(len(inst.nodes)):
        t_a, t_b = gate_tree_pair(inst, node, i, j)
        sub = subinstance(inst, node)
        h = gadget_height(sub)
        assert t_a.height == t_b.height == h
        assert universal_tree(sub).height == h
        assert t_a.size == tree_a_size(sub, i)
        assert t_b.size == tree_b_size(sub, j)
        assert contains(t_a, t_b) == bool(values[node])


def test_per_gate_random():
    rng = random.Random(31)
    for trial in range(200):
        inst = split_to_pair(random_formula(rng.randint(1, 6), rng.randint(1, 9), trial))
        check_gate_trees(inst, rng.randrange(inst.n_padded), rng.randrange(inst.n_padded))


def test_per_gate_all_pairs_small():
    for text in ["((x1|x2)&(~x1|x3))", "((x1&x2)|(x3|~x4))", "(x1|(x2|x3))"]:
        inst = split_to_pair(parse_formula(text))
        for i, j in itertools.product(range(inst.n_padded), repeat=2):
            check_gate_trees(inst, i, j)


def test_small_gate_pairs_against_oracle():
    inst = split_to_pair(parse_formula("(x1&x2)"))
    for i, j in itertools.product(range(2), repeat=2):
        t_a, t_b = tree_a_for(inst, i), tree_b_for(inst, j)
        assert oracle_contains(t_a, t_b, cap=20) == contains(t_a, t_b) == bool(i and j)


def test_height_growth_per_gate():
    for seed in range(60):
        f = random_formula(1 + seed % 6, 1 + seed % 16, seed)
        inst = split_to_pair(f)
        h = gadget_height(inst)
        assert h <= 5 * f.height
        assert tree_a_for(inst, 0).height == h
    and_chain = split_to_pair(parse_formula("((x1&x2)&x3)"))
    or_chain = split_to_pair(parse_formula("((x1|x2)|x3)"))
    assert gadget_height(and_chain) == 1 + 4 + 4
    assert gadget_height(or_chain) == 1 + 5 + 5


def test_universality_random():
    rng = random.Random(7)
    for trial in range(100):
        inst = split_to_pair(random_formula(rng.randint(1, 6), rng.randint(1, 12), trial))
        u = universal_tree(inst)
        assert u.size == universal_tree_size(inst)
        for i in range(inst.n_padded):
            t_a = tree_a_for(inst, i)
            assert t_a.height == u.height
            assert contains(t_a, u)


def test_side_independence():
    inst = split_to_pair(parse_formula("((x1|~x3)&(x2|x4))"))
    flip = lambda vs: tuple(tuple(1 - v for v in vec) for vec in vs)
    other_b = dataclasses.replace(inst, b_set=flip(inst.b_set))
    other_a = dataclasses.replace(inst, a_set=flip(inst.a_set))
    for k in range(inst.n_padded):
        assert tree_a_for(inst, k) == tree_a_for(other_b, k)
        assert tree_b_for(inst, k) == tree_b_for(other_a, k)
    # above the input gadgets the shapes never change
    assert len({_leaf_pruned(tree_a_for(inst, k)) for k in range(inst.n_padded)}) == 1
    assert len({_leaf_pruned(tree_b_for(inst, k)) for k in range(inst.n_padded)}) == 1


def test_final_trees_single_variable():
    inst = x1()
    final = build_final_subtree(inst)
    assert final.exponent == 1
    # 3 binary-tree nodes, one chain node per leaf, then the two a-gadgets (3 + 2)
    assert final.t_a.size == 3 + 2 * 1 + 3 + 2 - 2
    assert final.t_a.size == final_tree_sizes(inst)[0] == 8
    assert final.t_a.height == final.t_b.height == 2 * 1 + final.gadget_height
    assert contains(final.t_a, final.t_b)
    assert oracle_contains(final.t_a, final.t_b)


def test_final_trees_contradiction():
    final = build_final_subtree(split_to_pair(parse_formula("(x1&~x1)")))
    assert not contains(final.t_a, final.t_b)


def test_final_exhaustive_small():
    for f in all_formulas(max_s=3, max_n=3):
        final = build_final_subtree(split_to_pair(f))
        assert contains(final.t_a, final.t_b) == brute_force_sat(f).satisfiable, str(f)


def test_final_random_and_structure():
    for seed in range(80):
        f = random_formula(1 + seed % 6, 1 + seed % 16, seed)
        inst = split_to_pair(f)
        final = build_final_subtree(inst)
        x = skeleton_exponent(inst.n_padded)
        assert final.t_a.height == final.t_b.height == 2 * x + gadget_height(inst)
        assert max(final.t_a.max_children, final.t_b.max_children) <= 4
        assert (final.t_a.size, final.t_b.size) == final_tree_sizes(inst)
        bound_a, bound_b = final_tree_bounds(inst.n_padded, f.size)
        if f.covers_all_vars:
            assert final.t_a.size <= bound_a and final.t_b.size <= bound_b
        assert contains(final.t_a, final.t_b) == brute_force_sat(f).satisfiable


def test_degenerate_single_assignment():
    inst = x1()
    one = dataclasses.replace(inst, a_set=inst.a_set[1:], b_set=inst.b_set[1:])
    final = build_final_subtree(one)
    assert final.exponent == 0
    assert contains(final.t_a, final.t_b)
    assert (final.t_a.size, final.t_b.size) == final_tree_sizes(one)


def test_skeleton_exponent():
    assert [skeleton_exponent(n) for n in (1, 2, 3, 4, 5, 8, 9)] == [0, 1, 2, 2, 3, 3, 4]


def test_bound_constants_exported():
    assert final_tree_bounds(2, 3) == (T_A_BOUND_CONSTANT * 6, T_B_BOUND_CONSTANT * 18)


def test_index_checks():
    with pytest.raises(IndexError):
        tree_a_for(x1(), 2)
    with pytest.raises(IndexError):
        tree_b_for(x1(), -1)
