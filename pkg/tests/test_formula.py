import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fsat_reduce.formula import (
    AND,
    OR,
    Formula,
    FormulaError,
    FormulaSyntaxError,
    Gate,
    Leaf,
    brute_force_sat,
    evaluate,
    parse_formula,
    random_formula,
    render_formula,
)


def _python_oracle(text: str):
    """Compile the rendered text into a Python lambda; independent of evaluate."""
    expr = text.replace("&", " and ").replace("|", " or ").replace("~", " not ")
    return lambda x: int(bool(eval(expr, {}, {f"x{k + 1}": bool(b) for k, b in enumerate(x)})))


def test_parse_single_leaf():
    f = parse_formula("x1")
    assert f.nodes == (Leaf(1, False),)
    assert (f.size, f.num_vars, f.num_gates, f.height) == (1, 1, 0, 1)


def test_parse_and_with_negation():
    f = parse_formula("(x1 & ~x2)")
    assert f.nodes == (Leaf(1, False), Leaf(2, True), Gate(AND, 0, 1))
    assert (f.size, f.num_vars) == (2, 2)


def test_parse_nested_matches_hand_built_ast():
    f = parse_formula("((x1&x2)|~x1)")
    expected = Formula(
        (Leaf(1), Leaf(2), Gate(AND, 0, 1), Leaf(1, True), Gate(OR, 2, 3)), 4, 2
    )
    assert f == expected
    assert (f.size, f.num_vars, f.num_gates, f.height) == (3, 2, 2, 3)


def test_parse_gap_in_variable_numbers_sets_max():
    f = parse_formula("(x1|x5)")
    assert f.num_vars == 5
    assert not f.covers_all_vars


@pytest.mark.parametrize(
    "text, offset",
    [
        ("(x1&x2", 0),
        ("x1)", 2),
        ("x0", 1),
        ("(x1^x2)", 3),
        ("~(x1&x2)", 1),
        ("(x1&)", 4),
        ("", 0),
        ("x", 0),
        ("x1 x2", 3),
    ],
)
def test_parse_errors_carry_offset(text, offset):
    with pytest.raises(FormulaSyntaxError) as info:
        parse_formula(text)
    assert info.value.offset == offset


def test_render_canonical_form():
    assert render_formula(Formula((Leaf(1),), 0, 1)) == "x1"
    assert render_formula(parse_formula(" ( x1 &  ~x2 ) ")) == "(x1&~x2)"


def test_round_trip_thousand_random_formulas():
    for seed in range(1000):
        f = random_formula(1 + seed % 5, 1 + seed % 13, seed)
        text = render_formula(f)
        again = parse_formula(text)
        assert again.nodes == f.nodes
        assert render_formula(again) == text


@pytest.mark.parametrize(
    "text, x, expected",
    [("(x1&~x2)", (1, 0), 1), ("(x1|x2)", (0, 0), 0), ("((x1&x2)|~x3)", (0, 0, 0), 1)],
)
def test_evaluate_examples(text, x, expected):
    assert evaluate(parse_formula(text), x) == expected


def test_evaluate_rejects_wrong_length():
    with pytest.raises(FormulaError):
        evaluate(parse_formula("(x1&x2)"), (1,))


@given(st.integers(1, 4), st.integers(1, 10), st.integers(0, 2**32))
@settings(max_examples=200, deadline=None)
def test_evaluate_and_count_match_python_oracle(n, s, seed):
    f = random_formula(n, s, seed)
    oracle = _python_oracle(render_formula(f))
    count = 0
    for x in itertools.product((0, 1), repeat=n):
        assert evaluate(f, x) == oracle(x)
        count += evaluate(f, x)
    result = brute_force_sat(f)
    assert result.count == count
    assert result.satisfiable == (count > 0)
    if result.satisfiable:
        assert evaluate(f, result.witness) == 1


def test_brute_force_examples():
    assert brute_force_sat(parse_formula("(x1&~x1)")) == brute_force_sat(parse_formula("(~x1&x1)"))
    r = brute_force_sat(parse_formula("(x1&~x1)"))
    assert (r.satisfiable, r.witness, r.count) == (False, None, 0)
    r = brute_force_sat(parse_formula("x1"))
    assert (r.satisfiable, r.witness, r.count) == (True, (1,), 1)
    assert brute_force_sat(parse_formula("((x1&x2)|x3)")).count == 5


def test_brute_force_cap():
    with pytest.raises(FormulaError):
        brute_force_sat(parse_formula("x25"))
    assert brute_force_sat(parse_formula("x25"), cap=25).count == 2**24


def test_random_formula_smallest():
    assert render_formula(random_formula(1, 1, 7)) in ("x1", "~x1")


def test_random_formula_deterministic():
    assert random_formula(3, 8, 0) == random_formula(3, 8, 0)
    assert random_formula(3, 8, 0).nodes != random_formula(3, 8, 1).nodes


def test_random_formula_invariant_sweep():
    for seed in range(1000):
        f = random_formula(4, 10, seed)
        assert f.size == 10
        assert f.num_gates == 9
        assert f.covers_all_vars
        assert all(isinstance(n, Leaf) or n.op in (AND, OR) for n in f.nodes)
        # re-validation through the constructor
        Formula(f.nodes, f.root, f.num_vars)


def test_random_formula_partial_coverage_flag():
    f = random_formula(5, 3, 11)
    assert f.metadata["partial_coverage"] is True
    assert f.size == 3 and len(f.used_vars()) == 3
    assert "partial_coverage" not in random_formula(3, 3, 11).metadata


@pytest.mark.parametrize(
    "nodes, root",
    [
        ((Leaf(1), Gate(AND, 0, 0)), 1),  # node with two parents
        ((Leaf(1), Leaf(1)), 1),  # detached node
        ((Gate(AND, 1, 2), Leaf(1), Leaf(1)), 0),  # not post-order
    ],
)
def test_invalid_structures_rejected(nodes, root):
    with pytest.raises(FormulaError):
        Formula(nodes, root, 1)


def test_leaf_var_must_be_in_range():
    with pytest.raises(FormulaError):
        Formula((Leaf(3),), 0, 2)
