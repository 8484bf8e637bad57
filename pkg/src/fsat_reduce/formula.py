"""deMorgan formulas: binary AND/OR trees over possibly-negated variable leaves.

Nodes live in a flat tuple in post-order (left subtree, right subtree, then
the gate), with the root last.  Every constructor in this module normalizes
to that order, so dataclass equality is structural equality of ASTs.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterator, Mapping, Sequence, Union

AND = "&"
OR = "|"

DEFAULT_SAT_CAP = 24


class FormulaError(ValueError):
    """Raised for structurally invalid formulas or bad evaluation input."""


class FormulaSyntaxError(FormulaError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


@dataclass(frozen=True)
class Leaf:
    var: int
    negated: bool = False


@dataclass(frozen=True)
class Gate:
    op: str
    left: int
    right: int


FormulaNode = Union[Leaf, Gate]
Assignment = tuple[int, ...]


@dataclass(frozen=True)
class Formula:
    nodes: tuple[FormulaNode, ...]
    root: int
    num_vars: int
    # generator flags such as partial variable coverage; not part of identity
    metadata: Mapping[str, object] = field(
        default_factory=lambda: MappingProxyType({}), compare=False, hash=False
    )

    def __post_init__(self) -> None:
        _check_tree(self.nodes, self.root, leaf_type=Leaf)
        for node in self.nodes:
            if isinstance(node, Leaf) and not 1 <= node.var <= self.num_vars:
                raise FormulaError(
                    f"leaf variable x{node.var} outside 1..{self.num_vars}"
                )

    @property
    def size(self) -> int:
        """Number of leaves."""
        return sum(1 for node in self.nodes if isinstance(node, Leaf))

    @property
    def num_gates(self) -> int:
        return len(self.nodes) - self.size

    @property
    def height(self) -> int:
        return node_heights(self.nodes)[self.root]

    def leaves(self) -> Iterator[Leaf]:
        for node in self.nodes:
            if isinstance(node, Leaf):
                yield node

    def used_vars(self) -> set[int]:
        return {leaf.var for leaf in self.leaves()}

    @property
    def covers_all_vars(self) -> bool:
        return self.used_vars() == set(range(1, self.num_vars + 1))

    def __str__(self) -> str:
        return render_formula(self)


def _check_tree(nodes: Sequence[object], root: int, leaf_type: type) -> None:
    """Validate post-order layout: one parent per non-root node, root last."""
    if not nodes:
        raise FormulaError("formula has no nodes")
    if root != len(nodes) - 1:
        raise FormulaError("root must be the last node in post-order")
    parents = [0] * len(nodes)
    for idx, node in enumerate(nodes):
        if isinstance(node, Gate):
            if node.op not in (AND, OR):
                raise FormulaError(f"unknown gate op {node.op!r}")
            for child in (node.left, node.right):
                if not 0 <= child < idx:
                    raise FormulaError(f"gate {idx} has child {child} out of post-order")
                parents[child] += 1
        elif not isinstance(node, leaf_type):
            raise FormulaError(f"unexpected node {node!r}")
    for idx, count in enumerate(parents):
        expected = 0 if idx == root else 1
        if count != expected:
            raise FormulaError(f"node {idx} has {count} parents")


def node_heights(nodes: Sequence[object]) -> list[int]:
    """Height of every node; leaves have height 1."""
    heights = [1] * len(nodes)
    for idx, node in enumerate(nodes):
        if isinstance(node, Gate):
            heights[idx] = 1 + max(heights[node.left], heights[node.right])
    return heights


def subtree_leaf_counts(nodes: Sequence[object]) -> list[int]:
    counts = [1] * len(nodes)
    for idx, node in enumerate(nodes):
        if isinstance(node, Gate):
            counts[idx] = counts[node.left] + counts[node.right]
    return counts


# -- construction helpers -------------------------------------------------

class _Emitter:
    """Collects nodes in post-order while a tree is built bottom-up."""

    def __init__(self) -> None:
        self.nodes: list[FormulaNode] = []

    def leaf(self, var: int, negated: bool = False) -> int:
        self.nodes.append(Leaf(var, negated))
        return len(self.nodes) - 1

    def gate(self, op: str, left: int, right: int) -> int:
        self.nodes.append(Gate(op, left, right))
        return len(self.nodes) - 1


def var(v: int, negated: bool = False) -> Formula:
    return Formula((Leaf(v, negated),), 0, v)


def combine(op: str, left: Formula, right: Formula) -> Formula:
    """Build the gate ``(left op right)`` from two formulas."""
    shift = len(left.nodes)
    moved = tuple(
        Gate(n.op, n.left + shift, n.right + shift) if isinstance(n, Gate) else n
        for n in right.nodes
    )
    nodes = left.nodes + moved + (Gate(op, left.root, right.root + shift),)
    return Formula(nodes, len(nodes) - 1, max(left.num_vars, right.num_vars))


# -- text format ----------------------------------------------------------

def parse_formula(text: str) -> Formula:
    """Parse the fully parenthesized grammar, e.g. ``((x1&x2)|~x3)``.

    ``num_vars`` is the largest variable index that appears.
    """
    out = _Emitter()
    pos = 0
    n = len(text)

    def skip_ws() -> None:
        nonlocal pos
        while pos < n and text[pos].isspace():
            pos += 1

    def parse_node() -> int:
        nonlocal pos
        skip_ws()
        if pos >= n:
            raise FormulaSyntaxError("unexpected end of input", pos)
        ch = text[pos]
        if ch == "(":
            open_at = pos
            pos += 1
            left = parse_node()
            skip_ws()
            if pos >= n:
                raise FormulaSyntaxError("unbalanced parentheses", open_at)
            op = text[pos]
            if op not in (AND, OR):
                raise FormulaSyntaxError(f"expected '&' or '|', got {op!r}", pos)
            pos += 1
            right = parse_node()
            skip_ws()
            if pos >= n:
                raise FormulaSyntaxError("unbalanced parentheses", open_at)
            if text[pos] != ")":
                raise FormulaSyntaxError(f"expected ')', got {text[pos]!r}", pos)
            pos += 1
            return out.gate(op, left, right)
        negated = False
        if ch == "~":
            negated = True
            pos += 1
            skip_ws()
            if pos < n and text[pos] in "(~":
                raise FormulaSyntaxError("negation is only allowed on variables", pos)
        if pos >= n or text[pos] != "x":
            got = text[pos] if pos < n else "end of input"
            raise FormulaSyntaxError(f"expected variable, got {got!r}", pos)
        start = pos
        pos += 1
        digits_at = pos
        while pos < n and text[pos].isdigit():
            pos += 1
        digits = text[digits_at:pos]
        if not digits:
            raise FormulaSyntaxError("variable without index", start)
        if digits[0] == "0":
            raise FormulaSyntaxError("variable index must start with 1-9", digits_at)
        return out.leaf(int(digits), negated)

    root = parse_node()
    skip_ws()
    if pos != n:
        if text[pos] == ")":
            raise FormulaSyntaxError("unbalanced parentheses", pos)
        raise FormulaSyntaxError(f"trailing input {text[pos]!r}", pos)
    max_var = max(node.var for node in out.nodes if isinstance(node, Leaf))
    return Formula(tuple(out.nodes), root, max_var)


def render_formula(formula: Formula) -> str:
    parts: list[str] = []
    for node in formula.nodes:
        if isinstance(node, Leaf):
            parts.append(("~" if node.negated else "") + f"x{node.var}")
        else:
            right = parts.pop()
            left = parts.pop()
            parts.append(f"({left}{node.op}{right})")
    return parts[0]


def read_formula(path) -> Formula:
    with open(path, encoding="ascii") as fh:
        return parse_formula(fh.read())


# -- semantics ------------------------------------------------------------

def evaluate(formula: Formula, x: Sequence[int]) -> int:
    if len(x) != formula.num_vars:
        raise FormulaError(
            f"assignment has {len(x)} bits, formula has {formula.num_vars} variables"
        )
    values = [0] * len(formula.nodes)
    for idx, node in enumerate(formula.nodes):
        if isinstance(node, Leaf):
            values[idx] = (x[node.var - 1] & 1) ^ node.negated
        elif node.op == AND:
            values[idx] = values[node.left] & values[node.right]
        else:
            values[idx] = values[node.left] | values[node.right]
    return values[formula.root]


@dataclass(frozen=True)
class SatResult:
    satisfiable: bool
    witness: Assignment | None
    count: int


def _var_table(n: int, var_index: int) -> int:
    """Truth-table column of a variable over all 2^n assignments.

    Assignment ``t`` is the big-endian reading of the bits, so x1 is the most
    significant bit of ``t``.  Bit ``t`` of the result is x_{var_index+1}.
    """
    p = n - 1 - var_index
    half = 1 << p
    block = ((1 << half) - 1) << half
    width = half << 1
    total = 1 << n
    table = block
    while width < total:
        table |= table << width
        width <<= 1
    return table


def brute_force_sat(formula: Formula, cap: int = DEFAULT_SAT_CAP) -> SatResult:
    """Exhaustive satisfiability over all 2^n assignments.

    The whole truth table is carried as one 2^n-bit integer per node.
    """
    n = formula.num_vars
    if n > cap:
        raise FormulaError(f"{n} variables exceeds brute-force cap {cap}")
    full = (1 << (1 << n)) - 1
    columns = [_var_table(n, k) for k in range(n)]
    tables = [0] * len(formula.nodes)
    for idx, node in enumerate(formula.nodes):
        if isinstance(node, Leaf):
            col = columns[node.var - 1]
            tables[idx] = (full ^ col) if node.negated else col
        elif node.op == AND:
            tables[idx] = tables[node.left] & tables[node.right]
        else:
            tables[idx] = tables[node.left] | tables[node.right]
    table = tables[formula.root]
    count = table.bit_count()
    if not count:
        return SatResult(False, None, 0)
    t = (table & -table).bit_length() - 1
    witness = tuple((t >> (n - 1 - k)) & 1 for k in range(n))
    return SatResult(True, witness, count)


# -- random generation ----------------------------------------------------

def random_formula(n: int, s: int, seed: int) -> Formula:
    """Random formula with exactly ``s`` leaves over variables 1..n.

    Tree shape splits leaf counts uniformly; ops and polarities are fair coins.
    When ``s >= n`` every variable appears; otherwise a random subset is used
    and ``metadata["partial_coverage"]`` is set.
    """
    if n < 1 or s < 1:
        raise FormulaError("need n >= 1 and s >= 1")
    rng = random.Random(seed)
    if s >= n:
        leaf_vars = list(range(1, n + 1)) + [rng.randint(1, n) for _ in range(s - n)]
        rng.shuffle(leaf_vars)
    else:
        leaf_vars = rng.sample(range(1, n + 1), s)
    out = _Emitter()
    it = iter(leaf_vars)

    # explicit stack so large s does not hit the recursion limit
    stack: list[tuple[int, str | None]] = [(s, None)]
    built: list[int] = []
    while stack:
        count, op = stack.pop()
        if op is not None:
            right = built.pop()
            left = built.pop()
            built.append(out.gate(op, left, right))
        elif count == 1:
            built.append(out.leaf(next(it), rng.random() < 0.5))
        else:
            k = rng.randint(1, count - 1)
            gate_op = AND if rng.random() < 0.5 else OR
            stack.append((count, gate_op))
            stack.append((count - k, None))
            stack.append((k, None))
    meta = {"partial_coverage": True} if s < n else {}
    return Formula(tuple(out.nodes), len(out.nodes) - 1, n, MappingProxyType(meta))
