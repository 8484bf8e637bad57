"""Formula-SAT to Formula-Pair by splitting the variables in half.

Variables 1..ceil(n/2) form the A side and the rest form the B side.  Every
leaf becomes its own input slot, so the pair formula is single-use and
negation-free: a leaf's polarity is folded into the vectors of its side.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence, Union

from .formula import AND, Formula, FormulaError, Gate, Leaf, _check_tree

SIDE_A = "A"
SIDE_B = "B"

DEFAULT_PAIR_CAP = 1 << 24

BitVector = tuple[int, ...]


@dataclass(frozen=True)
class PairLeaf:
    side: str
    slot: int


PairNode = Union[PairLeaf, Gate]


@dataclass(frozen=True)
class FormulaPairInstance:
    nodes: tuple[PairNode, ...]
    root: int
    a_set: tuple[BitVector, ...]
    b_set: tuple[BitVector, ...]
    m_a: int
    m_b: int
    source_n: int
    source_s: int
    # set sizes before padding
    a_count: int
    b_count: int

    def __post_init__(self) -> None:
        _check_tree(self.nodes, self.root, leaf_type=PairLeaf)
        slots = {SIDE_A: [], SIDE_B: []}
        for node in self.nodes:
            if isinstance(node, PairLeaf):
                slots[node.side].append(node.slot)
        if sorted(slots[SIDE_A]) != list(range(self.m_a)) or sorted(
            slots[SIDE_B]
        ) != list(range(self.m_b)):
            raise FormulaError("pair leaves must use every slot exactly once")
        if len(self.a_set) != len(self.b_set):
            raise FormulaError("A and B must have equal size after padding")
        if any(len(a) != self.m_a for a in self.a_set) or any(
            len(b) != self.m_b for b in self.b_set
        ):
            raise FormulaError("vector length does not match side arity")

    @property
    def n_padded(self) -> int:
        return len(self.a_set)

    @property
    def size(self) -> int:
        return self.m_a + self.m_b

    def leaves(self):
        for node in self.nodes:
            if isinstance(node, PairLeaf):
                yield node


def a_side_vars(n: int) -> int:
    return (n + 1) // 2


def split_to_pair(formula: Formula) -> FormulaPairInstance:
    n = formula.num_vars
    if n < 1:
        raise FormulaError("formula needs at least one variable")
    n_a = a_side_vars(n)

    nodes: list[PairNode] = []
    a_leaves: list[Leaf] = []
    b_leaves: list[Leaf] = []
    for node in formula.nodes:
        if isinstance(node, Leaf):
            if node.var <= n_a:
                nodes.append(PairLeaf(SIDE_A, len(a_leaves)))
                a_leaves.append(node)
            else:
                nodes.append(PairLeaf(SIDE_B, len(b_leaves)))
                b_leaves.append(node)
        else:
            nodes.append(node)

    def project(leaves: Sequence[Leaf], offset: int, half: Sequence[int]) -> BitVector:
        return tuple(half[leaf.var - 1 - offset] ^ leaf.negated for leaf in leaves)

    a_set = [project(a_leaves, 0, h) for h in itertools.product((0, 1), repeat=n_a)]
    b_set = [project(b_leaves, n_a, h) for h in itertools.product((0, 1), repeat=n - n_a)]
    a_count, b_count = len(a_set), len(b_set)
    size = max(a_count, b_count)
    # repeating an existing element cannot create a new satisfying pair
    a_set += [a_set[-1]] * (size - a_count)
    b_set += [b_set[-1]] * (size - b_count)

    return FormulaPairInstance(
        nodes=tuple(nodes),
        root=formula.root,
        a_set=tuple(a_set),
        b_set=tuple(b_set),
        m_a=len(a_leaves),
        m_b=len(b_leaves),
        source_n=n,
        source_s=formula.size,
        a_count=a_count,
        b_count=b_count,
    )


def assignment_indices(n: int, x: Sequence[int]) -> tuple[int, int]:
    """Positions of the two halves of a full assignment in ``a_set``/``b_set``."""
    if len(x) != n:
        raise FormulaError(f"assignment has {len(x)} bits, expected {n}")
    n_a = a_side_vars(n)
    i = 0
    for bit in x[:n_a]:
        i = (i << 1) | (bit & 1)
    j = 0
    for bit in x[n_a:]:
        j = (j << 1) | (bit & 1)
    return i, j


def evaluate_nodes(nodes: Sequence[PairNode], a: BitVector, b: BitVector) -> list[int]:
    """Output of every pair-formula node on inputs ``(a, b)``."""
    values = [0] * len(nodes)
    for idx, node in enumerate(nodes):
        if isinstance(node, PairLeaf):
            values[idx] = (a if node.side == SIDE_A else b)[node.slot]
        elif node.op == AND:
            values[idx] = values[node.left] & values[node.right]
        else:
            values[idx] = values[node.left] | values[node.right]
    return values


def _check_index(inst: FormulaPairInstance, i: int, name: str) -> None:
    if not 0 <= i < inst.n_padded:
        raise IndexError(f"{name}={i} outside 0..{inst.n_padded - 1}")


def evaluate_pair(inst: FormulaPairInstance, i: int, j: int) -> int:
    _check_index(inst, i, "i")
    _check_index(inst, j, "j")
    return evaluate_nodes(inst.nodes, inst.a_set[i], inst.b_set[j])[inst.root]


def brute_force_pair(
    inst: FormulaPairInstance, cap: int = DEFAULT_PAIR_CAP
) -> tuple[int, int] | None:
    """First ``(i, j)`` in row-major order with ``F(a_i, b_j) = 1``."""
    if inst.n_padded ** 2 > cap:
        raise FormulaError(f"{inst.n_padded}^2 pair evaluations exceeds cap {cap}")
    for i, j in itertools.product(range(inst.n_padded), repeat=2):
        if evaluate_nodes(inst.nodes, inst.a_set[i], inst.b_set[j])[inst.root]:
            return i, j
    return None
