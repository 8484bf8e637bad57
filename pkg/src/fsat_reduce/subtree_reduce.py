"""Formula-Pair to rooted subtree isomorphism.

Each gate g yields a pair of trees of equal height, ``T_a^g`` built from
``a_i`` alone and ``T_b^g`` from ``b_j`` alone, with T_a^g contained in T_b^g
exactly when g outputs 1.  Pendant chains of length 1 and 2 fix which arm of
T_a can land on which arm of T_b; a one-node connector sits above every
recursive subtree.

AND (same skeleton on both sides)::

    v0 -> v1 [pendant 1] -> v3 [pendant 2] -> connector -> T^1
    v0 -> v2 [pendant 2] -> v4 [pendant 1] -> connector -> T^2

OR, a side: ``v0 -> i1 -> (v1 arm)`` and ``v0 -> i2 -> (v2 arm)``.
OR, b side: ``v0 -> i1 -> (v1 arm, v2 arm)`` and
``v0 -> i2 -> v3 [pendant 2] -> v6 [pendant 2] -> connector -> U_g``,
where ``U_g`` merges the roots of both children's a-trees at ``a = 0^m``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .fpair import SIDE_A, BitVector, FormulaPairInstance, PairLeaf
from .formula import AND
from .rooted_tree import RootedTree, TreeBuilder

# Size bounds, used by acceptance; derivations in final_tree_bounds.
T_A_BOUND_CONSTANT = 40
T_B_BOUND_CONSTANT = 58

AND_NODES = 13
OR_A_NODES = 15
OR_B_NODES = 22


def _check_index(inst: FormulaPairInstance, i: int) -> None:
    if not 0 <= i < inst.n_padded:
        raise IndexError(f"index {i} outside 0..{inst.n_padded - 1}")


def _and_skeleton(b: TreeBuilder, root: int) -> tuple[int, int]:
    """Emit the AND/OR arm pair below ``root``; returns both connector nodes."""
    return _arm(b, b.node(root), 1, 2), _arm(b, b.node(root), 2, 1)


def _arm(b: TreeBuilder, top: int, first_pendant: int, second_pendant: int) -> int:
    b.path(top, first_pendant)
    mid = b.node(top)
    b.path(mid, second_pendant)
    return b.node(mid)


def emit_tree_a(
    b: TreeBuilder,
    inst: FormulaPairInstance,
    a: BitVector,
    parent: int | None = None,
    node: int | None = None,
    at: int | None = None,
) -> int:
    """Emit ``T_a`` for gate ``node`` (default: the root) and return its root.

    With ``at`` the gadget root is the existing node ``at`` instead of a new one.
    """
    node = inst.root if node is None else node
    # explicit stack: (gate, parent, at); gadget roots are created on the way down
    stack = [(node, parent, at)]
    top = None
    while stack:
        idx, par, fixed = stack.pop()
        root = fixed if fixed is not None else b.node(par)
        if top is None:
            top = root
        gate = inst.nodes[idx]
        if isinstance(gate, PairLeaf):
            bit = a[gate.slot] if gate.side == SIDE_A else 0
            for _ in range(2 - bit):
                b.node(root)
            continue
        if gate.op == AND:
            c1, c2 = _and_skeleton(b, root)
        else:
            c1 = _arm(b, b.node(b.node(root)), 1, 2)
            c2 = _arm(b, b.node(b.node(root)), 2, 1)
        stack.append((gate.right, c2, None))
        stack.append((gate.left, c1, None))
    return top


def emit_tree_b(
    b: TreeBuilder,
    inst: FormulaPairInstance,
    bits: BitVector,
    parent: int | None = None,
) -> int:
    zeros = (0,) * inst.m_a
    stack = [(inst.root, parent)]
    top = None
    while stack:
        idx, par = stack.pop()
        root = b.node(par)
        if top is None:
            top = root
        gate = inst.nodes[idx]
        if isinstance(gate, PairLeaf):
            bit = bits[gate.slot] if gate.side != SIDE_A else 0
            for _ in range(1 + bit):
                b.node(root)
            continue
        if gate.op == AND:
            c1, c2 = _and_skeleton(b, root)
        else:
            both = b.node(root)
            c1 = _arm(b, b.node(both), 1, 2)
            c2 = _arm(b, b.node(both), 2, 1)
            conn = _arm(b, b.node(b.node(root)), 2, 2)
            merged = b.node(conn)
            emit_tree_a(b, inst, zeros, node=gate.left, at=merged)
            emit_tree_a(b, inst, zeros, node=gate.right, at=merged)
        stack.append((gate.right, c2))
        stack.append((gate.left, c1))
    return top


def tree_a_for(inst: FormulaPairInstance, i: int) -> RootedTree:
    _check_index(inst, i)
    b = TreeBuilder()
    root = emit_tree_a(b, inst, inst.a_set[i])
    return b.build(root)


def tree_b_for(inst: FormulaPairInstance, j: int) -> RootedTree:
    _check_index(inst, j)
    b = TreeBuilder()
    root = emit_tree_b(b, inst, inst.b_set[j])
    return b.build(root)


def universal_tree(inst: FormulaPairInstance) -> RootedTree:
    b = TreeBuilder()
    root = emit_tree_a(b, inst, (0,) * inst.m_a)
    return b.build(root)


def gate_tree_pair(inst: FormulaPairInstance, node: int, i: int, j: int) -> tuple[RootedTree, RootedTree]:
    """Trees for the sub-formula rooted at pair-formula node ``node``."""
    _check_index(inst, i)
    _check_index(inst, j)
    sub = subinstance(inst, node)
    return tree_a_for(sub, i), tree_b_for(sub, j)


def subinstance(inst: FormulaPairInstance, node: int) -> FormulaPairInstance:
    """The instance restricted to the sub-formula at ``node`` (slots kept)."""
    keep: list[int] = []
    stack = [node]
    while stack:
        u = stack.pop()
        keep.append(u)
        g = inst.nodes[u]
        if not isinstance(g, PairLeaf):
            stack.extend((g.left, g.right))
    keep.sort()
    index = {u: k for k, u in enumerate(keep)}
    a_slots = sorted(inst.nodes[u].slot for u in keep if isinstance(inst.nodes[u], PairLeaf) and inst.nodes[u].side == SIDE_A)
    b_slots = sorted(inst.nodes[u].slot for u in keep if isinstance(inst.nodes[u], PairLeaf) and inst.nodes[u].side != SIDE_A)
    a_re = {s: k for k, s in enumerate(a_slots)}
    b_re = {s: k for k, s in enumerate(b_slots)}
    nodes = []
    for u in keep:
        g = inst.nodes[u]
        if isinstance(g, PairLeaf):
            slot = (a_re if g.side == SIDE_A else b_re)[g.slot]
            nodes.append(PairLeaf(g.side, slot))
        else:
            nodes.append(type(g)(g.op, index[g.left], index[g.right]))
    return FormulaPairInstance(
        nodes=tuple(nodes),
        root=len(nodes) - 1,
        a_set=tuple(tuple(a[s] for s in a_slots) for a in inst.a_set),
        b_set=tuple(tuple(v[s] for s in b_slots) for v in inst.b_set),
        m_a=len(a_slots),
        m_b=len(b_slots),
        source_n=inst.source_n,
        source_s=len(a_slots) + len(b_slots),
        a_count=inst.a_count,
        b_count=inst.b_count,
    )


# -- closed-form size accounting -----------------------------------------

def _sizes(inst: FormulaPairInstance, a: BitVector | None, bvec: BitVector | None) -> tuple[list[int], list[int]]:
    """Per-node |T_a| (bits ``a``, or 0^m) and |T_b| (bits ``bvec``)."""
    ta = [0] * len(inst.nodes)
    tu = [0] * len(inst.nodes)
    tb = [0] * len(inst.nodes)
    for idx, g in enumerate(inst.nodes):
        if isinstance(g, PairLeaf):
            if g.side == SIDE_A:
                ta[idx] = 3 - (a[g.slot] if a is not None else 0)
                tb[idx] = 2
            else:
                ta[idx] = 3
                tb[idx] = 2 + (bvec[g.slot] if bvec is not None else 0)
            tu[idx] = 3
        elif g.op == AND:
            ta[idx] = AND_NODES + ta[g.left] + ta[g.right]
            tu[idx] = AND_NODES + tu[g.left] + tu[g.right]
            tb[idx] = AND_NODES + tb[g.left] + tb[g.right]
        else:
            ta[idx] = OR_A_NODES + ta[g.left] + ta[g.right]
            tu[idx] = OR_A_NODES + tu[g.left] + tu[g.right]
            tb[idx] = OR_B_NODES + tb[g.left] + tb[g.right] + tu[g.left] + tu[g.right] - 1
    return ta, tb if bvec is not None else tu


def tree_a_size(inst: FormulaPairInstance, i: int) -> int:
    return _sizes(inst, inst.a_set[i], None)[0][inst.root]


def tree_b_size(inst: FormulaPairInstance, j: int) -> int:
    return _sizes(inst, None, inst.b_set[j])[1][inst.root]


def universal_tree_size(inst: FormulaPairInstance) -> int:
    return _sizes(inst, None, None)[1][inst.root]


def gadget_height(inst: FormulaPairInstance) -> int:
    """Common height of every T_a, T_b and U for this formula."""
    h = [0] * len(inst.nodes)
    for idx, g in enumerate(inst.nodes):
        if isinstance(g, PairLeaf):
            h[idx] = 1
        else:
            h[idx] = (4 if g.op == AND else 5) + max(h[g.left], h[g.right])
    return h[inst.root]


def skeleton_exponent(n_padded: int) -> int:
    """Smallest x with 2^x >= N."""
    return max(0, (n_padded - 1).bit_length())


def final_tree_sizes(inst: FormulaPairInstance) -> tuple[int, int]:
    n = inst.n_padded
    x = skeleton_exponent(n)
    leaves = 1 << x
    binary = 2 * leaves - 1
    a_sizes = [tree_a_size(inst, i) for i in range(n)]
    t_a = binary + leaves * (x - 1) + sum(a_sizes) + (leaves - n) * a_sizes[-1]
    t_b = (
        binary
        + (leaves - 1) * (x - 1 + universal_tree_size(inst))
        + (binary - 1)
        + sum(tree_b_size(inst, j) - 1 for j in range(n))
    )
    return t_a, t_b


def final_tree_bounds(n_padded: int, s: int) -> tuple[int, int]:
    """Upper bounds ``C1 N s`` and ``C2 N s^2`` for the final tree sizes.

    Valid whenever ``x <= s``, which holds when every variable occurs.  Per
    gadget |T_a| <= 18s - 15 (a gate adds at most 15 nodes, a leaf 3) and
    |T_b| <= 12 s^2 - 9 by induction using s1*s2 >= s - 1.  The skeleton adds
    2^x (x + 1) nodes to T_A and 2^x (x + 4) to T_B, with 2^x < 2N.
    """
    return T_A_BOUND_CONSTANT * n_padded * s, T_B_BOUND_CONSTANT * n_padded * s * s


@dataclass(frozen=True)
class FinalTrees:
    t_a: RootedTree
    t_b: RootedTree
    exponent: int
    gadget_height: int


def build_final_subtree(inst: FormulaPairInstance) -> FinalTrees:
    """Route every a-tree through a shared skeleton so one lands on a b-tree.

    T_A: complete binary tree with 2^x leaves, each extended by a chain of x
    nodes ending at an a-tree (slots past N repeat the last one).  T_B: the
    same binary tree; its first 2^x - 1 leaves get a chain ending at a
    universal tree, the last roots a second binary tree whose leaves 1..N are
    the b-trees and whose remaining leaves stay bare.
    """
    n = inst.n_padded
    x = skeleton_exponent(n)
    zeros = (0,) * inst.m_a

    ba = TreeBuilder()
    for k, leaf in enumerate(_complete_binary(ba, x)):
        end_parent = ba.path(leaf, x - 1) if x else None
        a = inst.a_set[min(k, n - 1)]
        if x:
            emit_tree_a(ba, inst, a, parent=end_parent)
        else:
            emit_tree_a(ba, inst, a, at=leaf)

    bb = TreeBuilder()
    top_leaves = _complete_binary(bb, x)
    for leaf in top_leaves[:-1]:
        emit_tree_a(bb, inst, zeros, parent=bb.path(leaf, x - 1))
    bottom = _complete_binary(bb, x, at=top_leaves[-1])
    for j, leaf in enumerate(bottom[:n]):
        _emit_b_at(bb, inst, inst.b_set[j], leaf)

    return FinalTrees(ba.build(0), bb.build(0), x, gadget_height(inst))


def _emit_b_at(b: TreeBuilder, inst: FormulaPairInstance, bits: BitVector, at: int) -> None:
    """Emit T_b with its root identified with the existing leaf ``at``."""
    tmp = TreeBuilder()
    emit_tree_b(tmp, inst, bits)
    mapping = {0: at}
    for u, kids in enumerate(tmp.children):
        for c in kids:
            mapping[c] = b.node(mapping[u])


def _complete_binary(b: TreeBuilder, depth: int, at: int | None = None) -> list[int]:
    """Emit a complete binary tree of the given depth; returns leaves left to right."""
    level = [at if at is not None else b.node()]
    for _ in range(depth):
        level = [b.node(u) for u in level for _ in range(2)]
    return level
