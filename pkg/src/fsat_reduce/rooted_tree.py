"""Unordered rooted trees and subtree containment.

``T1`` is contained in ``T2`` when T1's nodes map injectively into T2 so that
children land on children of the image of their parent.  The root of T1 may
land anywhere in T2.
"""

from __future__ import annotations

import itertools
import sys
from dataclasses import dataclass
from typing import Sequence, TextIO

ORACLE_CAP = 14


class TreeFormatError(ValueError):
    pass


class TreeBuilder:
    def __init__(self) -> None:
        self.children: list[list[int]] = []

    def node(self, parent: int | None = None) -> int:
        self.children.append([])
        idx = len(self.children) - 1
        if parent is not None:
            self.children[parent].append(idx)
        return idx

    def path(self, parent: int, length: int) -> int:
        """Hang ``length`` new nodes below ``parent`` in a chain; return the last."""
        for _ in range(length):
            parent = self.node(parent)
        return parent

    def __len__(self) -> int:
        return len(self.children)

    def build(self, root: int = 0) -> "RootedTree":
        return RootedTree(tuple(tuple(c) for c in self.children), root)


@dataclass(frozen=True, eq=False)
class RootedTree:
    children: tuple[tuple[int, ...], ...]
    root: int

    def __post_init__(self) -> None:
        n = len(self.children)
        if not 0 <= self.root < n:
            raise TreeFormatError("root outside node store")
        parents = [0] * n
        for kids in self.children:
            for c in kids:
                if not 0 <= c < n:
                    raise TreeFormatError(f"child {c} outside node store")
                parents[c] += 1
        if parents[self.root] != 0 or any(
            p != 1 for idx, p in enumerate(parents) if idx != self.root
        ):
            raise TreeFormatError("every non-root node needs exactly one parent")
        order = self.preorder()
        if len(order) != n:
            raise TreeFormatError("node store is not a single tree")
        heights = [0] * n
        for u in reversed(order):
            kids = self.children[u]
            if kids:
                heights[u] = 1 + max(heights[c] for c in kids)
        object.__setattr__(self, "_heights", heights)
        object.__setattr__(self, "_order", order)

    def preorder(self) -> list[int]:
        order = []
        stack = [self.root]
        seen = 0
        while stack:
            u = stack.pop()
            order.append(u)
            seen += 1
            if seen > len(self.children):
                raise TreeFormatError("cycle in node store")
            stack.extend(reversed(self.children[u]))
        return order

    def postorder(self) -> list[int]:
        # children before parents
        return list(reversed(self._order))

    @property
    def size(self) -> int:
        return len(self.children)

    @property
    def height(self) -> int:
        return self._heights[self.root]

    def node_height(self, u: int) -> int:
        return self._heights[u]

    @property
    def max_children(self) -> int:
        return max(len(kids) for kids in self.children)

    def __eq__(self, other: object) -> bool:
        """Equality as unordered rooted trees."""
        if not isinstance(other, RootedTree):
            return NotImplemented
        return canonical_encoding(self) == canonical_encoding(other)

    def __hash__(self) -> int:
        return hash(canonical_encoding(self))

    def __len__(self) -> int:
        return self.size


@dataclass(frozen=True)
class TreeStats:
    size: int
    height: int
    max_children: int


def tree_stats(tree: RootedTree) -> TreeStats:
    return TreeStats(tree.size, tree.height, tree.max_children)


def single_node() -> RootedTree:
    return RootedTree(((),), 0)


def graft(builder: TreeBuilder, tree: RootedTree, parent: int | None = None, at: int | None = None) -> int:
    """Copy ``tree`` into ``builder``.

    The copy's root is a new child of ``parent``, or the existing node ``at``
    (whose child list then absorbs the root's children).
    """
    mapping = {tree.root: at if at is not None else builder.node(parent)}
    stack = [tree.root]
    while stack:
        u = stack.pop()
        for c in tree.children[u]:
            mapping[c] = builder.node(mapping[u])
            stack.append(c)
    return mapping[tree.root]


# -- canonical forms and codec -------------------------------------------

def canonical_encoding(tree: RootedTree, node: int | None = None) -> str:
    """Balanced parentheses with children sorted by their own encodings."""
    enc: dict[int, str] = {}
    top = tree.root if node is None else node
    for u in tree.postorder():
        kids = sorted(enc.pop(c) for c in tree.children[u])
        enc[u] = "(" + "".join(kids) + ")"
        if u == top:
            return enc[u]
    raise KeyError(top)


def write_tree(tree: RootedTree, dest: TextIO) -> None:
    dest.write(canonical_encoding(tree) + "\n")


def parse_tree(text: str) -> RootedTree:
    text = "".join(text.split())
    if not text:
        raise TreeFormatError("empty tree encoding")
    builder = TreeBuilder()
    stack: list[int] = []
    closed_root = False
    for pos, ch in enumerate(text):
        if closed_root:
            raise TreeFormatError(f"content after the root closes at offset {pos}")
        if ch == "(":
            builder.node(stack[-1] if stack else None)
            stack.append(len(builder) - 1)
        elif ch == ")":
            if not stack:
                raise TreeFormatError(f"unbalanced ')' at offset {pos}")
            stack.pop()
            closed_root = not stack
        else:
            raise TreeFormatError(f"unexpected character {ch!r} at offset {pos}")
    if stack:
        raise TreeFormatError("unbalanced '(': input ended inside a node")
    return builder.build(0)


def read_tree(source: TextIO) -> RootedTree:
    return parse_tree(source.read())


# -- containment ----------------------------------------------------------

def _class_ids(trees: Sequence[RootedTree]) -> list[list[int]]:
    """AHU isomorphism-class ids shared across ``trees``."""
    table: dict[tuple[int, ...], int] = {}
    out = []
    for tree in trees:
        ids = [0] * tree.size
        for u in tree.postorder():
            key = tuple(sorted(ids[c] for c in tree.children[u]))
            ids[u] = table.setdefault(key, len(table))
        out.append(ids)
    return out


def _max_matching_is_perfect(adj: list[list[int]], right_size: int) -> bool:
    """Kuhn's augmenting paths; True iff every left vertex is matched."""
    match_right = [-1] * right_size

    def augment(u: int, visited: list[bool]) -> bool:
        for v in adj[u]:
            if visited[v]:
                continue
            visited[v] = True
            if match_right[v] < 0 or augment(match_right[v], visited):
                match_right[v] = u
                return True
        return False

    for u in range(len(adj)):
        if not augment(u, [False] * right_size):
            return False
    return True


def contains(t1: RootedTree, t2: RootedTree) -> bool:
    """Decide containment with memoized embeddability plus bipartite matching.

    Embeddability of node u into node v depends only on the isomorphism
    classes of both subtrees, so the memo is keyed by class pair.
    """
    ids1, ids2 = _class_ids([t1, t2])
    kids: dict[int, tuple[int, ...]] = {}
    height: dict[int, int] = {}
    size: dict[int, int] = {}
    for tree, ids in ((t1, ids1), (t2, ids2)):
        sub = [1] * tree.size
        for u in tree.postorder():
            if ids[u] in kids:
                sub[u] = size[ids[u]]
                continue
            sub[u] = 1 + sum(sub[c] for c in tree.children[u])
            kids[ids[u]] = tuple(ids[c] for c in tree.children[u])
            height[ids[u]] = tree.node_height(u)
            size[ids[u]] = sub[u]

    memo: dict[tuple[int, int], bool] = {}

    def embeds(c1: int, c2: int) -> bool:
        key = (c1, c2)
        hit = memo.get(key)
        if hit is not None:
            return hit
        k1, k2 = kids[c1], kids[c2]
        if height[c1] > height[c2] or size[c1] > size[c2] or len(k1) > len(k2):
            ok = False
        elif not k1:
            ok = True
        else:
            adj = [[b for b, y in enumerate(k2) if embeds(x, y)] for x in k1]
            ok = all(adj) and _max_matching_is_perfect(adj, len(k2))
        memo[key] = ok
        return ok

    root_class = ids1[t1.root]
    candidates = {ids2[v] for v in range(t2.size) if t2.node_height(v) >= t1.height}
    limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(limit, 4 * (t1.height + t2.height) + 1000))
    try:
        return any(embeds(root_class, c) for c in sorted(candidates))
    finally:
        sys.setrecursionlimit(limit)


def oracle_contains(t1: RootedTree, t2: RootedTree, cap: int = ORACLE_CAP) -> bool:
    """Plain exhaustive search over root placements and child injections."""
    if t1.size > cap or t2.size > cap:
        raise ValueError(f"oracle limited to trees of at most {cap} nodes")

    def maps(u: int, v: int) -> bool:
        ku, kv = t1.children[u], t2.children[v]
        for image in itertools.permutations(kv, len(ku)):
            if all(maps(a, b) for a, b in zip(ku, image)):
                return True
        return False

    return any(maps(t1.root, v) for v in range(t2.size))
