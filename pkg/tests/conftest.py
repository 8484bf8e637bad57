from __future__ import annotations

import itertools
import random

import pytest

from fsat_reduce.formula import AND, OR, Formula, Gate, Leaf
from fsat_reduce.labeled_graph import LabeledGraph
from fsat_reduce.rooted_tree import TreeBuilder


def shapes(s: int):
    """All binary tree shapes with s leaves, as nested tuples (None = leaf)."""
    if s == 1:
        yield None
        return
    for k in range(1, s):
        for left in shapes(k):
            for right in shapes(s - k):
                yield (left, right)


def _count_gates(shape) -> int:
    return 0 if shape is None else 1 + _count_gates(shape[0]) + _count_gates(shape[1])


def _emit(shape, ops, lits, nodes):
    if shape is None:
        v, neg = next(lits)
        nodes.append(Leaf(v, neg))
        return len(nodes) - 1
    op = next(ops)
    left = _emit(shape[0], ops, lits, nodes)
    right = _emit(shape[1], ops, lits, nodes)
    nodes.append(Gate(op, left, right))
    return len(nodes) - 1


def all_formulas(max_s: int, max_n: int):
    """Every formula with s <= max_s leaves over num_vars = n <= max_n variables."""
    for n in range(1, max_n + 1):
        for s in range(1, max_s + 1):
            for shape in shapes(s):
                g = _count_gates(shape)
                for ops in itertools.product((AND, OR), repeat=g):
                    for vars_ in itertools.product(range(1, n + 1), repeat=s):
                        for negs in itertools.product((False, True), repeat=s):
                            nodes = []
                            _emit(shape, iter(ops), iter(zip(vars_, negs)), nodes)
                            yield Formula(tuple(nodes), len(nodes) - 1, n)


def random_graph(rng: random.Random, nv: int, density: float, alphabet: str = "01$") -> LabeledGraph:
    labels = "".join(rng.choice(alphabet) for _ in range(nv))
    edges = [
        (u, v) for u in range(nv) for v in range(nv) if u != v and rng.random() < density
    ]
    return LabeledGraph.from_edges(labels, edges)


def random_tree(rng: random.Random, size: int):
    b = TreeBuilder()
    b.node()
    for k in range(1, size):
        # bias towards recent nodes for some depth
        parent = rng.randint(max(0, k - 4), k - 1) if rng.random() < 0.5 else rng.randint(0, k - 1)
        b.node(parent)
    return b.build(0)


# -- acceptance summary ---------------------------------------------------

_CRITERIA: dict[str, tuple[str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(label): acceptance criterion id")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or report.when != "call":
        return
    _CRITERIA[item.nodeid] = (marker.args[0], "PASS" if report.passed else "FAIL")


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for label, status in sorted(_CRITERIA.values()):
        terminalreporter.write_line(f"{status}  {label}")
