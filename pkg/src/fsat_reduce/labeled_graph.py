"""Vertex-labeled directed graphs and pattern matching on them.

An occurrence of a pattern ``P`` is a walk ``v_1 .. v_|P|`` whose labels spell
``P``.  Labels are single characters from ``{0, 1, $}``.
"""

from __future__ import annotations

import graphlib
from dataclasses import dataclass
from typing import Iterable, Sequence, TextIO

ALPHABET = frozenset("01$")
ORACLE_CAP = 16


class GraphFormatError(ValueError):
    pass


class AlphabetError(ValueError):
    pass


def _check_alphabet(chars: Iterable[str], what: str) -> None:
    bad = set(chars) - ALPHABET
    if bad:
        raise AlphabetError(f"{what} uses symbols outside {{0,1,$}}: {sorted(bad)}")


@dataclass(frozen=True)
class Pattern:
    chars: str

    def __post_init__(self) -> None:
        if not self.chars:
            raise AlphabetError("pattern must be nonempty")
        _check_alphabet(self.chars, "pattern")

    def __len__(self) -> int:
        return len(self.chars)

    def __str__(self) -> str:
        return self.chars


def as_pattern(p: Pattern | str) -> Pattern:
    return p if isinstance(p, Pattern) else Pattern(p)


@dataclass(frozen=True, eq=False)
class LabeledGraph:
    labels: str
    adjacency: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        _check_alphabet(self.labels, "graph")
        if len(self.adjacency) != len(self.labels):
            raise GraphFormatError("adjacency and labels differ in length")
        nv = len(self.labels)
        for u, outs in enumerate(self.adjacency):
            if len(set(outs)) != len(outs):
                raise GraphFormatError(f"duplicate edge out of vertex {u}")
            for v in outs:
                if not 0 <= v < nv:
                    raise GraphFormatError(f"edge {u}->{v} endpoint out of range")
                if u == v:
                    raise GraphFormatError(f"self-loop at vertex {u}")

    @classmethod
    def from_edges(cls, labels: str | Sequence[str], edges: Iterable[tuple[int, int]]):
        labels = "".join(labels)
        adj: list[list[int]] = [[] for _ in labels]
        for u, v in edges:
            if not (0 <= u < len(labels) and 0 <= v < len(labels)):
                raise GraphFormatError(f"edge {u}->{v} endpoint out of range")
            adj[u].append(v)
        return cls(labels, tuple(tuple(outs) for outs in adj))

    @property
    def num_vertices(self) -> int:
        return len(self.labels)

    @property
    def num_edges(self) -> int:
        return sum(len(outs) for outs in self.adjacency)

    def edges(self) -> Iterable[tuple[int, int]]:
        for u, outs in enumerate(self.adjacency):
            for v in outs:
                yield u, v

    def edge_set(self) -> frozenset[tuple[int, int]]:
        return frozenset(self.edges())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LabeledGraph):
            return NotImplemented
        return self.labels == other.labels and self.edge_set() == other.edge_set()

    def __hash__(self) -> int:
        return hash((self.labels, self.edge_set()))

    def in_degrees(self) -> list[int]:
        deg = [0] * self.num_vertices
        for _, v in self.edges():
            deg[v] += 1
        return deg

    def max_total_degree(self) -> int:
        ins = self.in_degrees()
        return max(
            (ins[u] + len(outs) for u, outs in enumerate(self.adjacency)), default=0
        )

    def topological_order(self) -> list[int]:
        """Raises ``graphlib.CycleError`` if the graph has a cycle."""
        sorter = graphlib.TopologicalSorter()
        for u in range(self.num_vertices):
            sorter.add(u)
        for u, v in self.edges():
            sorter.add(v, u)
        return list(sorter.static_order())

    def is_acyclic(self) -> bool:
        try:
            self.topological_order()
        except graphlib.CycleError:
            return False
        return True


# -- matchers -------------------------------------------------------------

@dataclass
class MatchStats:
    """Work counters filled in by :func:`solve_pmlg`."""

    edges_scanned: int = 0
    positions: int = 0


def solve_pmlg(graph: LabeledGraph, pattern: Pattern | str, stats: MatchStats | None = None) -> bool:
    """Layered reachability: frontier k holds the walk ends spelling ``P[:k+1]``."""
    p = as_pattern(pattern).chars
    labels = graph.labels
    frontier = [v for v, lab in enumerate(labels) if lab == p[0]]
    if stats is not None:
        stats.positions = 1
    for ch in p[1:]:
        if not frontier:
            return False
        seen = set()
        nxt = []
        scanned = 0
        for u in frontier:
            outs = graph.adjacency[u]
            scanned += len(outs)
            for v in outs:
                if labels[v] == ch and v not in seen:
                    seen.add(v)
                    nxt.append(v)
        if stats is not None:
            stats.edges_scanned += scanned
            stats.positions += 1
        frontier = nxt
    return bool(frontier)


class BitParallelMatcher:
    """Frontiers as integer bitsets; one OR of successor masks per active vertex.

    Building the matcher costs O(|V| + |E|) and can be reused across patterns.
    """

    def __init__(self, graph: LabeledGraph):
        self.graph = graph
        self.label_mask = {c: 0 for c in ALPHABET}
        for v, lab in enumerate(graph.labels):
            self.label_mask[lab] |= 1 << v
        self.succ_mask = []
        for outs in graph.adjacency:
            mask = 0
            for v in outs:
                mask |= 1 << v
            self.succ_mask.append(mask)

    def matches(self, pattern: Pattern | str) -> bool:
        p = as_pattern(pattern).chars
        succ = self.succ_mask
        frontier = self.label_mask[p[0]]
        for ch in p[1:]:
            if not frontier:
                return False
            reach = 0
            while frontier:
                low = frontier & -frontier
                reach |= succ[low.bit_length() - 1]
                frontier ^= low
            frontier = reach & self.label_mask[ch]
        return frontier != 0


def solve_pmlg_bitparallel(graph: LabeledGraph, pattern: Pattern | str) -> bool:
    return BitParallelMatcher(graph).matches(pattern)


def oracle_pmlg(graph: LabeledGraph, pattern: Pattern | str, cap: int = ORACLE_CAP) -> bool:
    """Explicit depth-first enumeration of label-matching walks."""
    p = as_pattern(pattern).chars
    if graph.num_vertices > cap or len(p) > cap:
        raise ValueError(f"oracle limited to |V|, |P| <= {cap}")

    def walk(v: int, k: int) -> bool:
        if graph.labels[v] != p[k]:
            return False
        if k == len(p) - 1:
            return True
        return any(walk(w, k + 1) for w in graph.adjacency[v])

    return any(walk(v, 0) for v in range(graph.num_vertices))


# -- file formats ---------------------------------------------------------

def write_graph(graph: LabeledGraph, dest: TextIO) -> None:
    dest.write("PMLG 1\n")
    dest.write(f"V {graph.num_vertices}\n")
    for lab in graph.labels:
        dest.write(lab + "\n")
    dest.write(f"E {graph.num_edges}\n")
    for u, v in graph.edges():
        dest.write(f"{u} {v}\n")


def _counted_header(line: str | None, key: str, lineno: int) -> int:
    parts = (line or "").split()
    if len(parts) != 2 or parts[0] != key or not parts[1].isdigit():
        raise GraphFormatError(f"line {lineno}: expected '{key} <count>', got {line!r}")
    return int(parts[1])


def read_graph(source: TextIO) -> LabeledGraph:
    lines = source.read().splitlines()
    it = iter(enumerate(lines, start=1))

    def next_line() -> tuple[int, str | None]:
        try:
            return next(it)
        except StopIteration:
            return len(lines) + 1, None

    lineno, line = next_line()
    if line is None or line.strip() != "PMLG 1":
        raise GraphFormatError(f"line {lineno}: missing 'PMLG 1' header")
    lineno, line = next_line()
    nv = _counted_header(line, "V", lineno)
    labels = []
    for _ in range(nv):
        lineno, line = next_line()
        if line is None or len(line.strip()) != 1:
            raise GraphFormatError(f"line {lineno}: expected one label character")
        lab = line.strip()
        if lab not in ALPHABET:
            raise GraphFormatError(f"line {lineno}: label {lab!r} outside {{0,1,$}}")
        labels.append(lab)
    lineno, line = next_line()
    ne = _counted_header(line, "E", lineno)
    edges = []
    for _ in range(ne):
        lineno, line = next_line()
        parts = (line or "").split()
        if len(parts) != 2 or not all(x.isdigit() for x in parts):
            raise GraphFormatError(f"line {lineno}: expected '<from> <to>'")
        u, v = int(parts[0]), int(parts[1])
        if u >= nv or v >= nv:
            raise GraphFormatError(f"line {lineno}: edge endpoint out of range")
        edges.append((u, v))
    for lineno, line in it:
        if line.strip():
            raise GraphFormatError(f"line {lineno}: trailing content")
    return LabeledGraph.from_edges(labels, edges)


def write_pattern(pattern: Pattern | str, dest: TextIO) -> None:
    dest.write(as_pattern(pattern).chars + "\n")


def read_pattern(source: TextIO) -> Pattern:
    text = source.read().strip()
    return Pattern(text)
