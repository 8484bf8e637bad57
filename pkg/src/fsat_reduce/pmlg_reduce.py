"""Formula-Pair to pattern matching on labeled graphs.

Per gate, the pattern depends only on ``a_i`` and the graph only on ``b_j``:

* A-input slot t:  pattern ``1 a_i[t] 1``, graph path ``1 1 1``
* B-input slot t:  pattern ``111``,        graph path ``1 b_j[t] 1``
* AND / OR:        pattern ``1 P1 P2 1``
* AND graph:       ``1 -> G1 -> G2 -> 1``
* OR graph:        ``1 -> G1 -> U(|P2|) -> 1`` and ``1 -> U(|P1|) -> G2 -> 1``

where ``U(x)`` spells every binary string of length x that starts and ends
with ``1``.  Every maximal path of a gate graph runs source to sink and has
exactly the gate's pattern length, so a match is forced to be aligned.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .fpair import SIDE_A, FormulaPairInstance, PairLeaf
from .formula import AND, Gate, subtree_leaf_counts
from .labeled_graph import LabeledGraph, Pattern

# |E| / (N s^2) never exceeds this; derivation in final_edge_bound.
EDGE_BOUND_CONSTANT = 114


def gate_pattern_length(leaves: int) -> int:
    return 5 * leaves - 2


def final_pattern_length(n_padded: int, s: int) -> int:
    return n_padded * (gate_pattern_length(s) + 1) + 3


class GraphBuilder:
    def __init__(self) -> None:
        self.labels: list[str] = []
        self.edges: list[tuple[int, int]] = []

    def vertex(self, label: str) -> int:
        self.labels.append(label)
        return len(self.labels) - 1

    def edge(self, u: int, v: int) -> None:
        self.edges.append((u, v))

    def path(self, labels: str) -> tuple[int, int]:
        first = prev = self.vertex(labels[0])
        for lab in labels[1:]:
            cur = self.vertex(lab)
            self.edge(prev, cur)
            prev = cur
        return first, prev

    def build(self) -> LabeledGraph:
        return LabeledGraph.from_edges(self.labels, self.edges)


@dataclass(frozen=True)
class GateGraph:
    graph: LabeledGraph
    source: int
    sink: int


def emit_universal(builder: GraphBuilder, x: int) -> tuple[int, int]:
    if x < 3:
        raise ValueError(f"universal gadget needs length >= 3, got {x}")
    source = builder.vertex("1")
    prev = (source,)
    for _ in range(x - 2):
        level = (builder.vertex("0"), builder.vertex("1"))
        for u in prev:
            for v in level:
                builder.edge(u, v)
        prev = level
    sink = builder.vertex("1")
    for u in prev:
        builder.edge(u, sink)
    return source, sink


def universal_gadget(x: int) -> GateGraph:
    builder = GraphBuilder()
    source, sink = emit_universal(builder, x)
    return GateGraph(builder.build(), source, sink)


def universal_vertex_count(x: int) -> int:
    return 2 * x - 2


def universal_edge_count(x: int) -> int:
    return 4 * x - 8


# -- per-assignment gadgets ----------------------------------------------

def _check_index(inst: FormulaPairInstance, i: int) -> None:
    if not 0 <= i < inst.n_padded:
        raise IndexError(f"index {i} outside 0..{inst.n_padded - 1}")


def gate_patterns(inst: FormulaPairInstance, i: int) -> list[str]:
    """Pattern of every pair-formula node for a-vector ``a_set[i]``."""
    _check_index(inst, i)
    a = inst.a_set[i]
    out: list[str] = [""] * len(inst.nodes)
    for idx, node in enumerate(inst.nodes):
        if isinstance(node, PairLeaf):
            out[idx] = f"1{a[node.slot]}1" if node.side == SIDE_A else "111"
        else:
            out[idx] = "1" + out[node.left] + out[node.right] + "1"
    return out


def pattern_for(inst: FormulaPairInstance, i: int) -> Pattern:
    return Pattern(gate_patterns(inst, i)[inst.root])


def emit_gate_graphs(
    builder: GraphBuilder, inst: FormulaPairInstance, j: int
) -> list[tuple[int, int]]:
    """Emit the graph for b-vector ``b_set[j]``; returns (source, sink) per node.

    Universal block lengths come from leaf counts alone, never from bits.
    """
    _check_index(inst, j)
    b = inst.b_set[j]
    leaves = subtree_leaf_counts(inst.nodes)
    ends: list[tuple[int, int]] = [(-1, -1)] * len(inst.nodes)
    for idx, node in enumerate(inst.nodes):
        if isinstance(node, PairLeaf):
            mid = "1" if node.side == SIDE_A else str(b[node.slot])
            ends[idx] = builder.path("1" + mid + "1")
            continue
        (s1, t1), (s2, t2) = ends[node.left], ends[node.right]
        source = builder.vertex("1")
        if node.op == AND:
            builder.edge(source, s1)
            builder.edge(t1, s2)
            sink = builder.vertex("1")
            builder.edge(t2, sink)
        else:
            u1_src, u1_snk = emit_universal(builder, gate_pattern_length(leaves[node.left]))
            u2_src, u2_snk = emit_universal(builder, gate_pattern_length(leaves[node.right]))
            builder.edge(source, s1)
            builder.edge(source, u1_src)
            builder.edge(t1, u2_src)
            builder.edge(u1_snk, s2)
            sink = builder.vertex("1")
            builder.edge(u2_snk, sink)
            builder.edge(t2, sink)
        ends[idx] = (source, sink)
    return ends


def gate_subgraphs(inst: FormulaPairInstance, j: int) -> tuple[LabeledGraph, list[tuple[int, int]]]:
    """One graph holding the gadget for ``b_set[j]`` with every gate's endpoints."""
    builder = GraphBuilder()
    ends = emit_gate_graphs(builder, inst, j)
    return builder.build(), ends


def graph_for(inst: FormulaPairInstance, j: int) -> GateGraph:
    graph, ends = gate_subgraphs(inst, j)
    source, sink = ends[inst.root]
    return GateGraph(graph, source, sink)


def restrict(graph: LabeledGraph, source: int, sink: int) -> GateGraph:
    """The part of ``graph`` between ``source`` and ``sink``, as a standalone gadget.

    The walk does not continue past ``sink``, so a child gate can be cut out
    of the combined graph of its ancestors.
    """
    order = []
    seen = {source}
    stack = [source]
    while stack:
        u = stack.pop()
        order.append(u)
        if u == sink:
            continue
        for v in graph.adjacency[u]:
            if v not in seen:
                seen.add(v)
                stack.append(v)
    order.sort()
    index = {v: k for k, v in enumerate(order)}
    labels = "".join(graph.labels[v] for v in order)
    edges = [(index[u], index[v]) for u in order if u != sink for v in graph.adjacency[u]]
    return GateGraph(LabeledGraph.from_edges(labels, edges), index[source], index[sink])


# -- closed-form size accounting -----------------------------------------

def gate_graph_counts(inst: FormulaPairInstance) -> tuple[int, int]:
    """(|V|, |E|) of ``graph_for(inst, j)``; the same for every j."""
    leaves = subtree_leaf_counts(inst.nodes)
    nv = [0] * len(inst.nodes)
    ne = [0] * len(inst.nodes)
    for idx, node in enumerate(inst.nodes):
        if isinstance(node, PairLeaf):
            nv[idx], ne[idx] = 3, 2
            continue
        v = nv[node.left] + nv[node.right] + 2
        e = ne[node.left] + ne[node.right]
        if node.op == AND:
            e += 3
        else:
            x1 = gate_pattern_length(leaves[node.left])
            x2 = gate_pattern_length(leaves[node.right])
            v += universal_vertex_count(x1) + universal_vertex_count(x2)
            e += universal_edge_count(x1) + universal_edge_count(x2) + 6
        nv[idx], ne[idx] = v, e
    return nv[inst.root], ne[inst.root]


def final_graph_counts(inst: FormulaPairInstance) -> tuple[int, int]:
    """(|V|, |E|) of the graph built by :func:`build_final_pmlg`."""
    n = inst.n_padded
    gv, ge = gate_graph_counts(inst)
    mu = gate_pattern_length(inst.size)
    # middle row, direct entries d1 -> d2, separators m_i, tails f_i
    nv = n * gv + 2 * n + n + n
    ne = n * ge + 2 * n + n + n
    if n >= 2:
        blocks = 2 * n - 2
        uv, ue = universal_vertex_count(mu), universal_edge_count(mu)
        # top chain: t_1..t_{2N-1}, blocks, entry taps, exits into G_i
        nv += (2 * n - 1) + blocks * uv + blocks
        ne += blocks * ue + 2 * blocks + blocks + n
        # bottom chain: blocks, s_k, exit taps x_k
        nv += blocks * uv + blocks + blocks
        ne += blocks * ue + n + blocks + (blocks - 1) + blocks
    return nv, ne


def final_edge_bound(n_padded: int, s: int) -> int:
    """Upper bound ``EDGE_BOUND_CONSTANT * N * s^2`` on the final edge count.

    A gate graph has at most 10 s^2 edges (OR adds 20s - 26 on top of its
    children, AND adds 3, and s1*s2 >= s - 1).  The two chains add at most
    16 N mu + 20 N <= 80 N s + 20 N, and the glue edges 4 N.
    """
    return EDGE_BOUND_CONSTANT * n_padded * s * s


# -- final instance -------------------------------------------------------

@dataclass(frozen=True)
class FinalPmlgInstance:
    graph: LabeledGraph
    pattern: Pattern
    n_padded: int
    mu: int
    block_sources: dict[str, list[int]] = field(default_factory=dict, compare=False)
    provenance: dict[str, object] = field(default_factory=dict, compare=False)

    @property
    def universal_block_count(self) -> int:
        return len(self.block_sources.get("top", ())) + len(self.block_sources.get("bottom", ()))


def final_pattern(patterns: list[str]) -> Pattern:
    return Pattern("$$" + "$".join(patterns) + "$$")


def build_final_pmlg(inst: FormulaPairInstance, provenance: dict | None = None) -> FinalPmlgInstance:
    """Combine all per-assignment gadgets into one graph and one pattern.

    The pattern is ``$$P_1$P_2$...$P_N$$``.  Aligning ``P_k`` with ``G_i`` uses:

    * prefix: ``$$`` on ``d_i1 -> d_i2`` when k = 1, otherwise an entry tap and
      a top-chain run of k - 1 universal blocks that exits into ``G_i``;
    * suffix: ``$$`` on ``m_i -> f_i`` when k = N, otherwise a bottom-chain
      run of N - k universal blocks ending on an exit tap ``s -> x``.

    ``$$`` only appears at chain entries and exits, and the only way from the
    top chain to the bottom one is through some ``G_i``.
    """
    n = inst.n_padded
    mu = gate_pattern_length(inst.size)
    builder = GraphBuilder()

    g_src, g_snk, seps = [], [], []
    for j in range(n):
        source, sink = emit_gate_graphs(builder, inst, j)[inst.root]
        g_src.append(source)
        g_snk.append(sink)
    for i in range(n):
        d1, d2 = builder.path("$$")
        builder.edge(d2, g_src[i])
        m = builder.vertex("$")
        builder.edge(g_snk[i], m)
        f = builder.vertex("$")
        builder.edge(m, f)
        seps.append(m)

    blocks = {"top": [], "bottom": []}
    if n >= 2:
        nblocks = 2 * n - 2
        # 1-based t_1..t_{2N-1}
        t = [None] + [builder.vertex("$") for _ in range(2 * n - 1)]
        for k in range(1, nblocks + 1):
            u_src, u_snk = emit_universal(builder, mu)
            blocks["top"].append(u_src)
            builder.edge(t[k], u_src)
            builder.edge(u_snk, t[k + 1])
            tap = builder.vertex("$")
            builder.edge(tap, t[k])
        for i in range(1, n + 1):
            builder.edge(t[n - 1 + i], g_src[i - 1])

        prev_s = None
        for k in range(1, nblocks + 1):
            u_src, u_snk = emit_universal(builder, mu)
            blocks["bottom"].append(u_src)
            if k <= n:
                builder.edge(seps[k - 1], u_src)
            if prev_s is not None:
                builder.edge(prev_s, u_src)
            s_k = builder.vertex("$")
            builder.edge(u_snk, s_k)
            x_k = builder.vertex("$")
            builder.edge(s_k, x_k)
            prev_s = s_k

    pattern = final_pattern([gate_patterns(inst, i)[inst.root] for i in range(n)])
    return FinalPmlgInstance(
        graph=builder.build(),
        pattern=pattern,
        n_padded=n,
        mu=mu,
        block_sources=blocks,
        provenance=dict(provenance or {}),
    )
