"""End-to-end verification, size accounting and benchmarking."""

from __future__ import annotations

import csv
import time
from dataclasses import asdict, dataclass, field
from typing import Iterable, Iterator, TextIO

from .formula import Formula, brute_force_sat, random_formula, render_formula
from .fpair import split_to_pair
from .labeled_graph import BitParallelMatcher, solve_pmlg
from .pmlg_reduce import (
    build_final_pmlg,
    final_edge_bound,
    final_graph_counts,
    final_pattern_length,
)
from .rooted_tree import contains
from .subtree_reduce import build_final_subtree, final_tree_bounds, final_tree_sizes

TARGETS = ("pmlg", "subtree", "both")
BENCH_SCHEMA = "1"
BENCH_HEADER = (
    "schema", "n", "s", "seed", "target", "N", "pattern_len", "graph_v",
    "graph_e", "t1_size", "t2_size", "build_ms", "solve_ms", "decision",
)


class StageError(RuntimeError):
    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"[{stage}] {cause}")
        self.stage = stage
        self.__cause__ = cause


class _Stage:
    """Context manager timing one pipeline stage and tagging its errors."""

    def __init__(self, name: str, timings: dict[str, float]):
        self.name = name
        self.timings = timings

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb):
        self.timings[self.name] = (time.perf_counter() - self.start) * 1000.0
        if exc is not None and not isinstance(exc, StageError):
            raise StageError(self.name, exc) from exc
        return False


@dataclass
class VerifyReport:
    formula: str
    sat: bool
    pmlg: bool | None = None
    pmlg_bitparallel: bool | None = None
    subtree: bool | None = None
    timings_ms: dict[str, float] = field(default_factory=dict)
    sizes: dict[str, int] = field(default_factory=dict)

    @property
    def agree(self) -> bool:
        found = [d for d in (self.pmlg, self.pmlg_bitparallel, self.subtree) if d is not None]
        return all(d == self.sat for d in found)

    def as_dict(self) -> dict:
        out = asdict(self)
        out["agree"] = self.agree
        return out


def verify(formula: Formula, target: str = "both") -> VerifyReport:
    if target not in TARGETS:
        raise ValueError(f"target must be one of {TARGETS}")
    timings: dict[str, float] = {}
    with _Stage("brute_force_sat", timings):
        sat = brute_force_sat(formula).satisfiable
    report = VerifyReport(render_formula(formula), sat, timings_ms=timings)
    with _Stage("split_to_pair", timings):
        inst = split_to_pair(formula)
    report.sizes["N"] = inst.n_padded
    if target in ("pmlg", "both"):
        with _Stage("reduce_pmlg", timings):
            final = build_final_pmlg(inst)
        with _Stage("solve_pmlg", timings):
            report.pmlg = solve_pmlg(final.graph, final.pattern)
        with _Stage("solve_pmlg_bitparallel", timings):
            report.pmlg_bitparallel = BitParallelMatcher(final.graph).matches(final.pattern)
        report.sizes.update(
            pattern_len=len(final.pattern),
            graph_v=final.graph.num_vertices,
            graph_e=final.graph.num_edges,
        )
    if target in ("subtree", "both"):
        with _Stage("reduce_subtree", timings):
            trees = build_final_subtree(inst)
        with _Stage("solve_subtree", timings):
            report.subtree = contains(trees.t_a, trees.t_b)
        report.sizes.update(t1_size=trees.t_a.size, t2_size=trees.t_b.size)
    return report


@dataclass
class SizeReport:
    n: int
    s: int
    N: int
    mu: int
    pattern_len: int
    graph_v: int
    graph_e: int
    t_a_size: int
    t_b_size: int
    predicted_pattern_len: int
    predicted_graph_v: int
    predicted_graph_e: int
    predicted_t_a_size: int
    predicted_t_b_size: int
    graph_e_bound: int
    t_a_bound: int
    t_b_bound: int
    universal_blocks: int
    max_degree: int
    is_dag: bool
    max_children: int
    height_t_a: int
    height_t_b: int
    gadget_height: int
    formula_height: int

    @property
    def exact(self) -> bool:
        return (
            self.pattern_len == self.predicted_pattern_len
            and self.graph_v == self.predicted_graph_v
            and self.graph_e == self.predicted_graph_e
            and self.t_a_size == self.predicted_t_a_size
            and self.t_b_size == self.predicted_t_b_size
        )

    def as_dict(self) -> dict:
        out = asdict(self)
        out["exact"] = self.exact
        return out


def stats(formula: Formula) -> SizeReport:
    inst = split_to_pair(formula)
    final = build_final_pmlg(inst)
    trees = build_final_subtree(inst)
    n_pad, s = inst.n_padded, inst.size
    pv, pe = final_graph_counts(inst)
    pa, pb = final_tree_sizes(inst)
    ba, bb = final_tree_bounds(n_pad, s)
    return SizeReport(
        n=formula.num_vars,
        s=s,
        N=n_pad,
        mu=final.mu,
        pattern_len=len(final.pattern),
        graph_v=final.graph.num_vertices,
        graph_e=final.graph.num_edges,
        t_a_size=trees.t_a.size,
        t_b_size=trees.t_b.size,
        predicted_pattern_len=final_pattern_length(n_pad, s),
        predicted_graph_v=pv,
        predicted_graph_e=pe,
        predicted_t_a_size=pa,
        predicted_t_b_size=pb,
        graph_e_bound=final_edge_bound(n_pad, s),
        t_a_bound=ba,
        t_b_bound=bb,
        universal_blocks=final.universal_block_count,
        max_degree=final.graph.max_total_degree(),
        is_dag=final.graph.is_acyclic(),
        max_children=max(trees.t_a.max_children, trees.t_b.max_children),
        height_t_a=trees.t_a.height,
        height_t_b=trees.t_b.height,
        gadget_height=trees.gadget_height,
        formula_height=formula.height,
    )


# -- benchmarking ---------------------------------------------------------

@dataclass(frozen=True)
class GridPoint:
    n: int
    s: int
    trials: int
    seed: int


def bench(
    grid: Iterable[GridPoint], target: str = "both", budget_s: float | None = None
) -> Iterator[dict[str, object]]:
    """Yield one CSV row per (trial, solver).

    PMLG trials produce a ``pmlg/layered`` and a ``pmlg/bitparallel`` row over
    the same instance; subtree trials a single ``subtree`` row.  Trial t of a
    grid point uses seed ``seed + t``.  Once ``budget_s`` is spent a final
    marker row with decision ``budget_exceeded`` is emitted and iteration stops.
    """
    if target not in TARGETS:
        raise ValueError(f"target must be one of {TARGETS}")
    start = time.perf_counter()
    for point in grid:
        for t in range(point.trials):
            if budget_s is not None and time.perf_counter() - start > budget_s:
                yield _marker_row(point, point.seed + t, target)
                return
            seed = point.seed + t
            formula = random_formula(point.n, point.s, seed)
            t0 = time.perf_counter()
            inst = split_to_pair(formula)
            split_ms = _ms(t0)
            base = {
                "schema": BENCH_SCHEMA, "n": point.n, "s": point.s, "seed": seed,
                "N": inst.n_padded, "pattern_len": "", "graph_v": "", "graph_e": "",
                "t1_size": "", "t2_size": "",
            }
            if target in ("pmlg", "both"):
                t0 = time.perf_counter()
                final = build_final_pmlg(inst)
                build_ms = split_ms + _ms(t0)
                sizes = dict(
                    pattern_len=len(final.pattern),
                    graph_v=final.graph.num_vertices,
                    graph_e=final.graph.num_edges,
                )
                t0 = time.perf_counter()
                layered = solve_pmlg(final.graph, final.pattern)
                layered_ms = _ms(t0)
                t0 = time.perf_counter()
                packed = BitParallelMatcher(final.graph).matches(final.pattern)
                packed_ms = _ms(t0)
                for name, ms, decision in (
                    ("pmlg/layered", layered_ms, layered),
                    ("pmlg/bitparallel", packed_ms, packed),
                ):
                    yield {**base, **sizes, "target": name, "build_ms": f"{build_ms:.3f}",
                           "solve_ms": f"{ms:.3f}", "decision": int(decision)}
            if target in ("subtree", "both"):
                t0 = time.perf_counter()
                trees = build_final_subtree(inst)
                build_ms = split_ms + _ms(t0)
                t0 = time.perf_counter()
                decision = contains(trees.t_a, trees.t_b)
                yield {**base, "t1_size": trees.t_a.size, "t2_size": trees.t_b.size,
                       "target": "subtree", "build_ms": f"{build_ms:.3f}",
                       "solve_ms": f"{_ms(t0):.3f}", "decision": int(decision)}


def _ms(t0: float) -> float:
    return (time.perf_counter() - t0) * 1000.0


def _marker_row(point: GridPoint, seed: int, target: str) -> dict[str, object]:
    row = {key: "" for key in BENCH_HEADER}
    row.update(schema=BENCH_SCHEMA, n=point.n, s=point.s, seed=seed, target=target,
               decision="budget_exceeded")
    return row


def write_bench_csv(rows: Iterable[dict[str, object]], dest: TextIO, header: bool = True) -> int:
    writer = csv.DictWriter(dest, fieldnames=BENCH_HEADER, lineterminator="\n")
    if header:
        writer.writeheader()
    count = 0
    for row in rows:
        writer.writerow(row)
        count += 1
    return count
