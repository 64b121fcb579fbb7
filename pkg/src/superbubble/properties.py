"""Structural laws every detector run must satisfy, checked per graph.

Each check compares detector output (or the ordering it used) with facts
computed independently: oracle interiors, degree counts, BFS reachability.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .detector import SuperbubbleReport, candidate_flags, detect
from .graph import Graph, augment
from .oracle import DEFAULT_CAP, OracleResult, enumerate_superbubbles
from .topo import check_ordering_properties, topological_sort


@dataclass
class PropertyReport:
    failures: list[str] = field(default_factory=list)
    checked: Counter = field(default_factory=Counter)

    @property
    def ok(self) -> bool:
        return not self.failures

    def fail(self, name: str, detail: str) -> None:
        self.failures.append(f"{name}: {detail}")


def check_properties(
    g: Graph,
    report: Optional[SuperbubbleReport] = None,
    oracle: Optional[OracleResult] = None,
    ordering_sample: int = 200,
    seed: int = 0,
    cap: Optional[int] = DEFAULT_CAP,
) -> PropertyReport:
    """Run every law on ``g``; ``report``/``oracle`` are computed if absent."""
    if report is None:
        report = detect(g)
    if oracle is None:
        oracle = enumerate_superbubbles(g, cap=cap)
    out = PropertyReport()
    aug = augment(g)
    order = topological_sort(aug)
    rank = order.rank
    ids = [(g.id_of(b.entrance), g.id_of(b.exit)) for b in report.items]

    # an entrance (exit) belongs to at most one superbubble
    out.checked["uniqueness"] += 1
    for role, column in (("entrance", 0), ("exit", 1)):
        counts = Counter(pair[column] for pair in ids)
        repeated = [g.labels[v] for v, c in counts.items() if c > 1]
        if repeated:
            out.fail("uniqueness", f"{role} shared by several superbubbles: {repeated}")

    # entrances have a child with one parent, exits a parent with one child
    is_ent, is_ex = candidate_flags(g)
    out.checked["candidate_roles"] += 1
    for s, t in ids:
        if not is_ent[s]:
            out.fail("candidate_roles", f"entrance {g.labels[s]} has no single-parent child")
        if not is_ex[t]:
            out.fail("candidate_roles", f"exit {g.labels[t]} has no single-child parent")

    # a single-child parent feeding a single-parent child is always a superbubble
    reported = set(ids)
    outdeg, indeg = g.out_degree, g.in_degree
    for u, v in g.edges():
        if outdeg[u] == 1 and indeg[v] == 1:
            out.checked["degree_forced"] += 1
            if (u, v) not in reported:
                out.fail("degree_forced", f"<{g.labels[u]}, {g.labels[v]}> not reported")

    # interior == vertices ranked strictly between entrance and exit
    for b in oracle.bubbles:
        out.checked["rank_interval"] += 1
        lo, hi = int(rank[b.entrance]), int(rank[b.exit])
        between = set(order.vertex_at[lo + 1 : hi].tolist())
        if between != set(b.interior):
            extra = sorted(g.labels[v] for v in between - b.interior if v < g.n)
            missing = sorted(g.labels[v] for v in b.interior - between)
            out.fail("rank_interval", f"<{g.labels[b.entrance]}, {g.labels[b.exit]}> "
                                      f"outside-interval {missing}, foreign-in-interval {extra}")

    # rank intervals of two superbubbles never cross
    spans = sorted((int(rank[s]), int(rank[t])) for s, t in ids)
    out.checked["nesting"] += 1
    for i, (a_lo, a_hi) in enumerate(spans):
        for b_lo, b_hi in spans[i + 1 :]:
            if b_lo >= a_hi:
                break
            if a_lo < b_lo < a_hi < b_hi:
                out.fail("nesting", f"rank intervals [{a_lo},{a_hi}] and [{b_lo},{b_hi}] cross")

    # reported in decreasing rank of exit
    out.checked["report_order"] += 1
    exit_ranks = [int(rank[t]) for _, t in ids]
    if any(x <= y for x, y in zip(exit_ranks, exit_ranks[1:])):
        out.fail("report_order", f"exit ranks not strictly decreasing: {exit_ranks}")

    ordering = check_ordering_properties(aug, order, max_sources=ordering_sample, seed=seed)
    out.checked["edge_forward"] += 1
    out.checked["interval_reachability"] += ordering.interval_sources_checked
    if ordering.edge_violations:
        out.fail("edge_forward", f"edges not rank-forward: {ordering.edge_violations[:5]}")
    if not (ordering.bijection_ok and ordering.tree_ok):
        out.fail("edge_forward", "ranks are not a bijection onto 1..n or the DFS tree is not spanning")
    if ordering.interval_counterexample is not None:
        out.fail("interval_reachability", str(ordering.interval_counterexample))

    out.checked["oracle_match"] += 1
    if report.pairs() != oracle.pairs():
        out.fail("oracle_match", f"detector {sorted(report.pairs())} vs oracle {sorted(oracle.pairs())}")
    return out
