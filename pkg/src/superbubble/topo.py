"""DFS topological ordering with its spanning tree.

Ranks are handed out at DFS finish time, counting down from ``n``; the
vertex each child was discovered from is kept as its tree parent. Only this
construction guarantees that every vertex ranked strictly between a tree
ancestor and its descendant is reachable from the ancestor, which the
detector relies on. Do not swap in a Kahn-style sort.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from ._accel import jit
from .errors import CycleError, NotDagError
from .graph import AugmentedGraph, Graph


@jit
def _dfs_rank(n, out_ptr, out_idx, source):
    rank = np.zeros(n, np.int64)
    parent = np.full(n, -1, np.int64)
    state = np.zeros(n, np.int8)  # 0 unvisited, 1 on stack, 2 finished
    stack_v = np.empty(n, np.int64)
    stack_e = np.empty(n, np.int64)
    order = n
    top = 0
    stack_v[0] = source
    stack_e[0] = out_ptr[source]
    state[source] = 1
    while top >= 0:
        v = stack_v[top]
        e = stack_e[top]
        if e < out_ptr[v + 1]:
            stack_e[top] = e + 1
            w = out_idx[e]
            if state[w] == 0:
                state[w] = 1
                parent[w] = v
                top += 1
                stack_v[top] = w
                stack_e[top] = out_ptr[w]
            elif state[w] == 1:
                return rank, parent, order, v, w
        else:
            state[v] = 2
            rank[v] = order
            order -= 1
            top -= 1
    return rank, parent, order, -1, -1


@dataclass(frozen=True)
class TopoOrder:
    """``rank[v]`` is the 1-based topological rank of vertex ``v``.

    ``vertex_at`` is the inverse (index 0 unused, holds -1); ``tree_parent``
    is -1 for the root.
    """

    rank: np.ndarray
    vertex_at: np.ndarray
    tree_parent: np.ndarray

    @classmethod
    def from_ranks(cls, rank, tree_parent=None) -> "TopoOrder":
        rank = np.asarray(rank, dtype=np.int64)
        n = rank.size
        vertex_at = np.full(n + 1, -1, dtype=np.int64)
        ok = (rank >= 1) & (rank <= n)
        vertex_at[rank[ok]] = np.flatnonzero(ok)
        if tree_parent is None:
            tree_parent = np.full(n, -1, dtype=np.int64)
        return cls(rank, vertex_at, np.asarray(tree_parent, dtype=np.int64))

    @property
    def n(self) -> int:
        return int(self.rank.size)


def _find_cycle(g: Graph, unvisited: np.ndarray) -> tuple[int, int]:
    # Every unvisited vertex has an unvisited parent, so walking parents must loop.
    pending = set(unvisited.tolist())
    v = int(unvisited[0])
    pos = {v: 0}
    path = [v]
    while True:
        p = next(int(u) for u in g.predecessors(v).tolist() if u in pending)
        if p in pos:
            return p, v
        pos[p] = len(path)
        path.append(p)
        v = p


def topological_sort(g: Union[AugmentedGraph, Graph]) -> TopoOrder:
    """Rank the vertices of a single-source DAG by reverse DFS finish time."""
    if isinstance(g, AugmentedGraph):
        graph, source = g.graph, g.source
    else:
        graph = g
        sources = graph.sources()
        if sources.size != 1:
            raise NotDagError(f"expected exactly one source, found {sources.size}")
        source = int(sources[0])

    n = graph.n
    rank, parent, remaining, bu, bv = _dfs_rank(n, graph.out_ptr, graph.out_idx, source)
    if bu >= 0:
        raise CycleError((graph.labels[bu], graph.labels[bv]))
    if remaining != 0:
        u, v = _find_cycle(graph, np.flatnonzero(rank == 0))
        raise CycleError((graph.labels[u], graph.labels[v]))
    vertex_at = np.empty(n + 1, dtype=np.int64)
    vertex_at[0] = -1
    vertex_at[rank] = np.arange(n, dtype=np.int64)
    return TopoOrder(rank, vertex_at, parent)


@dataclass
class OrderingReport:
    ok: bool
    bijection_ok: bool
    tree_ok: bool
    edge_violations: list = field(default_factory=list)
    interval_sources_checked: int = 0
    interval_counterexample: Optional[dict] = None


def _reachable(g: Graph, v: int) -> np.ndarray:
    seen = np.zeros(g.n, dtype=bool)
    seen[v] = True
    queue = deque([v])
    while queue:
        x = queue.popleft()
        for y in g.successors(x).tolist():
            if not seen[y]:
                seen[y] = True
                queue.append(y)
    return seen


def check_ordering_properties(
    g: Union[AugmentedGraph, Graph],
    t: TopoOrder,
    max_sources: int = 200,
    seed: int = 0,
    max_violations: int = 20,
) -> OrderingReport:
    """Check edge-forwardness and the spanning-tree interval property of ``t``.

    The interval property is checked for every tree vertex when ``n`` is at
    most ``max_sources``, otherwise for a seeded sample of that many. Each
    check is an independent BFS, so this is a diagnostic, not a fast path.
    """
    graph = g.graph if isinstance(g, AugmentedGraph) else g
    n = graph.n
    labels = graph.labels
    rank = np.asarray(t.rank)

    bijection_ok = rank.size == n and np.array_equal(np.sort(rank), np.arange(1, n + 1))
    violations = []
    for u, v in graph.edges():
        if rank[u] >= rank[v]:
            violations.append((labels[u], labels[v]))
            if len(violations) >= max_violations:
                break

    parent = np.asarray(t.tree_parent)
    children: list[list[int]] = [[] for _ in range(n)]
    roots = []
    tree_ok = parent.size == n
    for v in range(n if tree_ok else 0):
        p = int(parent[v])
        if p < 0:
            roots.append(v)
        elif v not in graph.successors(p):
            tree_ok = False
        else:
            children[p].append(v)
    if len(roots) != 1:
        tree_ok = False
    else:
        # every vertex must hang off the single root
        reached = 0
        stack = [roots[0]]
        while stack:
            x = stack.pop()
            reached += 1
            stack.extend(children[x])
        tree_ok = tree_ok and reached == n

    report = OrderingReport(
        ok=False,
        bijection_ok=bool(bijection_ok),
        tree_ok=tree_ok,
        edge_violations=violations,
    )
    if not (bijection_ok and tree_ok):
        return report

    vertex_at = np.empty(n + 1, dtype=np.int64)
    vertex_at[rank] = np.arange(n)
    candidates = np.arange(n)
    if n > max_sources:
        candidates = np.sort(np.random.default_rng(seed).choice(n, size=max_sources, replace=False))
    for v in candidates.tolist():
        if not children[v]:
            continue
        deepest = int(rank[v])
        stack = list(children[v])
        while stack:
            x = stack.pop()
            deepest = max(deepest, int(rank[x]))
            stack.extend(children[x])
        reach = _reachable(graph, v)
        report.interval_sources_checked += 1
        for r in range(int(rank[v]) + 1, deepest):
            w = int(vertex_at[r])
            if not reach[w]:
                report.interval_counterexample = {
                    "ancestor": labels[v],
                    "unreachable": labels[w],
                    "ancestor_rank": int(rank[v]),
                    "unreachable_rank": r,
                    "descendant_max_rank": deepest,
                }
                return report
    report.ok = not violations
    return report
