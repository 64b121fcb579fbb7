"""Brute-force superbubble enumeration straight from the definition.

For every ordered pair ``(s, t)`` this computes the set reachable from ``s``
without passing through ``t`` and the set reaching ``t`` without passing
through ``s``, compares them, checks acyclicity of the induced subgraph, and
finally applies minimality per entrance. Roughly O(n^2 (n + m)): a test
reference only. Shares no code with the detector.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

from .errors import CycleError, OracleCapError

DEFAULT_CAP = 500


def _adjacency(g) -> tuple[list[list[int]], list[list[int]]]:
    out = [[] for _ in range(g.n)]
    inn = [[] for _ in range(g.n)]
    for u, v in g.edges():
        out[u].append(v)
        inn[v].append(u)
    return out, inn


def _closure(adj: list[list[int]], start: int, avoid: Optional[int] = None) -> set[int]:
    seen = {start}
    stack = [start]
    while stack:
        x = stack.pop()
        if x == avoid:
            continue
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return seen


def reachable_avoiding(g, start: int, avoid: int, reverse: bool = False) -> set[int]:
    """Vertices reachable from ``start`` along edges (or reversed edges)
    without expanding ``avoid``. ``avoid`` itself is included if reached."""
    if start == avoid:
        raise ValueError("start and avoid must differ")
    out, inn = _adjacency(g)
    return _closure(inn if reverse else out, start, avoid)


def _is_acyclic(vertices: set[int], out: list[list[int]]) -> bool:
    indeg = {v: 0 for v in vertices}
    for v in vertices:
        for w in out[v]:
            if w in indeg:
                indeg[w] += 1
    ready = [v for v, d in indeg.items() if d == 0]
    removed = 0
    while ready:
        v = ready.pop()
        removed += 1
        for w in out[v]:
            if w in indeg:
                indeg[w] -= 1
                if indeg[w] == 0:
                    ready.append(w)
    return removed == len(vertices)


@dataclass(frozen=True, order=True)
class OracleBubble:
    entrance: int
    exit: int
    interior: frozenset = field(compare=False)


@dataclass
class OracleResult:
    bubbles: list[OracleBubble]
    labels: tuple

    def pairs(self) -> set[tuple[str, str]]:
        return {(self.labels[b.entrance], self.labels[b.exit]) for b in self.bubbles}

    def to_dict(self) -> dict:
        return {
            "superbubbles": [
                {
                    "entrance": self.labels[b.entrance],
                    "exit": self.labels[b.exit],
                    "interior": sorted(self.labels[v] for v in b.interior),
                }
                for b in self.bubbles
            ],
            "filteredCount": 0,
        }

    def to_json(self, indent: Optional[int] = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)


def enumerate_superbubbles(g, cap: Optional[int] = DEFAULT_CAP) -> OracleResult:
    """All superbubbles of ``g`` by exhaustive pair testing.

    ``cap`` bounds ``n``; pass ``None`` to lift it. Any number of sources and
    sinks is fine, but ``g`` must be acyclic.
    """
    if cap is not None and g.n > cap:
        raise OracleCapError(g.n, cap)
    out, inn = _adjacency(g)
    if not _is_acyclic(set(range(g.n)), out):
        raise CycleError(message="graph is cyclic")

    bubbles = []
    for s in range(g.n):
        passing: dict[int, set[int]] = {}
        for t in _closure(out, s) - {s}:
            forward = _closure(out, s, t)
            if t not in forward:
                continue
            backward = _closure(inn, t, s)
            if forward != backward:
                continue
            if not _is_acyclic(forward, out):
                continue
            passing[t] = forward
        for t, members in passing.items():
            if any(other in members for other in passing if other != t):
                continue
            bubbles.append(OracleBubble(s, t, frozenset(members - {s, t})))
    bubbles.sort()
    return OracleResult(bubbles, tuple(g.labels))
