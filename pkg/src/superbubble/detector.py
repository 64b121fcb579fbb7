"""Linear-time superbubble enumeration on a single-source, single-sink DAG.

Pipeline: DFS ranks -> entrance/exit candidate list in rank order ->
backwards scan over the list, validating each (entrance, exit) candidate pair
with one range-min and one range-max query.

The kernels work on ranks, not vertex ids, so every array they touch is
walked in rank order. Sentinels there:

* ``NULL`` (rank 0): no vertex, e.g. no earlier entrance candidate.
* ``NO_BUBBLE`` (-1): validation proved that nothing ends at the exit.

Vertex-level arrays exposed by :class:`DetectorState` use -1 for "none".
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from typing import NamedTuple, Optional, Union

import numpy as np

from ._accel import HAS_NUMBA, jit
from .graph import AugmentedGraph, Graph, augment
from .rmq import RangeIndex, build_range_arrays, query_max, query_min
from .topo import TopoOrder, topological_sort

EXIT = 0
ENTRANCE = 1
NO_BUBBLE = -1
NULL = 0

EV_CALL = 0
EV_GUARD = 1
EV_VALIDATE = 2
EV_ALT_WRITE = 3
EV_REPORT = 4


def candidate_flags(g: Union[AugmentedGraph, Graph]) -> tuple[np.ndarray, np.ndarray]:
    """``(is_entrance, is_exit)`` boolean arrays over vertex ids.

    Entrance: some child has exactly one parent. Exit: some parent has
    exactly one child.
    """
    graph = getattr(g, "graph", g)
    src, dst = graph.edge_arrays()
    is_entrance = np.zeros(graph.n, dtype=np.bool_)
    is_exit = np.zeros(graph.n, dtype=np.bool_)
    is_entrance[src[graph.in_degree[dst] == 1]] = True
    is_exit[dst[graph.out_degree[src] == 1]] = True
    return is_entrance, is_exit


@jit
def _rank_flags_loop(n, out_ptr, out_idx, in_ptr, rank):
    ent_r = np.zeros(n + 1, np.bool_)
    ex_r = np.zeros(n + 1, np.bool_)
    for u in range(n):
        single_child = out_ptr[u + 1] - out_ptr[u] == 1
        for e in range(out_ptr[u], out_ptr[u + 1]):
            v = out_idx[e]
            if in_ptr[v + 1] - in_ptr[v] == 1:
                ent_r[rank[u]] = True
            if single_child:
                ex_r[rank[v]] = True
    return ent_r, ex_r


def _rank_flags(graph: Graph, t: TopoOrder) -> tuple[np.ndarray, np.ndarray]:
    """Candidate flags indexed by rank (slot 0 unused)."""
    if HAS_NUMBA:
        return _rank_flags_loop(graph.n, graph.out_ptr, graph.out_idx, graph.in_ptr, t.rank)
    ent, ex = candidate_flags(graph)
    ent_r = np.zeros(graph.n + 1, dtype=np.bool_)
    ex_r = np.zeros(graph.n + 1, dtype=np.bool_)
    ent_r[t.rank] = ent
    ex_r[t.rank] = ex
    return ent_r, ex_r


def is_entrance(g, v: int) -> bool:
    graph = getattr(g, "graph", g)
    deg = graph.in_degree
    return any(deg[c] == 1 for c in graph.successors(v).tolist())


def is_exit(g, v: int) -> bool:
    graph = getattr(g, "graph", g)
    deg = graph.out_degree
    return any(deg[p] == 1 for p in graph.predecessors(v).tolist())


@jit
def _build_candidates(n, entrance_r, exit_r):
    """Candidate list in rank order; every array here is indexed by rank."""
    cap = 2 * n
    rank = np.empty(cap, np.int64)
    role = np.empty(cap, np.int8)
    prev = np.empty(cap, np.int64)
    nxt = np.empty(cap, np.int64)
    entrance_entry = np.full(n + 1, -1, np.int64)
    exit_entry = np.full(n + 1, -1, np.int64)
    previous_entrance = np.zeros(n + 1, np.int64)
    size = 0
    prev_ent = NULL
    for r in range(1, n + 1):
        previous_entrance[r] = prev_ent
        if exit_r[r]:
            rank[size] = r
            role[size] = EXIT
            prev[size] = size - 1
            nxt[size] = -1
            if size > 0:
                nxt[size - 1] = size
            exit_entry[r] = size
            size += 1
        if entrance_r[r]:
            rank[size] = r
            role[size] = ENTRANCE
            prev[size] = size - 1
            nxt[size] = -1
            if size > 0:
                nxt[size - 1] = size
            entrance_entry[r] = size
            size += 1
            prev_ent = r
    return rank[:size], role[:size], prev[:size], nxt[:size], entrance_entry, exit_entry, previous_entrance


@jit
def _validate(start, end, entrance_r, previous_entrance, pmin, cmax, log2):
    outchild = query_max(cmax, log2, start, end - 1)
    outparent = query_min(pmin, log2, start + 1, end)
    if outchild != end:
        return NO_BUBBLE
    if outparent == start:
        return start
    if entrance_r[outparent]:
        return outparent
    return previous_entrance[outparent]


@jit
def _log_event(events, count, kind, a, b, c):
    if count == events.shape[0]:
        grown = np.empty((2 * events.shape[0], 4), np.int64)
        grown[:count] = events[:count]
        events = grown
    events[count, 0] = kind
    events[count, 1] = a
    events[count, 2] = b
    events[count, 3] = c
    return events, count + 1


@jit
def _scan(cand, role, prev, nxt, entrance_entry, entrance_r, previous_entrance, pmin, cmax, log2, record):
    """Backwards pass over the candidate list, entirely in rank space.

    The nested-superbubble recursion is unrolled onto ``frames``: each frame
    is the entrance entry of a reported superbubble whose interior is still
    being drained from the list tail.
    """
    n = entrance_r.shape[0] - 1
    length = cand.shape[0]
    prev = prev.copy()
    nxt = nxt.copy()
    alt = np.zeros(n + 1, np.int64)
    rep_s = np.empty(length + 1, np.int64)
    rep_t = np.empty(length + 1, np.int64)
    nrep = 0
    validate_calls = 0
    events = np.empty((64 if record else 1, 4), np.int64)
    nev = 0
    frames = np.empty(length + 1, np.int64)
    ftop = 0
    head = 0 if length > 0 else -1
    tail = length - 1

    while tail >= 0:
        if role[tail] == ENTRANCE:
            tail = prev[tail]
            if tail >= 0:
                nxt[tail] = -1
            continue
        call_start = head
        call_exit = tail
        pending = True
        while True:
            if pending:
                pending = False
                exit_r = cand[call_exit]
                start_r = cand[call_start] if call_start >= 0 else NULL
                if record:
                    events, nev = _log_event(events, nev, EV_CALL, start_r, exit_r, ftop)
                if start_r == NULL or start_r >= exit_r:
                    if record:
                        events, nev = _log_event(events, nev, EV_GUARD, start_r, exit_r, ftop)
                    tail = prev[tail]
                    if tail >= 0:
                        nxt[tail] = -1
                else:
                    s = previous_entrance[exit_r]
                    found = False
                    while s != NULL and s >= start_r:
                        valid = _validate(s, exit_r, entrance_r, previous_entrance, pmin, cmax, log2)
                        validate_calls += 1
                        if record:
                            events, nev = _log_event(events, nev, EV_VALIDATE, s, exit_r, valid)
                        if valid == s:
                            found = True
                            break
                        if valid == alt[s] or valid == NO_BUBBLE:
                            break
                        alt[s] = valid
                        if record:
                            events, nev = _log_event(events, nev, EV_ALT_WRITE, s, valid, 0)
                        s = valid
                    tail = prev[tail]
                    if tail >= 0:
                        nxt[tail] = -1
                    if found:
                        rep_s[nrep] = s
                        rep_t[nrep] = exit_r
                        nrep += 1
                        if record:
                            events, nev = _log_event(events, nev, EV_REPORT, s, exit_r, ftop)
                        frames[ftop] = entrance_entry[s]
                        ftop += 1
            if ftop == 0:
                break
            s_entry = frames[ftop - 1]
            if tail == s_entry:
                ftop -= 1
            elif role[tail] == EXIT:
                call_start = nxt[s_entry]
                call_exit = tail
                pending = True
            else:
                tail = prev[tail]
                if tail >= 0:
                    nxt[tail] = -1
    return rep_s[:nrep], rep_t[:nrep], validate_calls, events[:nev]


@dataclass
class CandidateList:
    """Doubly linked candidate list stored as parallel arrays.

    Entry ``i`` holds ``vertex[i]`` (rank ``rank[i]``) with ``role[i]``
    (``EXIT``/``ENTRANCE``); ``prev``/``next`` link entries (-1 ends).
    ``entrance_entry[r]`` and ``exit_entry[r]`` point from a rank to its
    entries (-1 if absent).
    """

    vertex: np.ndarray
    rank: np.ndarray
    role: np.ndarray
    prev: np.ndarray
    next: np.ndarray
    entrance_entry: np.ndarray
    exit_entry: np.ndarray

    @property
    def head(self) -> int:
        return 0 if self.vertex.size else -1

    @property
    def tail(self) -> int:
        return self.vertex.size - 1

    def __len__(self) -> int:
        return int(self.vertex.size)

    def entries(self) -> list[tuple[int, int]]:
        out = []
        i = self.head
        while i >= 0:
            out.append((int(self.vertex[i]), int(self.role[i])))
            i = int(self.next[i])
        return out


@dataclass
class DetectorState:
    """Per-vertex views plus the rank-indexed arrays the kernels use.

    ``previous_entrance[v]`` is the nearest entrance candidate ranked below
    ``v`` and ``alternative_entrance[v]`` the last alternative recorded for
    entrance ``v``; both hold -1 for none.
    """

    rank: np.ndarray
    vertex_at: np.ndarray
    is_entrance: np.ndarray
    previous_entrance: np.ndarray
    alternative_entrance: np.ndarray
    entrance_r: np.ndarray
    previous_entrance_r: np.ndarray


def _candidates(graph: Graph, t: TopoOrder):
    ent_r, ex_r = _rank_flags(graph, t)
    return (ent_r, ex_r) + tuple(_build_candidates(graph.n, ent_r, ex_r))


def build_candidates(g: Union[AugmentedGraph, Graph], t: TopoOrder) -> tuple[CandidateList, DetectorState]:
    graph = getattr(g, "graph", g)
    vertex_at = t.vertex_at
    ent_r, _, ranks, role, prev, nxt, ent_entry, exit_entry, previous_r = _candidates(graph, t)
    cands = CandidateList(vertex_at[ranks], ranks, role, prev, nxt, ent_entry, exit_entry)
    state = DetectorState(
        rank=t.rank,
        vertex_at=vertex_at,
        is_entrance=ent_r[t.rank],
        previous_entrance=vertex_at[previous_r[t.rank]],
        alternative_entrance=np.full(graph.n, -1, dtype=np.int64),
        entrance_r=ent_r,
        previous_entrance_r=previous_r,
    )
    return cands, state


class Outcome(Enum):
    VALID = "valid"
    ALTERNATIVE = "alternative"
    NO_BUBBLE = "no_bubble"


class Validation(NamedTuple):
    outcome: Outcome
    vertex: Optional[int] = None


def validate_superbubble(state: DetectorState, index: RangeIndex, start: int, end: int) -> Validation:
    """Check the candidate pair ``(start, end)`` in O(1).

    Returns VALID, NO_BUBBLE, or ALTERNATIVE carrying the next entrance
    candidate worth trying (``None`` when there is no earlier one).
    """
    rs, re = int(state.rank[start]), int(state.rank[end])
    if not rs < re:
        raise ValueError(f"rank of start ({rs}) must be below rank of end ({re})")
    code = int(_validate(
        rs, re, state.entrance_r, state.previous_entrance_r,
        index.parent_min.table, index.child_max.table, index.parent_min.log2,
    ))
    if code == NO_BUBBLE:
        return Validation(Outcome.NO_BUBBLE)
    if code == rs:
        return Validation(Outcome.VALID, start)
    return Validation(Outcome.ALTERNATIVE, None if code == NULL else int(state.vertex_at[code]))


class Superbubble(NamedTuple):
    entrance: str
    exit: str


@dataclass
class SuperbubbleReport:
    """Superbubbles in decreasing rank of their exits, as input-graph labels."""

    items: list[Superbubble] = field(default_factory=list)
    filtered_count: int = 0
    validate_calls: int = 0

    def pairs(self) -> set[tuple[str, str]]:
        return {(b.entrance, b.exit) for b in self.items}

    def to_dict(self) -> dict:
        return {
            "superbubbles": [{"entrance": b.entrance, "exit": b.exit} for b in self.items],
            "filteredCount": self.filtered_count,
        }

    def to_json(self, indent: Optional[int] = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)


@dataclass
class Prepared:
    """Everything the scan needs; built once per graph."""

    aug: AugmentedGraph
    order: TopoOrder
    index: RangeIndex


def prepare(g: Union[AugmentedGraph, Graph]) -> Prepared:
    aug = g if isinstance(g, AugmentedGraph) else augment(g)
    order = topological_sort(aug)
    index = RangeIndex.build(build_range_arrays(aug, order))
    return Prepared(aug, order, index)


def _run_scan(p: Prepared, record: bool, kernel=_scan):
    # skips the per-vertex views build_candidates adds for callers
    ent_r, _, ranks, role, prev, nxt, ent_entry, _, previous_r = _candidates(p.aug.graph, p.order)
    rep_s, rep_t, calls, events = kernel(
        ranks, role, prev, nxt, ent_entry, ent_r, previous_r,
        p.index.parent_min.table, p.index.child_max.table, p.index.parent_min.log2,
        record,
    )
    vertex_at = p.order.vertex_at
    return vertex_at[rep_s], vertex_at[rep_t], calls, events


def _assemble(aug: AugmentedGraph, rep_s, rep_t, validate_calls) -> SuperbubbleReport:
    labels = aug.graph.labels
    report = SuperbubbleReport(validate_calls=int(validate_calls))
    for s, t in zip(rep_s.tolist(), rep_t.tolist()):
        if s == aug.artificial_source or t == aug.artificial_sink:
            report.filtered_count += 1
        else:
            report.items.append(Superbubble(labels[s], labels[t]))
    return report


def scan(p: Prepared) -> SuperbubbleReport:
    rep_s, rep_t, calls, _ = _run_scan(p, False)
    return _assemble(p.aug, rep_s, rep_t, calls)


def detect(g: Union[AugmentedGraph, Graph]) -> SuperbubbleReport:
    """All superbubbles of a DAG, in decreasing topological rank of exit.

    A plain :class:`Graph` is augmented first; superbubbles that start at the
    artificial source or end at the artificial sink are dropped and counted
    in ``filtered_count``.
    """
    return scan(prepare(g))


_EVENT_NAMES = {EV_CALL: "call", EV_GUARD: "guard", EV_VALIDATE: "validate", EV_ALT_WRITE: "alt_write", EV_REPORT: "report"}


def _decode_events(labels, vertex_at, events: np.ndarray) -> list[dict]:
    # kernel events carry ranks; NULL (0) decodes to None
    def lab(r):
        return labels[vertex_at[r]] if r > 0 else None

    out = []
    for kind, a, b, c in events.tolist():
        name = _EVENT_NAMES[kind]
        if kind in (EV_CALL, EV_GUARD):
            out.append({"event": name, "start": lab(a), "exit": lab(b), "depth": c})
        elif kind == EV_VALIDATE:
            ev = {"event": name, "entrance": lab(a), "exit": lab(b)}
            if c == NO_BUBBLE:
                ev["outcome"] = Outcome.NO_BUBBLE.value
            elif c == a:
                ev["outcome"] = Outcome.VALID.value
            else:
                ev["outcome"] = Outcome.ALTERNATIVE.value
                ev["alternative"] = lab(c)
                ev["alternative_rank"] = int(c)
            ev["entrance_rank"] = int(a)
            ev["exit_rank"] = int(b)
            out.append(ev)
        elif kind == EV_ALT_WRITE:
            out.append({"event": name, "entrance": lab(a), "value": lab(b)})
        else:
            out.append({"event": name, "entrance": lab(a), "exit": lab(b), "depth": c})
    return out


def trace_detect(g: Union[AugmentedGraph, Graph]) -> tuple[SuperbubbleReport, list[dict]]:
    """Like :func:`detect`, plus the ordered event log of the scan.

    Events are ``call``/``guard`` (a report call and its early return),
    ``validate``, ``alt_write`` and ``report``; labels refer to the
    augmented graph, so artificial vertices show their reserved labels.
    """
    p = prepare(g)
    rep_s, rep_t, calls, events = _run_scan(p, True)
    return _assemble(p.aug, rep_s, rep_t, calls), _decode_events(p.aug.graph.labels, p.order.vertex_at, events)
