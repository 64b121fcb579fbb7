"""Immutable DAG storage, edge-list ingestion, augmentation and DOT export.

Vertices are dense ids ``0..n-1`` assigned in first-appearance order. Both
adjacency directions are kept in CSR form (``ptr``/``idx`` int64 arrays) so
the kernels can walk them without Python objects.
"""
from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Sequence

import numpy as np

from ._accel import HAS_NUMBA, jit
from .errors import NotDagError, ParseError, SelfLoopError

SOURCE_LABEL = "__source__"
SINK_LABEL = "__sink__"
RESERVED_LABELS = frozenset({SOURCE_LABEL, SINK_LABEL})
MAX_LABEL_BYTES = 255


def _csr(n: int, keys: np.ndarray, values: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    order = np.argsort(keys, kind="stable")
    ptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(keys, minlength=n), out=ptr[1:])
    return ptr, np.ascontiguousarray(values[order], dtype=np.int64)


def _extend_csr_numpy(ptr, idx, n_total, keys, values):
    n_old = ptr.size - 1
    deg_old = np.diff(ptr)
    deg = np.zeros(n_total, dtype=np.int64)
    deg[:n_old] = deg_old
    new_ptr = np.zeros(n_total + 1, dtype=np.int64)
    np.cumsum(deg + np.bincount(keys, minlength=n_total), out=new_ptr[1:])
    out = np.empty(new_ptr[-1], dtype=np.int64)
    out[np.arange(idx.size) + np.repeat(new_ptr[:n_old] - ptr[:-1], deg_old)] = idx
    order = np.argsort(keys, kind="stable")
    ks = keys[order]
    within = np.arange(ks.size) - np.searchsorted(ks, ks, side="left")
    out[new_ptr[ks] + deg[ks] + within] = values[order]
    return new_ptr, out


@jit
def _extend_csr_loop(ptr, idx, n_total, keys, values):
    n_old = ptr.shape[0] - 1
    count = np.zeros(n_total, np.int64)
    for i in range(n_old):
        count[i] = ptr[i + 1] - ptr[i]
    for k in keys:
        count[k] += 1
    new_ptr = np.zeros(n_total + 1, np.int64)
    for i in range(n_total):
        new_ptr[i + 1] = new_ptr[i] + count[i]
    out = np.empty(new_ptr[n_total], np.int64)
    fill = new_ptr[:n_total].copy()
    for i in range(n_old):
        for e in range(ptr[i], ptr[i + 1]):
            out[fill[i]] = idx[e]
            fill[i] += 1
    for j in range(keys.shape[0]):
        out[fill[keys[j]]] = values[j]
        fill[keys[j]] += 1
    return new_ptr, out


def _extend_csr(ptr: np.ndarray, idx: np.ndarray, n_total: int, keys: np.ndarray, values: np.ndarray):
    """Append edges ``keys[i] -> values[i]`` after each vertex's existing ones. O(n + m)."""
    kernel = _extend_csr_loop if HAS_NUMBA else _extend_csr_numpy
    return kernel(ptr, idx, n_total, keys, values)


def _frozen(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


class Graph:
    """A simple directed graph with no self-loops or parallel edges.

    Adjacency order is the order in which edges were supplied; the DFS in
    :mod:`superbubble.topo` visits children in that order.
    """

    __slots__ = ("labels", "_ids", "out_ptr", "out_idx", "in_ptr", "in_idx")

    def __init__(self, labels, out_ptr, out_idx, in_ptr, in_idx):
        self.labels: tuple[str, ...] = tuple(labels)
        self._ids = None
        self.out_ptr = _frozen(out_ptr)
        self.out_idx = _frozen(out_idx)
        self.in_ptr = _frozen(in_ptr)
        self.in_idx = _frozen(in_idx)

    @classmethod
    def from_edges(cls, labels: Sequence[str], src, dst) -> "Graph":
        """Build from parallel edge arrays. Rejects self-loops and duplicate edges."""
        n = len(labels)
        src = np.asarray(src, dtype=np.int64).reshape(-1)
        dst = np.asarray(dst, dtype=np.int64).reshape(-1)
        if src.shape != dst.shape:
            raise ValueError("src and dst must have the same length")
        if src.size:
            if min(src.min(), dst.min()) < 0 or max(src.max(), dst.max()) >= n:
                raise ValueError("edge endpoint out of range")
            loops = np.flatnonzero(src == dst)
            if loops.size:
                raise SelfLoopError(labels[int(src[loops[0]])])
            if np.unique(src * n + dst).size != src.size:
                raise ValueError("duplicate edges")
        out_ptr, out_idx = _csr(n, src, dst)
        in_ptr, in_idx = _csr(n, dst, src)
        g = cls(labels, out_ptr, out_idx, in_ptr, in_idx)
        g._index()
        return g

    @classmethod
    def from_label_edges(cls, edges: Iterable[tuple[str, str]]) -> "Graph":
        """Convenience constructor from ``(u, v)`` label pairs; duplicates are dropped."""
        ids: dict[str, int] = {}
        seen = set()
        src, dst = [], []
        for u, v in edges:
            a = ids.setdefault(u, len(ids))
            b = ids.setdefault(v, len(ids))
            if (a, b) in seen:
                continue
            seen.add((a, b))
            src.append(a)
            dst.append(b)
        return cls.from_edges(list(ids), src, dst)

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def m(self) -> int:
        return int(self.out_idx.size)

    def _index(self) -> dict[str, int]:
        if self._ids is None:
            ids = {label: i for i, label in enumerate(self.labels)}
            if len(ids) != len(self.labels):
                raise ValueError("vertex labels must be unique")
            self._ids = ids
        return self._ids

    def id_of(self, label: str) -> int:
        return self._index()[label]

    def __contains__(self, label) -> bool:
        return label in self._index()

    def successors(self, v: int) -> np.ndarray:
        return self.out_idx[self.out_ptr[v] : self.out_ptr[v + 1]]

    def predecessors(self, v: int) -> np.ndarray:
        return self.in_idx[self.in_ptr[v] : self.in_ptr[v + 1]]

    @property
    def out_degree(self) -> np.ndarray:
        return np.diff(self.out_ptr)

    @property
    def in_degree(self) -> np.ndarray:
        return np.diff(self.in_ptr)

    def out_adj(self) -> list[list[int]]:
        return [self.successors(v).tolist() for v in range(self.n)]

    def in_adj(self) -> list[list[int]]:
        return [self.predecessors(v).tolist() for v in range(self.n)]

    def edge_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """``(src, dst)`` in out-adjacency order."""
        src = np.repeat(np.arange(self.n, dtype=np.int64), self.out_degree)
        return src, self.out_idx.copy()

    def edges(self) -> Iterator[tuple[int, int]]:
        for v in range(self.n):
            for w in self.successors(v).tolist():
                yield v, w

    def label_edges(self) -> Iterator[tuple[str, str]]:
        for v, w in self.edges():
            yield self.labels[v], self.labels[w]

    def sources(self) -> np.ndarray:
        return np.flatnonzero(self.in_degree == 0)

    def sinks(self) -> np.ndarray:
        return np.flatnonzero(self.out_degree == 0)

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"


def _parse_label(token: str, lineno: int) -> str:
    if len(token.encode("utf-8")) > MAX_LABEL_BYTES:
        raise ParseError(f"label longer than {MAX_LABEL_BYTES} bytes", lineno)
    if token in RESERVED_LABELS:
        raise ParseError(f"label {token!r} is reserved", lineno)
    return token


def load_edge_list(text) -> tuple[Graph, int]:
    """Parse ``<label> <label>`` lines into a :class:`Graph`.

    Returns the graph and the number of duplicate edge lines that were
    collapsed. Blank lines and lines starting with ``#`` are ignored.
    """
    if isinstance(text, (bytes, bytearray, memoryview)):
        try:
            text = bytes(text).decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"input is not valid UTF-8 ({exc.reason} at byte {exc.start})") from None

    ids: dict[str, int] = {}
    seen: set[tuple[int, int]] = set()
    src: list[int] = []
    dst: list[int] = []
    duplicates = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(f"expected '<label> <label>', got {line!r}", lineno)
        u = _parse_label(parts[0], lineno)
        v = _parse_label(parts[1], lineno)
        if u == v:
            raise SelfLoopError(u, lineno)
        a = ids.setdefault(u, len(ids))
        b = ids.setdefault(v, len(ids))
        if (a, b) in seen:
            duplicates += 1
            continue
        seen.add((a, b))
        src.append(a)
        dst.append(b)
    if not src:
        raise ParseError("no edges in input")
    return Graph.from_edges(list(ids), src, dst), duplicates


def write_edge_list(g: Graph, header: Iterable[str] = ()) -> str:
    lines = [f"# {h}" for h in header]
    lines.extend(f"{u} {v}" for u, v in g.label_edges())
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class AugmentedGraph:
    """Single-source, single-sink view of a DAG-shaped graph.

    ``graph`` keeps the original vertex ids; an artificial source and sink,
    when needed, are appended after them.
    """

    graph: Graph
    original: Graph
    source: int
    sink: int
    artificial_source: Optional[int] = None
    artificial_sink: Optional[int] = None

    def original_label(self, v: int) -> Optional[str]:
        """Label in the input graph, or None for an artificial vertex."""
        return self.original.labels[v] if v < self.original.n else None

    def is_artificial(self, v: int) -> bool:
        return v >= self.original.n


def augment(g: Graph) -> AugmentedGraph:
    if g.n == 0:
        raise ValueError("graph has no vertices")
    sources = g.sources()
    sinks = g.sinks()
    if sources.size == 0 or sinks.size == 0:
        raise NotDagError("not a DAG-shaped input: no vertex with in-degree 0 or no vertex with out-degree 0")
    if sources.size == 1 and sinks.size == 1:
        return AugmentedGraph(g, g, int(sources[0]), int(sinks[0]))

    labels = g.labels
    new_src: list[np.ndarray] = []
    new_dst: list[np.ndarray] = []
    r = t = None
    if sources.size > 1:
        if SOURCE_LABEL in g:
            raise ParseError(f"label {SOURCE_LABEL!r} is reserved")
        r = len(labels)
        labels += (SOURCE_LABEL,)
        new_src.append(np.full(sources.size, r, dtype=np.int64))
        new_dst.append(sources)
    if sinks.size > 1:
        if SINK_LABEL in g:
            raise ParseError(f"label {SINK_LABEL!r} is reserved")
        t = len(labels)
        labels += (SINK_LABEL,)
        new_src.append(sinks)
        new_dst.append(np.full(sinks.size, t, dtype=np.int64))
    # the new edges touch fresh vertices only, so no duplicate check is needed
    es = np.concatenate(new_src)
    ed = np.concatenate(new_dst)
    out_ptr, out_idx = _extend_csr(g.out_ptr, g.out_idx, len(labels), es, ed)
    in_ptr, in_idx = _extend_csr(g.in_ptr, g.in_idx, len(labels), ed, es)
    h = Graph(labels, out_ptr, out_idx, in_ptr, in_idx)
    return AugmentedGraph(
        h,
        g,
        source=int(sources[0]) if r is None else r,
        sink=int(sinks[0]) if t is None else t,
        artificial_source=r,
        artificial_sink=t,
    )


_DOT_ID = re.compile(r"^(?:[A-Za-z_\u0080-\uffff][A-Za-z0-9_\u0080-\uffff]*|-?(?:\.[0-9]+|[0-9]+(?:\.[0-9]*)?))$")
_DOT_KEYWORDS = {"node", "edge", "graph", "digraph", "subgraph", "strict"}


def _dot_id(label: str) -> str:
    if _DOT_ID.match(label) and label.lower() not in _DOT_KEYWORDS:
        return label
    return '"' + label.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _members(g: Graph, s: int, t: int) -> set[int]:
    seen = {s}
    queue = deque([s])
    while queue:
        v = queue.popleft()
        if v == t:
            continue
        for w in g.successors(v).tolist():
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return seen


def export_dot(g: Graph, report=None, name: str = "G") -> str:
    """Render ``g`` as Graphviz text.

    With a report, entrances and exits are coloured and the interior of each
    superbubble becomes a ``cluster`` subgraph; nested superbubbles nest.
    """
    items = list(report.items) if report is not None else []
    out = [f"digraph {_dot_id(name)} {{"]
    if not items:
        out.extend(f"  {_dot_id(g.labels[v])};" for v in range(g.n) if g.in_degree[v] == 0 and g.out_degree[v] == 0)
        out.extend(f"  {_dot_id(u)} -> {_dot_id(v)};" for u, v in g.label_edges())
        out.append("}")
        return "\n".join(out) + "\n"

    entrances = {g.id_of(b.entrance) for b in items}
    exits = {g.id_of(b.exit) for b in items}
    for v in sorted(entrances | exits):
        if v in entrances and v in exits:
            attrs = 'style=filled, fillcolor=orange, sb_role="entrance+exit"'
        elif v in entrances:
            attrs = 'style=filled, fillcolor=palegreen, sb_role="entrance"'
        else:
            attrs = 'style=filled, fillcolor=lightcoral, sb_role="exit"'
        out.append(f"  {_dot_id(g.labels[v])} [{attrs}];")

    groups = []
    for i, b in enumerate(items):
        s, t = g.id_of(b.entrance), g.id_of(b.exit)
        groups.append((i, s, t, frozenset(_members(g, s, t) - {s, t})))
    # A superbubble nests inside another when its entrance, exit and interior
    # all lie in the other's interior; otherwise the two are disjoint.
    groups.sort(key=lambda x: -len(x[3]))
    parent: dict[int, Optional[int]] = {}
    for k, (i, s, t, inner) in enumerate(groups):
        parent[i] = None
        closed = inner | {s, t}
        for j, _, _, outer in reversed(groups[:k]):
            if closed <= outer:
                parent[i] = j
                break
    children: dict[Optional[int], list[int]] = {}
    for i, _, _, _ in sorted(groups):
        children.setdefault(parent[i], []).append(i)
    by_index = {i: (s, t, inner) for i, s, t, inner in groups}

    def emit(i: int, depth: int) -> None:
        s, t, inner = by_index[i]
        pad = "  " * depth
        out.append(f'{pad}subgraph cluster_sb{i} {{')
        out.append(f'{pad}  label="<{g.labels[s]}, {g.labels[t]}>";')
        nested = set()
        for c in children.get(i, []):
            emit(c, depth + 1)
            nested |= by_index[c][2]
        for v in sorted(inner - nested):
            out.append(f"{pad}  {_dot_id(g.labels[v])};")
        out.append(f"{pad}}}")

    for i in children.get(None, []):
        emit(i, 1)

    direct = {(s, t) for _, s, t, inner in groups if not inner}
    for u, v in g.edges():
        attrs = " [color=red, penwidth=2]" if (u, v) in direct else ""
        out.append(f"  {_dot_id(g.labels[u])} -> {_dot_id(g.labels[v])}{attrs};")
    out.append("}")
    return "\n".join(out) + "\n"
