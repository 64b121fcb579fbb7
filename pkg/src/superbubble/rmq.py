"""Rank-indexed parent/child extremes and sparse-table range queries.

All arrays here are indexed by topological rank ``1..n``; slot 0 is padding
so that rank ``r`` lives at index ``r``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._accel import HAS_NUMBA, jit
from .errors import RangeQueryError

MIN = "min"
MAX = "max"


@jit
def _range_arrays_loop(n, out_ptr, out_idx, rank):
    out_parent = np.full(n + 1, n + 1, np.int64)
    out_child = np.zeros(n + 1, np.int64)
    for u in range(n):
        ru = rank[u]
        for e in range(out_ptr[u], out_ptr[u + 1]):
            rv = rank[out_idx[e]]
            if rv > out_child[ru]:
                out_child[ru] = rv
            if ru < out_parent[rv]:
                out_parent[rv] = ru
    return out_parent, out_child


def _range_arrays_numpy(n, out_ptr, out_idx, rank):
    src = np.repeat(np.arange(n, dtype=np.int64), np.diff(out_ptr))
    rs = rank[src]
    rd = rank[out_idx]
    out_parent = np.full(n + 1, n + 1, np.int64)
    out_child = np.zeros(n + 1, np.int64)
    np.minimum.at(out_parent, rd, rs)
    np.maximum.at(out_child, rs, rd)
    return out_parent, out_child


@dataclass(frozen=True)
class RangeArrays:
    """``out_parent[r]``: smallest rank among parents of the rank-``r`` vertex
    (``n + 1`` if it has none). ``out_child[r]``: largest rank among its
    children (0 if none)."""

    out_parent: np.ndarray
    out_child: np.ndarray

    @property
    def n(self) -> int:
        return self.out_parent.size - 1


def build_range_arrays(g, t) -> RangeArrays:
    graph = getattr(g, "graph", g)
    kernel = _range_arrays_loop if HAS_NUMBA else _range_arrays_numpy
    out_parent, out_child = kernel(graph.n, graph.out_ptr, graph.out_idx, np.asarray(t.rank, dtype=np.int64))
    return RangeArrays(out_parent, out_child)


def _log2_table(size: int) -> np.ndarray:
    """``table[x] == floor(log2(x))`` for ``1 <= x < size``."""
    table = np.zeros(max(size, 2), dtype=np.int64)
    k = 0
    while (1 << k) < size:
        table[1 << k : 1 << (k + 1)] = k
        k += 1
    return table


def sparse_table(base: np.ndarray, mode: str) -> np.ndarray:
    """Level ``k`` row ``i`` holds the extreme of ``base[i : i + 2**k]``."""
    op = np.minimum if mode == MIN else np.maximum
    size = base.size
    levels = max(int(size).bit_length(), 1)
    dtype = np.int32 if size and max(abs(int(base.min())), abs(int(base.max()))) < 2**31 - 1 else np.int64
    table = np.empty((levels, size), dtype=dtype)
    table[0] = base
    for k in range(1, levels):
        half = 1 << (k - 1)
        span = size - (1 << k) + 1
        op(table[k - 1, :span], table[k - 1, half : half + span], out=table[k, :span])
        table[k, span:] = table[k - 1, span:]
    return table


@jit
def query_min(table, log2, i, j):
    k = log2[j - i + 1]
    a = table[k, i]
    b = table[k, j - (1 << k) + 1]
    return a if a <= b else b


@jit
def query_max(table, log2, i, j):
    k = log2[j - i + 1]
    a = table[k, i]
    b = table[k, j - (1 << k) + 1]
    return a if a >= b else b


class RmqIndex:
    """Constant-time range minimum or maximum over ``base[1..n]``.

    ``base[0]`` is padding and never queried. Preprocessing is a sparse
    table, O(n log n) time and space.
    """

    def __init__(self, base, mode: str = MIN):
        if mode not in (MIN, MAX):
            raise ValueError(f"mode must be {MIN!r} or {MAX!r}")
        self.base = np.ascontiguousarray(base, dtype=np.int64)
        self.base.flags.writeable = False
        self.mode = mode
        self.table = sparse_table(self.base, mode)
        self.table.flags.writeable = False
        self.log2 = _log2_table(self.base.size + 1)
        self.log2.flags.writeable = False

    @classmethod
    def from_values(cls, values, mode: str = MIN) -> "RmqIndex":
        """Index ``values`` as ``base[1..len(values)]``."""
        values = np.asarray(values, dtype=np.int64)
        pad = np.iinfo(np.int64).max if mode == MIN else np.iinfo(np.int64).min
        return cls(np.concatenate(([pad], values)), mode)

    @property
    def n(self) -> int:
        return self.base.size - 1

    def query(self, i: int, j: int) -> int:
        if not (1 <= i <= j <= self.n):
            raise RangeQueryError(f"invalid range [{i}, {j}] for n={self.n}")
        if self.mode == MIN:
            return int(query_min(self.table, self.log2, i, j))
        return int(query_max(self.table, self.log2, i, j))


def range_min(idx: RmqIndex, i: int, j: int) -> int:
    if idx.mode != MIN:
        raise ValueError("range_min needs a min-mode index")
    return idx.query(i, j)


def range_max(idx: RmqIndex, i: int, j: int) -> int:
    if idx.mode != MAX:
        raise ValueError("range_max needs a max-mode index")
    return idx.query(i, j)


@dataclass(frozen=True)
class RangeIndex:
    """The pair of indexes the validator queries."""

    arrays: RangeArrays
    parent_min: RmqIndex
    child_max: RmqIndex

    @classmethod
    def build(cls, arrays: RangeArrays) -> "RangeIndex":
        return cls(arrays, RmqIndex(arrays.out_parent, MIN), RmqIndex(arrays.out_child, MAX))
