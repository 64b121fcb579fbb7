"""Seeded random DAG generator with planted diamond superbubbles.

Vertices are laid out along a random topological sequence. Every vertex
after the first ``roots`` gets one parent from earlier in the sequence
(a random spanning forest), planted diamonds ``s -> a, s -> b, a -> t,
b -> t`` are wired in with their interiors isolated, and ``extra_edges``
further forward edges are sampled on top.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass, replace
from typing import Optional

import numpy as np

from .errors import InfeasibleSpecError
from .graph import Graph

PRNG = "numpy.PCG64"

FREE, S, A, B, T = 0, 1, 2, 3, 4


@dataclass(frozen=True)
class GenSpec:
    n: int
    extra_edges: int = 0
    planted: int = 0
    seed: int = 0
    max_outdeg: Optional[int] = None
    roots: int = 1
    # max distance in the topological sequence for extra edges; None = unbounded
    span: Optional[int] = None

    def header(self) -> list[str]:
        fields = " ".join(f"{k}={v}" for k, v in asdict(self).items())
        return [f"generator prng={PRNG} {fields}"]


def _layout(spec: GenSpec, rng: np.random.Generator) -> np.ndarray:
    tokens = np.zeros(spec.n - 3 * spec.planted, dtype=np.int8)
    tokens[: spec.planted] = 1
    rng.shuffle(tokens)
    kinds = []
    for tok in tokens.tolist():
        kinds.extend((S, A, B, T) if tok else (FREE,))
    return np.array(kinds, dtype=np.int8)


def generate(spec: GenSpec) -> Graph:
    """Build the DAG described by ``spec``. Same spec, same graph."""
    n = spec.n
    if n < 2:
        raise InfeasibleSpecError("need at least 2 vertices")
    if spec.extra_edges < 0 or spec.planted < 0 or spec.roots < 1:
        raise InfeasibleSpecError("counts must be non-negative and roots >= 1")
    if 4 * spec.planted > n:
        raise InfeasibleSpecError(f"{spec.planted} planted diamonds need {4 * spec.planted} vertices, n={n}")
    if spec.extra_edges > n * (n - 1) // 2:
        raise InfeasibleSpecError(f"extra_edges={spec.extra_edges} exceeds n(n-1)/2={n * (n - 1) // 2}")
    if spec.max_outdeg is not None and spec.max_outdeg < 2 and spec.planted:
        raise InfeasibleSpecError("planted diamonds need max_outdeg >= 2")

    rng = np.random.Generator(np.random.PCG64(spec.seed))
    kind = _layout(spec, rng)
    can_out_arr = (kind == FREE) | (kind == T)
    can_out = can_out_arr.tolist()
    can_in = ((kind == FREE) | (kind == S)).tolist()
    limit = spec.max_outdeg if spec.max_outdeg is not None else n
    outdeg = [0] * n
    src: list[int] = []
    dst: list[int] = []
    edges: set[tuple[int, int]] = set()

    def add(u: int, v: int) -> None:
        src.append(u)
        dst.append(v)
        edges.add((u, v))
        outdeg[u] += 1

    for p in np.flatnonzero(kind == S).tolist():
        for u, v in ((p, p + 1), (p, p + 2), (p + 1, p + 3), (p + 2, p + 3)):
            add(u, v)

    draws = rng.random(n).tolist()
    for p in range(spec.roots, n):
        if not can_in[p]:
            continue
        q = int(draws[p] * p)
        if not (can_out[q] and outdeg[q] < limit):
            ok = np.flatnonzero(can_out_arr[:p] & (np.asarray(outdeg[:p]) < limit))
            if ok.size == 0:
                continue
            q = int(ok[rng.integers(ok.size)])
        add(q, p)

    want = spec.extra_edges
    added = 0
    attempts = 0
    budget = 64 * want + 1024
    while added < want and attempts < budget:
        batch = max(2 * (want - added), 64)
        attempts += batch
        a = rng.integers(0, n, size=batch)
        if spec.span is None:
            b = rng.integers(0, n, size=batch)
        else:
            b = a + rng.integers(1, spec.span + 1, size=batch)
        lo = np.minimum(a, b)
        hi = np.maximum(a, b)
        keep = (lo != hi) & (hi < n)
        for u, v in zip(lo[keep].tolist(), hi[keep].tolist()):
            if can_out[u] and can_in[v] and outdeg[u] < limit and (u, v) not in edges:
                add(u, v)
                added += 1
                if added == want:
                    break
    if added < want:
        raise InfeasibleSpecError(f"could only place {added} of {want} extra edges")

    # hide the layout: vertex ids are a random relabelling, edge order is shuffled
    perm = rng.permutation(n)
    order = rng.permutation(len(src))
    s = perm[np.asarray(src, dtype=np.int64)[order]]
    d = perm[np.asarray(dst, dtype=np.int64)[order]]
    return Graph.from_edges([str(i) for i in range(n)], s, d)


def campaign_spec(seed: int, max_n: int = 60, max_m: int = 180) -> GenSpec:
    """A varied small spec for differential testing, derived from ``seed``."""
    rng = np.random.Generator(np.random.PCG64([seed, 0x5B]))
    n = int(rng.integers(2, max_n + 1))
    planted = int(rng.integers(0, n // 8 + 1))
    base = n - 1 + planted
    pairs = n * (n - 1) // 2
    top = max(0, min(max_m - base, 2 * n, (pairs - base) // 3))
    extra = int(rng.integers(0, top + 1))
    span = None if rng.random() < 0.5 else int(rng.integers(2, 8))
    max_outdeg = 4 if rng.random() < 0.3 else None
    roots = 1 if rng.random() < 0.7 else int(rng.integers(2, 4))
    return GenSpec(n=n, extra_edges=extra, planted=planted, seed=seed,
                   max_outdeg=max_outdeg, roots=roots, span=span)


def campaign_graph(seed: int, max_n: int = 60, max_m: int = 180) -> tuple[GenSpec, Graph]:
    """:func:`campaign_spec` made feasible by halving ``extra_edges`` as needed."""
    spec = campaign_spec(seed, max_n, max_m)
    while True:
        try:
            return spec, generate(spec)
        except InfeasibleSpecError:
            if spec.extra_edges == 0:
                raise
            spec = replace(spec, extra_edges=spec.extra_edges // 2)
