"""Differential check of the detector against the brute-force oracle."""
from __future__ import annotations

from dataclasses import dataclass
from multiprocessing import Pool
from typing import Callable, Iterable, Optional

from .detector import SuperbubbleReport, detect
from .generate import GenSpec, campaign_graph, generate
from .graph import Graph
from .oracle import DEFAULT_CAP, enumerate_superbubbles


@dataclass
class VerifyResult:
    ok: bool
    n: int
    m: int
    detector_pairs: list
    oracle_pairs: list
    validate_calls: int
    seed: Optional[int] = None
    spec: Optional[GenSpec] = None

    @property
    def work_bound_ok(self) -> bool:
        return self.validate_calls <= 4 * (self.n + self.m)

    def describe(self) -> str:
        head = f"seed={self.seed} " if self.seed is not None else ""
        status = "ok" if self.ok else "MISMATCH"
        text = f"{head}n={self.n} m={self.m} superbubbles={len(self.oracle_pairs)} validate_calls={self.validate_calls} {status}"
        if not self.ok:
            text += f"\n  detector: {self.detector_pairs}\n  oracle:   {self.oracle_pairs}"
            if self.spec is not None:
                text += f"\n  spec: {self.spec}"
        return text


def verify_graph(
    g: Graph,
    cap: Optional[int] = DEFAULT_CAP,
    detect_fn: Optional[Callable[[Graph], SuperbubbleReport]] = None,
) -> VerifyResult:
    """Compare entrance/exit pair sets. Raises OracleCapError above ``cap``."""
    oracle = enumerate_superbubbles(g, cap=cap)
    report = (detect_fn or detect)(g)
    mine = sorted(report.pairs())
    theirs = sorted(oracle.pairs())
    return VerifyResult(mine == theirs, g.n, g.m, mine, theirs, report.validate_calls)


def _campaign_one(args) -> VerifyResult:
    seed, cap = args
    spec, g = campaign_graph(seed)
    res = verify_graph(g, cap)
    res.seed, res.spec = seed, spec
    return res


def _spec_one(args) -> VerifyResult:
    spec, cap = args
    res = verify_graph(generate(spec), cap)
    res.seed, res.spec = spec.seed, spec
    return res


def run_campaign(seeds: Iterable[int], cap: Optional[int] = DEFAULT_CAP, jobs: int = 1,
                 spec: Optional[GenSpec] = None) -> list[VerifyResult]:
    """Verify one generated graph per seed; results come back in seed order.

    Without ``spec`` each seed picks its own small random shape, otherwise
    ``spec`` is reused with the seed swapped in.
    """
    if spec is None:
        fn, items = _campaign_one, [(s, cap) for s in seeds]
    else:
        fn, items = _spec_one, [(GenSpec(**{**spec.__dict__, "seed": s}), cap) for s in seeds]
    if jobs <= 1:
        return [fn(x) for x in items]
    with Pool(jobs) as pool:
        return pool.map(fn, items, chunksize=16)
