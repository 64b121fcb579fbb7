import numpy as np
import pytest

from conftest import GOLDEN_RANKS
from superbubble.detector import (
    ENTRANCE,
    EXIT,
    Outcome,
    build_candidates,
    detect,
    is_entrance,
    is_exit,
    prepare,
    trace_detect,
    validate_superbubble,
)
from superbubble.generate import GenSpec, campaign_graph, generate
from superbubble.graph import Graph, load_edge_list

GOLDEN_ORDER = [("v8", "v14"), ("v3", "v8"), ("v5", "v7"), ("v11", "v12"), ("v1", "v3")]
GOLDEN_CANDIDATES = [("v1", ENTRANCE), ("v3", EXIT), ("v3", ENTRANCE), ("v11", ENTRANCE), ("v12", EXIT),
        ("v5", ENTRANCE), ("v10", EXIT), ("v7", EXIT), ("v8", EXIT), ("v8", ENTRANCE),
        ("v13", ENTRANCE), ("v14", EXIT)]


@pytest.fixture(scope="module")
def golden_state(golden):
    p = prepare(golden)
    cands, state = build_candidates(p.aug, p.order)
    return p, cands, state


def test_candidate_predicates(golden):
    chain, _ = load_edge_list("a b\nb c\n")
    assert is_entrance(chain, chain.id_of("b"))
    assert is_exit(chain, chain.id_of("b"))
    assert not is_exit(chain, chain.id_of("a"))
    assert not is_entrance(chain, chain.id_of("c"))
    assert is_entrance(golden, golden.id_of("v5")) and not is_exit(golden, golden.id_of("v5"))


def test_golden_candidate_list(golden, golden_state):
    _, cands, _ = golden_state
    assert [(golden.labels[v], role) for v, role in cands.entries()] == GOLDEN_CANDIDATES
    assert len(cands) == 12
    assert cands.rank.tolist() == [GOLDEN_RANKS[label] for label, _ in GOLDEN_CANDIDATES]
    # walking prev from the tail gives the same list reversed
    back, i = [], cands.tail
    while i >= 0:
        back.append(int(cands.vertex[i]))
        i = int(cands.prev[i])
    assert back[::-1] == cands.vertex.tolist()


def test_chain_candidate_list():
    g, _ = load_edge_list("a b\nb c\n")
    p = prepare(g)
    cands, _ = build_candidates(p.aug, p.order)
    assert [(g.labels[v], r) for v, r in cands.entries()] == [("a", ENTRANCE), ("b", EXIT), ("b", ENTRANCE), ("c", EXIT)]


def test_golden_previous_entrance(golden, golden_state):
    _, _, state = golden_state
    prev = lambda x: golden.labels[state.previous_entrance[golden.id_of(x)]]
    assert prev("v14") == "v13"
    assert prev("v8") == "v5"
    assert state.previous_entrance[golden.id_of("v1")] == -1


@pytest.mark.parametrize(
    "start, end, outcome, vertex",
    [
        ("v13", "v14", Outcome.ALTERNATIVE, "v8"),
        ("v8", "v14", Outcome.VALID, "v8"),
        ("v5", "v8", Outcome.ALTERNATIVE, "v3"),
        ("v3", "v8", Outcome.VALID, "v3"),
        ("v11", "v7", Outcome.NO_BUBBLE, None),
    ],
)
def test_golden_validation(golden, golden_state, start, end, outcome, vertex):
    p, _, state = golden_state
    res = validate_superbubble(state, p.index, golden.id_of(start), golden.id_of(end))
    assert res.outcome is outcome
    assert (golden.labels[res.vertex] if res.vertex is not None else None) == vertex


def test_validation_needs_increasing_ranks(golden, golden_state):
    p, _, state = golden_state
    with pytest.raises(ValueError):
        validate_superbubble(state, p.index, golden.id_of("v8"), golden.id_of("v3"))


def test_golden_report_order(golden):
    report = detect(golden)
    assert [tuple(b) for b in report.items] == GOLDEN_ORDER
    assert report.filtered_count == 0
    assert report.to_dict()["superbubbles"][0] == {"entrance": "v8", "exit": "v14"}


def test_golden_trace(golden):
    report, events = trace_detect(golden)
    top = [(e["start"], e["exit"]) for e in events if e["event"] == "call" and e["depth"] == 0]
    assert top == [("v1", "v14"), ("v1", "v8"), ("v1", "v3")]
    nested = [(e["start"], e["exit"]) for e in events if e["event"] == "call" and e["depth"] > 0]
    assert nested == [("v11", "v7"), ("v10", "v10"), ("v11", "v12")]
    writes = [(e["entrance"], e["value"]) for e in events if e["event"] == "alt_write"]
    assert writes == [("v13", "v8"), ("v5", "v3")]
    assert sum(e["event"] == "validate" for e in events) == report.validate_calls == 7
    reports = [(e["entrance"], e["exit"]) for e in events if e["event"] == "report"]
    assert reports == GOLDEN_ORDER


def test_chain_reports_inner_edge_first():
    g, _ = load_edge_list("a b\nb c\n")
    assert [tuple(b) for b in detect(g).items] == [("b", "c"), ("a", "b")]


def test_single_edge():
    g, _ = load_edge_list("x y\n")
    assert [tuple(b) for b in detect(g).items] == [("x", "y")]


def test_artificial_superbubbles_are_filtered():
    # two sources feeding one vertex: <__source__, c> and <c, __sink__> are artificial
    g, _ = load_edge_list("a c\nb c\nc d\nc e\n")
    report = detect(g)
    assert report.items == []
    assert report.filtered_count == 2
    _, events = trace_detect(g)
    assert ("__source__", "c") in [(e["entrance"], e["exit"]) for e in events if e["event"] == "report"]


def test_deep_nesting_does_not_recurse():
    # a chain of 200k vertices: every edge is a superbubble, each nested call is one frame
    n = 200_000
    src = np.arange(n - 1)
    g = Graph.from_edges([str(i) for i in range(n)], src, src + 1)
    report = detect(g)
    assert len(report.items) == n - 1
    assert report.items[0] == (str(n - 2), str(n - 1))


def test_alternatives_never_move_backwards():
    for seed in range(300):
        _, g = campaign_graph(seed)
        _, events = trace_detect(g)
        last = {}
        for e in events:
            if e["event"] == "validate" and e["outcome"] == "alternative":
                k = e["entrance"]
                assert e["alternative_rank"] >= last.get(k, 0), (seed, e)
                last[k] = e["alternative_rank"]


def test_exits_reported_in_decreasing_rank():
    for seed in range(100):
        _, g = campaign_graph(seed)
        p = prepare(g)
        ranks = [int(p.order.rank[g.id_of(b.exit)]) for b in detect(g).items]
        assert ranks == sorted(ranks, reverse=True)


def test_validate_calls_within_work_bound():
    for seed in range(300):
        _, g = campaign_graph(seed)
        assert detect(g).validate_calls <= 4 * (g.n + g.m)
    g = generate(GenSpec(n=20_000, extra_edges=20_000, planted=500, seed=9, max_outdeg=4))
    assert detect(g).validate_calls <= 4 * (g.n + g.m)


def test_report_json_round_trip(golden):
    import json

    d = json.loads(detect(golden).to_json())
    assert [(x["entrance"], x["exit"]) for x in d["superbubbles"]] == GOLDEN_ORDER
    assert d["filteredCount"] == 0
