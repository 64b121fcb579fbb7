import random

import pytest

from superbubble.errors import CycleError, OracleCapError
from superbubble.generate import GenSpec, campaign_graph, generate
from superbubble.graph import Graph, load_edge_list
from superbubble.oracle import enumerate_superbubbles, reachable_avoiding


def labels(g, ids):
    return {g.labels[v] for v in ids}


def test_golden_five_superbubbles(golden):
    res = enumerate_superbubbles(golden)
    assert res.pairs() == {("v8", "v14"), ("v3", "v8"), ("v5", "v7"), ("v11", "v12"), ("v1", "v3")}
    interiors = {(golden.labels[b.entrance], golden.labels[b.exit]): labels(golden, b.interior) for b in res.bubbles}
    assert interiors[("v5", "v7")] == {"v6", "v9", "v10"}
    assert interiors[("v11", "v12")] == set()
    assert interiors[("v3", "v8")] == {"v4", "v5", "v6", "v7", "v9", "v10", "v11", "v12"}


def test_single_edge_and_diamond():
    g, _ = load_edge_list("a b\n")
    assert enumerate_superbubbles(g).pairs() == {("a", "b")}
    g, _ = load_edge_list("a b\na c\nb d\nc d\n")
    assert enumerate_superbubbles(g).pairs() == {("a", "d")}


def test_reachable_avoiding(golden):
    v = golden.id_of
    assert labels(golden, reachable_avoiding(golden, v("v3"), v("v8"))) == {
        "v3", "v4", "v5", "v6", "v7", "v8", "v9", "v10", "v11", "v12"}
    assert labels(golden, reachable_avoiding(golden, v("v8"), v("v3"), reverse=True)) == {
        "v8", "v4", "v7", "v12", "v6", "v10", "v5", "v9", "v11", "v3"}
    chain, _ = load_edge_list("a b\nb c\n")
    assert labels(chain, reachable_avoiding(chain, 0, 1)) == {"a", "b"}
    with pytest.raises(ValueError):
        reachable_avoiding(chain, 1, 1)


def test_invariant_under_relabelling_and_edge_order():
    rng = random.Random(4)
    for seed in range(40):
        _, g = campaign_graph(seed)
        edges = list(g.label_edges())
        rng.shuffle(edges)
        rename = {x: f"n{rng.random()}" for x in g.labels}
        h = Graph.from_label_edges([(rename[a], rename[b]) for a, b in edges])
        expect = {(rename[a], rename[b]) for a, b in enumerate_superbubbles(g).pairs()}
        assert enumerate_superbubbles(h).pairs() == expect


def test_cap_and_override():
    g = generate(GenSpec(n=30, extra_edges=10, seed=1))
    with pytest.raises(OracleCapError) as info:
        enumerate_superbubbles(g, cap=29)
    assert info.value.exit_code == 4
    assert enumerate_superbubbles(g, cap=None).pairs() == enumerate_superbubbles(g, cap=30).pairs()


def test_cyclic_input_is_rejected():
    g, _ = load_edge_list("r a\na b\nb a\n")
    with pytest.raises(CycleError):
        enumerate_superbubbles(g)


def test_multi_source_graph_is_fine():
    g, _ = load_edge_list("a c\nb c\nc d\n")
    assert enumerate_superbubbles(g).pairs() == {("c", "d")}
