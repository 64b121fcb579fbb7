import numpy as np
import pytest

from superbubble.errors import NotDagError, ParseError, SelfLoopError
from superbubble.generate import GenSpec, generate
from superbubble.graph import (
    SINK_LABEL,
    SOURCE_LABEL,
    Graph,
    augment,
    export_dot,
    load_edge_list,
    write_edge_list,
)
from superbubble.detector import detect


def test_loader_assigns_ids_in_first_appearance_order():
    g, dups = load_edge_list("# comment\n\nb a\na c\n")
    assert g.labels == ("b", "a", "c")
    assert list(g.label_edges()) == [("b", "a"), ("a", "c")]
    assert dups == 0


def test_loader_accepts_bytes_and_tabs():
    g, _ = load_edge_list(b"x\ty\ny  z\n")
    assert (g.n, g.m) == (3, 2)


def test_duplicate_edges_collapse_with_count():
    g, dups = load_edge_list("a b\na b\nb c\na b\n")
    assert g.m == 2
    assert dups == 2


@pytest.mark.parametrize(
    "text, fragment",
    [
        ("", "no edges"),
        ("# only a comment\n", "no edges"),
        ("a b c\n", "line 1"),
        ("a\n", "line 1"),
        ("a b\nc\n", "line 2"),
        (f"{SOURCE_LABEL} a\n", "reserved"),
        ("a " + "x" * 256 + "\n", "255"),
    ],
)
def test_loader_rejects_malformed_input(text, fragment):
    with pytest.raises(ParseError, match=fragment):
        load_edge_list(text)


def test_self_loop_is_rejected_with_line():
    with pytest.raises(SelfLoopError) as info:
        load_edge_list("a b\nb b\n")
    assert info.value.line == 2
    assert info.value.exit_code == 2


def test_invalid_utf8_is_a_parse_error():
    with pytest.raises(ParseError, match="UTF-8"):
        load_edge_list(b"a \xff\n")


def test_long_multibyte_label_counts_bytes():
    ok = "é" * 127  # 254 bytes
    load_edge_list(f"a {ok}\n")
    with pytest.raises(ParseError):
        load_edge_list(f"a {ok}é\n")


def test_from_edges_rejects_self_loops_and_duplicates():
    with pytest.raises(SelfLoopError):
        Graph.from_edges(["a", "b"], [0], [0])
    with pytest.raises(ValueError):
        Graph.from_edges(["a", "b"], [0, 0], [1, 1])
    with pytest.raises(ValueError):
        Graph.from_edges(["a", "b"], [0], [2])


def test_adjacency_keeps_input_order(golden):
    assert [golden.labels[v] for v in golden.successors(golden.id_of("v3"))] == ["v4", "v5", "v11"]
    assert [golden.labels[v] for v in golden.predecessors(golden.id_of("v8"))] == ["v4", "v7", "v12"]
    assert golden.sources().tolist() == [golden.id_of("v1")]
    assert golden.sinks().tolist() == [golden.id_of("v14")]


def test_arrays_are_read_only(golden):
    with pytest.raises(ValueError):
        golden.out_idx[0] = 3


def test_augment_single_source_sink_is_identity(golden):
    aug = augment(golden)
    assert aug.graph is golden
    assert aug.artificial_source is None and aug.artificial_sink is None
    assert golden.labels[aug.source] == "v1" and golden.labels[aug.sink] == "v14"


def test_augment_adds_artificial_source_and_sink():
    g, _ = load_edge_list("a c\nb c\nc d\nc e\n")
    aug = augment(g)
    h = aug.graph
    assert h.labels[-2:] == (SOURCE_LABEL, SINK_LABEL)
    assert h.sources().tolist() == [aug.source] and h.sinks().tolist() == [aug.sink]
    assert sorted(h.label_edges()) == sorted(
        list(g.label_edges()) + [(SOURCE_LABEL, "a"), (SOURCE_LABEL, "b"), ("d", SINK_LABEL), ("e", SINK_LABEL)]
    )
    assert aug.original_label(aug.source) is None
    assert aug.original_label(g.id_of("c")) == "c"
    assert aug.is_artificial(aug.sink) and not aug.is_artificial(0)


def test_augment_only_sink_side():
    g, _ = load_edge_list("a b\na c\n")
    aug = augment(g)
    assert aug.artificial_source is None
    assert aug.graph.labels[aug.sink] == SINK_LABEL
    assert aug.graph.n == 4


def test_augment_is_idempotent():
    g = generate(GenSpec(n=40, extra_edges=30, roots=3, seed=5))
    once = augment(g).graph
    twice = augment(once)
    assert twice.graph is once


def test_augment_appends_after_existing_adjacency():
    g = generate(GenSpec(n=200, extra_edges=150, roots=4, seed=11))
    aug = augment(g)
    h = aug.graph
    r, t = aug.artificial_source, aug.artificial_sink
    for v in range(g.n):
        out_old, in_old = g.successors(v).tolist(), g.predecessors(v).tolist()
        assert h.successors(v).tolist() == out_old + ([t] if not out_old else [])
        assert h.predecessors(v).tolist() == in_old + ([r] if not in_old else [])
    assert h.successors(r).tolist() == g.sources().tolist()
    assert h.predecessors(t).tolist() == g.sinks().tolist()
    assert h.m == g.m + g.sources().size + g.sinks().size


def test_augment_rejects_sourceless_graph():
    g, _ = load_edge_list("a b\nb a\n")
    with pytest.raises(NotDagError):
        augment(g)


def test_augment_refuses_reserved_label_collision():
    g = Graph.from_edges(["a", "b", "c", SOURCE_LABEL], [0, 1], [2, 2])
    with pytest.raises(ParseError, match="reserved"):
        augment(g)


def test_edge_list_round_trip_keeps_adjacency_order(golden):
    text = write_edge_list(golden, header=["hello"])
    assert text.startswith("# hello\n")
    g, _ = load_edge_list(text)
    assert sorted(g.labels) == sorted(golden.labels)
    for label in golden.labels:
        mine = [g.labels[w] for w in g.successors(g.id_of(label))]
        assert mine == [golden.labels[w] for w in golden.successors(golden.id_of(label))]


def test_dot_export_has_one_cluster_per_superbubble(golden):
    dot = export_dot(golden, detect(golden))
    assert dot.startswith("digraph G {")
    assert dot.count("subgraph cluster_sb") == 5
    assert 'v8 [style=filled, fillcolor=orange, sb_role="entrance+exit"]' in dot
    # <v11, v12> has no interior: its edge is highlighted and its cluster nests in <v3, v8>
    assert "v11 -> v12 [color=red, penwidth=2];" in dot
    inner = dot.index('label="<v3, v8>"')
    assert inner < dot.index('label="<v11, v12>"') < dot.index('label="<v1, v3>"')


def test_dot_quotes_awkward_labels():
    g, _ = load_edge_list('a-b "c"\n')
    dot = export_dot(g)
    assert '"a-b" -> "\\"c\\""' in dot
