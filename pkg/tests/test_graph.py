import io
import random

import pytest
from hypothesis import given, settings, strategies as st

from cnimatch.graph import (
    Graph,
    GraphFormatError,
    LabelDict,
    build_edge_label_dict,
    build_label_dict,
    dumps_graph,
    load_graph,
    neighbor_label_counts,
)

from helpers import random_graph, running_query


def test_load_minimal_graph():
    g = load_graph("t # 0\nv 0 A\nv 1 B\ne 0 1 _\n")
    assert len(g) == 2
    assert g.edge_count == 1
    assert g.vertex_labels == ("A", "B")
    assert g.edge_label(0, 1) == g.edge_label(1, 0) == "_"


def test_load_defaults_edge_label_and_skips_comments():
    g = load_graph("# header comment\nt # 7\nv 0 A\nv 1 A\n\ne 0 1\n")
    assert g.name == "7"
    assert g.edge_label(0, 1) == "_"


@pytest.mark.parametrize(
    "text, fragment, lineno",
    [
        ("t # 0\nv 0 A\nv 1 B\ne 0 5 _\n", "dangling", 4),
        ("t # 0\nv 0 A\nv 2 B\n", "contiguous", 3),
        ("t # 0\nv 0 A\nv 1 B\ne 0 1\ne 1 0\n", "duplicate", 5),
        ("t # 0\nv 0 A\ne 0 0\n", "self-loop", 3),
        ("t # 0\nv 0\n", "expected 'v", 2),
        ("t # 0\nx 0 A\n", "unknown record", 2),
        ("t # 0\nv zero A\n", "integer", 2),
    ],
)
def test_load_rejects_malformed(text, fragment, lineno):
    with pytest.raises(GraphFormatError) as err:
        load_graph(text)
    assert fragment in str(err.value)
    assert err.value.lineno == lineno


def test_load_dataset_dump_header_and_degree_column():
    g = load_graph("t 3 2\nv 0 1 1\nv 1 2 2\nv 2 1 1\ne 0 1 0\ne 1 2 0\n")
    assert (len(g), g.edge_count) == (3, 2)
    assert g.vertex_labels == ("1", "2", "1")
    assert g.name == "0"


def test_directed_duplicate_in_opposite_direction_is_allowed():
    g = load_graph("t # 0\nv 0 A\nv 1 B\ne 0 1 x\ne 1 0 y\n", directed=True)
    assert g.edge_count == 2
    assert g.edge_label(0, 1) == "x" and g.edge_label(1, 0) == "y"
    assert g.neighbors(0) == (1,)


def test_write_two_vertex_canonical():
    g = Graph.from_edges(["A", "B"], [(1, 0, "x")])
    assert dumps_graph(g) == "t # 0\nv 0 A\nv 1 B\ne 0 1 x\n"


def test_write_empty_graph_is_header_only():
    g = Graph.from_edges([], [])
    assert dumps_graph(g) == "t # 0\n"
    assert len(load_graph(dumps_graph(g))) == 0


def test_round_trip_random_50():
    g = random_graph(random.Random(3), 50, 0.1, 5, 3)
    again = load_graph(dumps_graph(g))
    assert again.same_as(g)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000), st.booleans())
def test_round_trip_property(seed, directed):
    rng = random.Random(seed)
    g = random_graph(rng, rng.randint(0, 15), rng.random(), 4, 3, directed)
    assert load_graph(dumps_graph(g), directed=directed).same_as(g)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000))
def test_undirected_symmetry(seed):
    rng = random.Random(seed)
    g = random_graph(rng, 12, 0.4, 3, 3)
    for u in range(len(g)):
        for v, lab in g.out_adj[u].items():
            assert g.out_adj[v][u] == lab


def test_label_dict_running_example():
    d = build_label_dict(Graph.from_edges(["1", "2", "2", "3", "4"], []))
    assert d.forward == {"1": 1, "2": 2, "3": 3, "4": 4}
    assert d.k == 4
    assert d.reverse == ("1", "2", "3", "4")


def test_label_dict_single_vertex():
    d = build_label_dict(Graph.from_edges(["X"], []))
    assert d.forward == {"X": 1} and d.k == 1


def test_label_dict_first_appearance():
    d = build_label_dict(Graph.from_edges(["B", "A", "B"], []))
    assert d.forward == {"B": 1, "A": 2}
    assert d.ord("Z") == 0


@given(st.lists(st.sampled_from("ABCDE"), min_size=1, max_size=10))
def test_label_dict_is_inverse_and_deterministic(labels):
    d = LabelDict.from_tokens(labels)
    assert all(d.reverse[d.forward[t] - 1] == t for t in d.forward)
    assert d == LabelDict.from_tokens(list(labels))
    assert d.k == len(set(labels))


def test_edge_label_dict():
    d = build_edge_label_dict(running_query())
    assert d.forward == {"b": 1, "d": 2, "a": 3}


def test_neighbor_counts_running_example():
    q = running_query()
    d = build_label_dict(q)
    assert neighbor_label_counts(q, 0, d) == [0, 2, 0, 0]
    assert neighbor_label_counts(q, 2, d) == [1, 1, 1, 1]


def test_neighbor_counts_isolated_and_foreign():
    d = LabelDict.from_tokens(["A", "B"])
    g = Graph.from_edges(["B", "A", "A", "Z", "B"], [(0, 1), (0, 2), (0, 3)])
    assert neighbor_label_counts(g, 0, d) == [2, 0]
    assert neighbor_label_counts(g, 4, d) == [0, 0]
    with pytest.raises(IndexError):
        neighbor_label_counts(g, 9, d)


def test_induced_subgraph_keeps_labels():
    g = Graph.from_edges(["A", "B", "C"], [(0, 1, "x"), (1, 2, "y"), (0, 2, "z")])
    sub = g.induced_subgraph([2, 0])
    assert sub.vertex_labels == ("C", "A")
    assert sub.edge_label(0, 1) == "z"


def test_load_from_file_object():
    g = load_graph(io.StringIO("t # 0\nv 0 A\n"))
    assert len(g) == 1
