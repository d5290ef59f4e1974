import io
import random

import pytest

from cnimatch.cni import vertex_cni
from cnimatch.filtering import VertexSignature, cni_verify, ilgf_filter, query_signatures
from cnimatch.graph import Graph, GraphFormatError, build_label_dict, neighbor_label_counts
from cnimatch.stream import (
    EdgeStream,
    StreamOrderError,
    StreamRecord,
    graph_to_stream,
    parse_stream,
    stream_filter,
    stream_pipeline,
    stream_stats,
    write_stream,
)

from helpers import random_connected_subgraph, random_graph


def _stream(g, **kw):
    return EdgeStream(graph_to_stream(g, **kw), sorted=kw.get("is_sorted", True))


def _surviving_edges(graph, ids, alive):
    keep = set(alive)
    return {
        (min(ids[a], ids[b]), max(ids[a], ids[b]), lab)
        for a, b, lab in graph.edges()
        if a in keep and b in keep
    }


def _equivalence_case(seed):
    rng = random.Random(seed)
    n = rng.randint(5, 200)
    g = random_graph(rng, n, min(1.0, rng.uniform(1.0, 6.0) / n), rng.randint(2, 8))
    q = None
    while q is None:
        q = random_connected_subgraph(rng, g, rng.randint(2, min(6, n)))
        if q is not None and q.edge_count == 0:
            q = None
    return g, q


def test_all_foreign_labels_give_empty_graph():
    g = Graph.from_edges(["X", "Y", "X"], [(0, 1), (1, 2)])
    q = Graph.from_edges(["A", "B"], [(0, 1)])
    run = stream_filter(_stream(g), q)
    assert len(run.graph) == 0
    assert run.graph.edge_count == 0
    assert run.stats.vertices_label_rejected == 3
    assert run.stats.edges_read == 4


def test_hand_traced_drop():
    # the data holds the query star itself plus a stray edge 4-5.  Vertex 4
    # is an A with a single B neighbour, so it fails at its group close and
    # its edge goes with it.
    g = Graph.from_edges(["A", "B", "B", "C", "A", "B"], [(0, 1), (0, 2), (0, 3), (4, 5)])
    q = Graph.from_edges(["A", "B", "B", "C"], [(0, 1), (0, 2), (0, 3)])
    run = stream_filter(_stream(g), q)
    # vertex 5's group closes last; by then its only neighbour is gone, but its
    # own full neighbourhood still has one A, so it passes the online test
    assert run.original_ids == [0, 1, 2, 3, 5]
    assert run.stats.vertices_dropped == 1
    assert run.stats.vertices_admitted == 6
    assert run.graph.edge_count == 3
    # the in-memory fixpoint then removes the stranded B
    _, state, _ = stream_pipeline(_stream(g), q)
    assert run.original(state.survivors()) == [0, 1, 2, 3]


def test_unsorted_stream_rejected_in_sorted_mode():
    recs = [
        StreamRecord(0, "A", 1, "B"),
        StreamRecord(1, "B", 0, "A"),
        StreamRecord(0, "A", 2, "B"),
    ]
    with pytest.raises(StreamOrderError):
        stream_filter(EdgeStream(recs, sorted=True), Graph.from_edges(["A", "B"], [(0, 1)]))


def test_unsorted_mode_only_label_filters():
    g = Graph.from_edges(["A", "B", "Z", "A"], [(0, 1), (1, 2), (1, 3)])
    q = Graph.from_edges(["A", "B", "A"], [(0, 1), (1, 2), (0, 2)])
    recs = graph_to_stream(g, is_sorted=False, rng=random.Random(4))
    run = stream_filter(EdgeStream(recs, sorted=False), q)
    assert run.original_ids == [0, 1, 3]
    assert run.stats.vertices_dropped == 0
    rec = stream_stats(run)
    assert rec["mode"] == "unsorted"
    assert "notice" in rec


@pytest.mark.parametrize("seed", range(50))
def test_unsorted_pipeline_still_equivalent(seed):
    g, q = _equivalence_case(700 + seed)
    recs = graph_to_stream(g, is_sorted=False, rng=random.Random(seed))
    reduced, state, _ = stream_pipeline(EdgeStream(recs, sorted=False), q)
    ref, _ = ilgf_filter(g, q)
    assert reduced.original(state.survivors()) == ref.survivors()


def test_empty_stream_stats_all_zero():
    run = stream_filter(parse_stream("h sorted\n"), Graph.from_edges(["A"], []))
    rec = stream_stats(run)
    assert rec == {
        "mode": "sorted",
        "edges_read": 0,
        "vertices_admitted": 0,
        "vertices_dropped": 0,
        "vertices_label_rejected": 0,
        "peak_retained_edges": 0,
    }
    assert len(run.graph) == 0


def test_thousand_edge_counting_oracle():
    rng = random.Random(11)
    # 500 undirected edges, written twice each; half the labels are foreign
    labels = [rng.choice("ABCDWXYZ") for _ in range(300)]
    edges = set()
    while len(edges) < 500:
        a, b = rng.sample(range(300), 2)
        edges.add((min(a, b), max(a, b)))
    g = Graph.from_edges(labels, sorted(edges))
    q = Graph.from_edges(["A", "B", "C", "D"], [(0, 1), (1, 2), (2, 3)])
    run = stream_filter(_stream(g), q)
    s = run.stats
    assert s.edges_read == 1000
    touched = {v for e in edges for v in e}
    assert s.vertices_admitted + s.vertices_label_rejected == len(touched)
    assert s.vertices_label_rejected == sum(1 for v in touched if labels[v] not in "ABCD")
    assert s.vertices_admitted - s.vertices_dropped == len(run.graph)
    assert 0 < s.vertices_dropped < s.vertices_admitted


@pytest.mark.parametrize("seed", range(60))
def test_pipeline_equivalence(seed):
    g, q = _equivalence_case(seed)
    reduced, state, _ = stream_pipeline(_stream(g), q)
    ref, _ = ilgf_filter(g, q)
    assert reduced.original(state.survivors()) == ref.survivors()
    assert _surviving_edges(reduced.graph, reduced.original_ids, state.survivors()) == _surviving_edges(
        g, list(range(len(g))), ref.survivors()
    )


@pytest.mark.parametrize("seed", range(40))
def test_drop_safety(seed):
    # whatever the stream drops, the first whole-graph sweep with every
    # vertex alive would drop too
    g, q = _equivalence_case(100 + seed)
    run = stream_filter(_stream(g), q)
    kept = set(run.original_ids)
    first = _first_sweep_survivors(g, q)
    labelled = {v for v in range(len(g)) if g.vertex_labels[v] in set(q.vertex_labels) and g.degree(v)}
    dropped = labelled - kept
    assert not dropped & first


def _first_sweep_survivors(g, q):
    labels = build_label_dict(q)
    qs = query_signatures(q, labels)
    out = set()
    for v in range(len(g)):
        j = labels.ord(g.vertex_labels[v])
        if not j:
            continue
        sig = VertexSignature(j, sum(neighbor_label_counts(g, v, labels)), vertex_cni(g, v, labels))
        if any(cni_verify(sig, u) for u in qs):
            out.add(v)
    return out


@pytest.mark.parametrize("seed", range(20))
def test_memory_bound(seed):
    # retained edges never exceed the edges between query-labelled vertices
    g, q = _equivalence_case(200 + seed)
    run = stream_filter(_stream(g), q)
    ql = set(q.vertex_labels)
    both = sum(1 for a, b, _ in g.edges() if g.vertex_labels[a] in ql and g.vertex_labels[b] in ql)
    assert run.stats.peak_retained_edges <= both
    assert run.graph.edge_count <= run.stats.peak_retained_edges


def test_stream_is_consumed_once():
    g, q = _equivalence_case(3)
    reads = []

    def records():
        for r in graph_to_stream(g):
            reads.append(r)
            yield r

    stream_filter(EdgeStream(records()), q)
    assert len(reads) == 2 * g.edge_count


def test_text_round_trip():
    g, _ = _equivalence_case(5)
    buf = io.StringIO()
    write_stream(graph_to_stream(g), buf)
    parsed = parse_stream(buf.getvalue())
    assert parsed.sorted
    assert list(parsed.records) == graph_to_stream(g)
    assert not parse_stream("h unsorted\ns 0 A 1 B\n").sorted


@pytest.mark.parametrize(
    "text",
    ["h maybe\n", "h sorted\ns 0 A 1\n", "h sorted\ns 0 A zero B\n", "h sorted\ns 1 A 1 A\n", "h sorted\ne 0 1\n"],
)
def test_parse_errors(text):
    with pytest.raises(GraphFormatError):
        list(parse_stream(text).records)


def test_default_edge_label_and_comments():
    recs = list(parse_stream("# c\nh sorted\ns 0 A 1 B\n").records)
    assert recs == [StreamRecord(0, "A", 1, "B", "_")]


def test_directed_graph_cannot_stream():
    with pytest.raises(ValueError):
        graph_to_stream(Graph.from_edges(["A", "B"], [(0, 1)], directed=True))
