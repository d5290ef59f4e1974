"""Single-pass filtering of an edge stream.

Stream text format::

    h sorted
    s <x> <x_label> <y> <y_label> [<edge_label>]

In sorted mode the records of each source vertex are contiguous and every
undirected edge shows up twice, once from each endpoint, so a vertex's full
neighborhood is known when its group ends.  The vertex is then checked
against the query and dropped with its retained edges if nothing accepts it.
Unsorted streams only get the label filter online; degree and index checks
are left to the in-memory pass that follows.
"""

from __future__ import annotations

import io
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Iterator, NamedTuple, TextIO

from .filtering import CandidateSets, FilterState, VertexSignature, cni_verify, ilgf_filter, query_signatures
from .graph import DEFAULT_EDGE_LABEL, Graph, GraphFormatError, build_label_dict
from .cni import g_tuple


class StreamOrderError(ValueError):
    pass


class StreamRecord(NamedTuple):
    x: int
    x_label: str
    y: int
    y_label: str
    edge_label: str = DEFAULT_EDGE_LABEL


@dataclass
class EdgeStream:
    records: Iterable[StreamRecord]
    sorted: bool = True


@dataclass
class StreamStats:
    mode: str = "sorted"
    edges_read: int = 0
    vertices_admitted: int = 0
    vertices_dropped: int = 0
    vertices_label_rejected: int = 0
    peak_retained_edges: int = 0

    def to_record(self) -> dict:
        rec = {
            "mode": self.mode,
            "edges_read": self.edges_read,
            "vertices_admitted": self.vertices_admitted,
            "vertices_dropped": self.vertices_dropped,
            "vertices_label_rejected": self.vertices_label_rejected,
            "peak_retained_edges": self.peak_retained_edges,
        }
        if self.mode != "sorted":
            rec["notice"] = "unsorted stream: online filtering limited to labels"
        return rec


@dataclass
class ReducedGraph:
    """The retained part of the stream, relabeled to contiguous ids."""

    graph: Graph
    original_ids: list[int]
    stats: StreamStats = field(default_factory=StreamStats)

    def original(self, vs: Iterable[int]) -> list[int]:
        return sorted(self.original_ids[v] for v in vs)


def parse_stream(stream: TextIO | str) -> EdgeStream:
    """Lazily parse stream text.  The header decides sorted vs unsorted."""
    if isinstance(stream, str):
        stream = io.StringIO(stream)
    lines = iter(enumerate(stream, 1))
    is_sorted = True
    first = None
    for lineno, raw in lines:
        parts = raw.split()
        if not parts or parts[0].startswith("#"):
            continue
        if parts[0] == "h":
            if len(parts) != 2 or parts[1] not in ("sorted", "unsorted"):
                raise GraphFormatError("header must be 'h sorted' or 'h unsorted'", lineno)
            is_sorted = parts[1] == "sorted"
        else:
            first = (lineno, parts)
        break

    def records() -> Iterator[StreamRecord]:
        if first is not None:
            yield _record(*first)
        for lineno, raw in lines:
            parts = raw.split()
            if parts and not parts[0].startswith("#"):
                yield _record(lineno, parts)

    return EdgeStream(records(), is_sorted)


def _record(lineno: int, parts: list[str]) -> StreamRecord:
    if parts[0] != "s" or len(parts) not in (5, 6):
        raise GraphFormatError("expected 's <x> <x_label> <y> <y_label> [<edge_label>]'", lineno)
    try:
        x, y = int(parts[1]), int(parts[3])
    except ValueError:
        raise GraphFormatError("vertex ids must be integers", lineno) from None
    if x == y:
        raise GraphFormatError(f"self-loop on vertex {x}", lineno)
    return StreamRecord(x, parts[2], y, parts[4], parts[5] if len(parts) == 6 else DEFAULT_EDGE_LABEL)


def graph_to_stream(g: Graph, is_sorted: bool = True, rng=None) -> list[StreamRecord]:
    """Serialize an undirected graph in adjacency-list order (each edge twice).

    With ``is_sorted=False`` and an ``rng`` the records are shuffled.
    """
    if g.directed:
        raise ValueError("streams describe undirected graphs")
    vl = g.vertex_labels
    recs = [
        StreamRecord(x, vl[x], y, vl[y], g.out_adj[x][y])
        for x in range(len(g))
        for y in sorted(g.out_adj[x])
    ]
    if not is_sorted and rng is not None:
        rng.shuffle(recs)
    return recs


def write_stream(records: Iterable[StreamRecord], sink: TextIO, is_sorted: bool = True) -> None:
    sink.write("h sorted\n" if is_sorted else "h unsorted\n")
    for r in records:
        sink.write(f"s {r.x} {r.x_label} {r.y} {r.y_label} {r.edge_label}\n")


def stream_filter(stream: EdgeStream, q: Graph) -> ReducedGraph:
    """Read ``stream`` once and keep only what the query could still use."""
    labels = build_label_dict(q)
    qsigs = query_signatures(q, labels)
    by_label: dict[int, list[VertexSignature]] = defaultdict(list)
    for s in qsigs:
        by_label[s.label_index].append(s)

    stats = StreamStats(mode="sorted" if stream.sorted else "unsorted")
    vlabel: dict[int, str] = {}
    rejected: set[int] = set()
    dropped: set[int] = set()
    adj: dict[int, dict[int, str]] = defaultdict(dict)
    retained = 0

    def admit(x: int, lab: str) -> bool:
        if x in vlabel:
            return True
        if x in rejected or x in dropped:
            return False
        if lab in labels:
            vlabel[x] = lab
            stats.vertices_admitted += 1
            return True
        rejected.add(x)
        stats.vertices_label_rejected += 1
        return False

    def keep_edge(x: int, y: int, lab: str) -> None:
        nonlocal retained
        if y not in adj[x]:
            adj[x][y] = lab
            adj[y][x] = lab
            retained += 1
            stats.peak_retained_edges = max(stats.peak_retained_edges, retained)

    current = None
    counts: list[int] = []
    closed: set[int] = set()

    def close_group(x: int) -> None:
        nonlocal retained
        closed.add(x)
        if x not in vlabel:
            return
        sig = VertexSignature(labels.ord(vlabel[x]), sum(counts), g_tuple(counts))
        if any(cni_verify(sig, su) for su in by_label[sig.label_index]):
            return
        del vlabel[x]
        dropped.add(x)
        stats.vertices_dropped += 1
        for y in adj.pop(x, {}):
            del adj[y][x]
            retained -= 1

    for rec in stream.records:
        stats.edges_read += 1
        x, y = rec.x, rec.y
        if stream.sorted and x != current:
            if current is not None:
                close_group(current)
            if x in closed:
                raise StreamOrderError(f"source vertex {x} reappears after its group closed")
            current = x
            counts = [0] * labels.k
        x_ok = admit(x, rec.x_label)
        j = labels.ord(rec.y_label)
        if stream.sorted and j:
            # counts include neighbors dropped earlier: the index is taken
            # over the full label-filtered neighborhood
            counts[j - 1] += 1
        if x_ok and admit(y, rec.y_label):
            keep_edge(x, y, rec.edge_label)
    if stream.sorted and current is not None:
        close_group(current)

    ids = sorted(vlabel)
    index = {v: i for i, v in enumerate(ids)}
    edges = [
        (index[x], index[y], lab)
        for x in ids
        for y, lab in adj.get(x, {}).items()
        if x < y
    ]
    graph = Graph.from_edges([vlabel[v] for v in ids], edges, name="reduced")
    return ReducedGraph(graph, ids, stats)


def stream_stats(run: ReducedGraph) -> dict:
    return run.stats.to_record()


def stream_pipeline(stream: EdgeStream, q: Graph, **ilgf_kwargs) -> tuple[ReducedGraph, FilterState, CandidateSets]:
    """Stream filtering followed by the in-memory fixpoint on what remains."""
    reduced = stream_filter(stream, q)
    state, cs = ilgf_filter(reduced.graph, q, **ilgf_kwargs)
    return reduced, state, cs
