"""Labeled graphs, query label dictionaries and the ``.lg`` text format.

A graph file looks like::

    t # 0
    v 0 A
    v 1 B
    e 0 1 x

Vertex ids must be contiguous and ascending from 0.  The edge label is
optional and defaults to ``_``.  Lines starting with ``#`` are comments.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from typing import Iterable, Sequence, TextIO

DEFAULT_EDGE_LABEL = "_"


class GraphFormatError(ValueError):
    """Raised for malformed graph text; carries the offending line number."""

    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


@dataclass(frozen=True, eq=False)
class Graph:
    """Immutable labeled graph with vertex ids ``0..n-1``.

    ``out_adj[v]`` maps each successor of ``v`` to the edge label.  For
    undirected graphs ``in_adj`` is the very same object, so every edge is
    visible from both endpoints with one label.
    """

    vertex_labels: tuple[str, ...]
    out_adj: tuple[dict[int, str], ...]
    in_adj: tuple[dict[int, str], ...]
    directed: bool = False
    name: str = "0"
    _nbrs: tuple[tuple[int, ...], ...] = field(default=(), repr=False)

    @classmethod
    def from_edges(
        cls,
        labels: Sequence[str],
        edges: Iterable[tuple],
        directed: bool = False,
        name: str = "0",
    ) -> Graph:
        """Build a graph from labels and ``(u, v)`` or ``(u, v, elabel)`` tuples.

        Raises GraphFormatError on self-loops, duplicates or dangling endpoints.
        """
        n = len(labels)
        out_adj: list[dict[int, str]] = [{} for _ in range(n)]
        in_adj = [{} for _ in range(n)] if directed else out_adj
        for e in edges:
            u, v = int(e[0]), int(e[1])
            lab = str(e[2]) if len(e) > 2 else DEFAULT_EDGE_LABEL
            _add_edge(out_adj, in_adj, n, u, v, lab, directed, None)
        return cls._build(tuple(str(x) for x in labels), out_adj, in_adj, directed, name)

    @classmethod
    def _build(cls, labels, out_adj, in_adj, directed, name) -> Graph:
        out_t = tuple(out_adj)
        in_t = tuple(in_adj) if directed else out_t
        if directed:
            nbrs = tuple(
                tuple(sorted(set(o) | set(i))) for o, i in zip(out_t, in_t)
            )
        else:
            nbrs = tuple(tuple(sorted(o)) for o in out_t)
        return cls(labels, out_t, in_t, directed, name, nbrs)

    @property
    def vertex_count(self) -> int:
        return len(self.vertex_labels)

    def __len__(self) -> int:
        return len(self.vertex_labels)

    @property
    def edge_count(self) -> int:
        total = sum(len(a) for a in self.out_adj)
        return total if self.directed else total // 2

    def label(self, v: int) -> str:
        return self.vertex_labels[v]

    def neighbors(self, v: int) -> tuple[int, ...]:
        """Distinct adjacent vertices, ignoring direction, ascending."""
        return self._nbrs[v]

    def degree(self, v: int) -> int:
        return len(self._nbrs[v])

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.out_adj[u]

    def edge_label(self, u: int, v: int) -> str | None:
        return self.out_adj[u].get(v)

    def edges(self) -> Iterable[tuple[int, int, str]]:
        """Each edge once; undirected edges are yielded with ``u < v``."""
        for u, adj in enumerate(self.out_adj):
            for v in sorted(adj):
                if self.directed or u < v:
                    yield u, v, adj[v]

    def check_vertex(self, v: int) -> None:
        if not 0 <= v < len(self.vertex_labels):
            raise IndexError(f"vertex {v} out of range for graph with {len(self)} vertices")

    def induced_subgraph(self, vertices: Sequence[int], name: str | None = None) -> Graph:
        """Subgraph induced by ``vertices``; vertex ``vertices[i]`` becomes ``i``."""
        index = {v: i for i, v in enumerate(vertices)}
        labels = [self.vertex_labels[v] for v in vertices]
        edges = [
            (index[u], index[v], lab)
            for u, v, lab in self.edges()
            if u in index and v in index
        ]
        return Graph.from_edges(labels, edges, self.directed, name or self.name)

    def same_as(self, other: Graph) -> bool:
        """Equal ids, labels, direction and edge sets (adjacency order ignored)."""
        return (
            self.directed == other.directed
            and self.vertex_labels == other.vertex_labels
            and sorted(self.edges()) == sorted(other.edges())
        )


def _add_edge(out_adj, in_adj, n, u, v, lab, directed, lineno):
    if not (0 <= u < n and 0 <= v < n):
        raise GraphFormatError(f"dangling endpoint in edge ({u}, {v})", lineno)
    if u == v:
        raise GraphFormatError(f"self-loop on vertex {u}", lineno)
    if v in out_adj[u] or (not directed and u in out_adj[v]):
        raise GraphFormatError(f"duplicate edge ({u}, {v})", lineno)
    out_adj[u][v] = lab
    in_adj[v][u] = lab


def load_graph(stream: TextIO | str, directed: bool = False) -> Graph:
    """Parse one graph in ``.lg`` format from a text stream (or a string).

    ``v`` lines may carry a trailing integer (the degree column found in some
    published dataset dumps); it is ignored.
    """
    if isinstance(stream, str):
        stream = io.StringIO(stream)
    name = "0"
    labels: list[str] = []
    pending: list[tuple[int, int, int, str]] = []
    for lineno, raw in enumerate(stream, 1):
        parts = raw.split()
        if not parts or parts[0].startswith("#"):
            continue
        kind = parts[0]
        if kind == "t":
            # "t # <name>"; dataset dumps write "t <n> <m>" instead
            if len(parts) == 3 and parts[1] == "#":
                name = parts[2]
        elif kind == "v":
            if len(parts) not in (3, 4):
                raise GraphFormatError(f"expected 'v <id> <label>', got {raw.strip()!r}", lineno)
            vid = _int(parts[1], lineno)
            if vid != len(labels):
                raise GraphFormatError(
                    f"vertex id {vid} is not contiguous (expected {len(labels)})", lineno
                )
            labels.append(parts[2])
        elif kind == "e":
            if len(parts) not in (3, 4):
                raise GraphFormatError(f"expected 'e <src> <dst> [label]', got {raw.strip()!r}", lineno)
            lab = parts[3] if len(parts) == 4 else DEFAULT_EDGE_LABEL
            pending.append((lineno, _int(parts[1], lineno), _int(parts[2], lineno), lab))
        else:
            raise GraphFormatError(f"unknown record type {kind!r}", lineno)

    n = len(labels)
    out_adj: list[dict[int, str]] = [{} for _ in range(n)]
    in_adj = [{} for _ in range(n)] if directed else out_adj
    for lineno, u, v, lab in pending:
        _add_edge(out_adj, in_adj, n, u, v, lab, directed, lineno)
    return Graph._build(tuple(labels), out_adj, in_adj, directed, name)


def _int(tok: str, lineno: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise GraphFormatError(f"expected integer, got {tok!r}", lineno) from None


def read_graph(path, directed: bool = False) -> Graph:
    with open(path) as fh:
        return load_graph(fh, directed)


def write_graph(g: Graph, sink: TextIO) -> None:
    sink.write(f"t # {g.name}\n")
    for v, lab in enumerate(g.vertex_labels):
        sink.write(f"v {v} {lab}\n")
    for u, v, lab in g.edges():
        sink.write(f"e {u} {v} {lab}\n")


def dumps_graph(g: Graph) -> str:
    buf = io.StringIO()
    write_graph(g, buf)
    return buf.getvalue()


@dataclass(frozen=True)
class LabelDict:
    """Numbering of query labels 1..k; any other token maps to 0."""

    forward: dict[str, int]
    reverse: tuple[str, ...]

    @property
    def k(self) -> int:
        return len(self.reverse)

    def ord(self, token: str) -> int:
        return self.forward.get(token, 0)

    def __contains__(self, token: str) -> bool:
        return token in self.forward

    @classmethod
    def from_tokens(cls, tokens: Iterable[str]) -> LabelDict:
        forward: dict[str, int] = {}
        for tok in tokens:
            if tok not in forward:
                forward[tok] = len(forward) + 1
        return cls(forward, tuple(forward))


def build_label_dict(query: Graph) -> LabelDict:
    """Number the query's vertex labels by first appearance in id order."""
    return LabelDict.from_tokens(query.vertex_labels)


def build_edge_label_dict(query: Graph) -> LabelDict:
    """Number the query's edge labels by first appearance in edge order."""
    return LabelDict.from_tokens(lab for _, _, lab in query.edges())


def neighbor_label_counts(g: Graph, v: int, labels: LabelDict) -> list[int]:
    """Per query label, how many neighbors of ``v`` carry it.

    Neighbors whose label is not a query label are ignored.
    """
    g.check_vertex(v)
    counts = [0] * labels.k
    fwd = labels.forward
    vl = g.vertex_labels
    for w in g.neighbors(v):
        j = fwd.get(vl[w], 0)
        if j:
            counts[j - 1] += 1
    return counts
