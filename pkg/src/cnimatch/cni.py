"""Compact neighborhood indexes.

A vertex's neighborhood is summarized by the tuple ``(x_1, ..., x_k)`` where
``x_j`` counts neighbors carrying query label ``j``.  The tuple is folded
into one integer by the k-dimensional pairing

    g_k(x) = sum_{j=1..k} hbar(j, x_1 + ... + x_j),   hbar(p, s) = C(s+p-1, p)

which is a bijection from N^k onto N and is strictly increasing in every
coordinate.  Python ints are arbitrary precision, so every value here is
exact no matter how large it gets.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Sequence

from .graph import Graph, LabelDict, neighbor_label_counts


def h_pairing(p: int, s: int) -> int:
    """Binomial ``C(s+p-1, p)`` computed as a falling product, dividing early.

    The numerator ``s (s+1) ... (s+p-1)`` is accumulated one factor at a
    time; after each factor the running product is divided by the next
    pending term of ``p!`` as long as it divides evenly.
    """
    if p < 1:
        raise ValueError(f"p must be >= 1, got {p}")
    if s < 0:
        raise ValueError(f"s must be >= 0, got {s}")
    top = s + p - 1
    if p > top:
        return 0
    if top == 1:
        return 1
    st = 1
    i = 1
    for t in range(s, top + 1):
        st *= t
        while i <= p and st > 0 and st % i == 0:
            st //= i
            i += 1
    return st


def g_tuple(xs: Sequence[int]) -> int:
    if len(xs) == 0:
        raise ValueError("g_tuple needs at least one coordinate")
    total = 0
    prefix = 0
    for j, x in enumerate(xs, 1):
        if x < 0:
            raise ValueError(f"coordinates must be nonnegative, got {x}")
        prefix += x
        total += h_pairing(j, prefix)
    return total


def g_inverse(n: int, k: int) -> tuple[int, ...]:
    """Tuple ``x`` of length ``k`` with ``g_tuple(x) == n``."""
    if n < 0 or k < 1:
        raise ValueError("need n >= 0 and k >= 1")
    out = [0] * k
    for j in range(k, 0, -1):
        # largest prefix sum s with hbar(j, s) <= n
        lo, hi = 0, 1
        while h_pairing(j, hi) <= n:
            hi *= 2
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if h_pairing(j, mid) <= n:
                lo = mid
            else:
                hi = mid
        out[j - 1] = lo
        n -= h_pairing(j, lo)
    # out holds prefix sums; difference them back into coordinates
    return tuple(out[0:1] + [out[i] - out[i - 1] for i in range(1, k)])


def vertex_cni(g: Graph, v: int, labels: LabelDict) -> int:
    return g_tuple(neighbor_label_counts(g, v, labels))


def _edge_label_counts(
    g: Graph, adj: dict[int, str], labels: LabelDict, elabels: LabelDict
) -> list[int]:
    # edges towards foreign-labeled neighbors are excluded, as for vertex counts
    counts = [0] * elabels.k
    vl = g.vertex_labels
    for w, lab in adj.items():
        if labels.ord(vl[w]):
            j = elabels.ord(lab)
            if j:
                counts[j - 1] += 1
    return counts


def _g_or_zero(counts: Sequence[int]) -> int:
    # a query with no edges yields an empty edge label dictionary
    return g_tuple(counts) if counts else 0


def incident_edge_label_counts(
    g: Graph, v: int, labels: LabelDict, elabels: LabelDict
) -> list[int]:
    """Edge-label counts over edges joining ``v`` to query-labeled neighbors.

    Directed graphs count incoming and outgoing edges alike.
    """
    g.check_vertex(v)
    counts = _edge_label_counts(g, g.out_adj[v], labels, elabels)
    if g.directed:
        extra = _edge_label_counts(g, g.in_adj[v], labels, elabels)
        counts = [a + b for a, b in zip(counts, extra)]
    return counts


def edge_labeled_cni(g: Graph, v: int, labels: LabelDict, elabels: LabelDict) -> int:
    """``g_2(cni_v, cni_e)``: vertex-label CNI paired with incident edge-label CNI.

    Only edges towards query-labeled neighbors contribute to ``cni_e`` so the
    two components describe the same set of neighbors.
    """
    cv = vertex_cni(g, v, labels)
    ce = _g_or_zero(incident_edge_label_counts(g, v, labels, elabels))
    return g_tuple((cv, ce))


def directed_cni(g: Graph, v: int, labels: LabelDict, elabels: LabelDict) -> int:
    """``g_3(cni_v, cni_in, cni_out)`` for a directed graph.

    ``cni_v`` counts every adjacent vertex once, whatever the direction.
    """
    if not g.directed:
        raise ValueError("directed_cni requires a directed graph")
    cv = vertex_cni(g, v, labels)
    cin = _g_or_zero(_edge_label_counts(g, g.in_adj[v], labels, elabels))
    cout = _g_or_zero(_edge_label_counts(g, g.out_adj[v], labels, elabels))
    return g_tuple((cv, cin, cout))


def bfs_layers(g: Graph, v: int, labels: LabelDict, q: int) -> list[list[int]]:
    """Vertices at shortest distance exactly 1..q from ``v``.

    Traversal only walks through query-labeled vertices; anything with a
    foreign label neither appears in a layer nor relays a path.
    """
    g.check_vertex(v)
    if q < 1:
        raise ValueError(f"q must be >= 1, got {q}")
    vl = g.vertex_labels
    fwd = labels.forward
    dist = {v: 0}
    layers: list[list[int]] = [[] for _ in range(q)]
    frontier = deque([v])
    while frontier:
        x = frontier.popleft()
        d = dist[x]
        if d == q:
            continue
        for w in g.neighbors(x):
            if w not in dist and vl[w] in fwd:
                dist[w] = d + 1
                layers[d].append(w)
                frontier.append(w)
    return layers


def _counts_of(g: Graph, vertices, labels: LabelDict) -> list[int]:
    counts = [0] * labels.k
    for w in vertices:
        counts[labels.ord(g.vertex_labels[w]) - 1] += 1
    return counts


def ball_cni(g: Graph, v: int, labels: LabelDict, q: int) -> int:
    """CNI over every vertex within ``q`` hops of ``v`` (``v`` excluded)."""
    layers = bfs_layers(g, v, labels, q)
    return g_tuple(_counts_of(g, (w for layer in layers for w in layer), labels))


@dataclass(frozen=True)
class LayeredCni:
    layers: tuple[int, ...]
    layer_degrees: tuple[int, ...]

    @property
    def depth(self) -> int:
        return len(self.layers)

    def combined(self) -> int:
        """Single-integer fold of the layers.  Weaker than comparing layer by layer."""
        return g_tuple(self.layers)


def layered_cni(
    g: Graph, v: int, labels: LabelDict, q: int, cumulative: bool = False
) -> LayeredCni:
    """One CNI per hop distance ``1..q``.

    With ``cumulative=True`` layer ``j`` covers every distance ``1..j`` (a
    ball of radius ``j``) instead of exactly ``j``.  Only the cumulative form
    is safe for pruning non-induced matches: an embedding can shorten
    distances, moving a query vertex's 2-hop neighbor to 1 hop in the data.
    """
    layers = bfs_layers(g, v, labels, q)
    cnis = []
    degs = []
    acc = [0] * labels.k
    for layer in layers:
        counts = _counts_of(g, layer, labels)
        if cumulative:
            acc = [a + c for a, c in zip(acc, counts)]
            counts = acc
        cnis.append(g_tuple(counts))
        degs.append(sum(counts))
    return LayeredCni(tuple(cnis), tuple(degs))


@dataclass(frozen=True)
class PacketedCni:
    packet_size: int
    packets: tuple[int, ...]
    packet_degrees: tuple[int, ...]


def packeted_cni(counts: Sequence[int], s: int) -> PacketedCni:
    """Split the label counts into runs of ``s`` labels and index each run."""
    k = len(counts)
    if not 1 <= s <= k:
        raise ValueError(f"packet size must be in 1..{k}, got {s}")
    chunks = [counts[i : i + s] for i in range(0, k, s)]
    return PacketedCni(
        s, tuple(g_tuple(c) for c in chunks), tuple(sum(c) for c in chunks)
    )


def cni_log(c: int) -> float:
    """Natural log of ``max(c, 1)``; for reporting only, never for filtering."""
    if c < 0:
        raise ValueError("CNI values are nonnegative")
    return math.log(max(c, 1))
