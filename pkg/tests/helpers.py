"""Independent oracles and fixtures shared by the test modules."""

from __future__ import annotations

import itertools
import random
from math import comb

from cnimatch.graph import Graph


def running_query() -> Graph:
    """The five-vertex query used throughout the worked examples.

    Labels a, b, b, c, d number as 1, 2, 2, 3, 4.  The edges out of u1 carry
    the labels b and d so that its edge-label index is g_4(0,1,0,1).
    """
    return Graph.from_edges(
        ["a", "b", "b", "c", "d"],
        [(0, 1, "b"), (0, 2, "d"), (1, 2, "a"), (2, 3, "a"), (2, 4, "a")],
        name="running",
    )


def running_query_directed() -> Graph:
    """Directed variant: u1 has one outgoing b-edge and one incoming d-edge."""
    return Graph.from_edges(
        ["a", "b", "b", "c", "d"],
        [(0, 1, "b"), (2, 0, "d"), (1, 2, "a"), (2, 3, "a"), (2, 4, "a")],
        directed=True,
        name="running-directed",
    )


def naive_h(p: int, s: int) -> int:
    """(s+p-1)! / (p! (s-1)!) straight from factorials; 0 when s == 0."""
    if s == 0:
        return 0
    from math import factorial

    return factorial(s + p - 1) // (factorial(p) * factorial(s - 1))


def naive_g(xs) -> int:
    return sum(comb(sum(xs[:j]) + j - 1, j) for j in range(1, len(xs) + 1))


def brute_force_embeddings(g: Graph, q: Graph) -> set[tuple[int, ...]]:
    """Every injective, label-preserving, edge-preserving map, by enumeration."""
    pools = [
        [v for v in range(len(g)) if g.vertex_labels[v] == q.vertex_labels[u]]
        for u in range(len(q))
    ]
    out = set()
    qedges = list(q.edges())
    for emb in itertools.product(*pools):
        if len(set(emb)) != len(emb):
            continue
        if all(g.out_adj[emb[a]].get(emb[b]) == lab for a, b, lab in qedges):
            out.add(emb)
    return out


def random_graph(rng: random.Random, n: int, p: float, n_labels: int, n_elabels: int = 1,
                 directed: bool = False) -> Graph:
    labels = [chr(ord("A") + rng.randrange(n_labels)) for _ in range(n)]
    edges = []
    for a in range(n):
        for b in range(n) if directed else range(a + 1, n):
            if a != b and rng.random() < p:
                edges.append((a, b, f"e{rng.randrange(n_elabels)}"))
    return Graph.from_edges(labels, edges, directed=directed)


def random_connected_subgraph(rng: random.Random, g: Graph, size: int) -> Graph | None:
    """A random connected (not necessarily induced) subgraph of ``g``."""
    start = rng.randrange(len(g))
    chosen = [start]
    while len(chosen) < size:
        frontier = sorted({w for v in chosen for w in g.neighbors(v)} - set(chosen))
        if not frontier:
            return None
        chosen.append(rng.choice(frontier))
    index = {v: i for i, v in enumerate(chosen)}
    edges = [(index[u], index[v], lab) for u, v, lab in g.edges() if u in index and v in index]
    # drop some edges but keep a spanning tree so the query stays connected
    tree = set()
    seen = {0}
    for i in range(1, len(chosen)):
        for u, v, lab in edges:
            if (u == i and v in seen) or (v == i and u in seen):
                tree.add((u, v, lab))
                break
        seen.add(i)
    kept = [e for e in edges if e in tree or rng.random() < 0.6]
    return Graph.from_edges([g.vertex_labels[v] for v in chosen], kept, directed=g.directed)


def random_instance(seed: int, max_g: int = 12, max_q: int = 5, max_labels: int = 4,
                    n_elabels: int = 1, directed: bool = False) -> tuple[Graph, Graph]:
    rng = random.Random(seed)
    n = rng.randint(3, max_g)
    g = random_graph(rng, n, rng.uniform(0.2, 0.7), rng.randint(1, max_labels), n_elabels, directed)
    size = rng.randint(1, min(max_q, n))
    q = None
    if rng.random() < 0.7:
        q = random_connected_subgraph(rng, g, size)
    if q is None:
        q = random_graph(rng, size, rng.uniform(0.3, 0.9), rng.randint(1, max_labels), n_elabels, directed)
    return g, q


def alive_reference(g: Graph, q: Graph) -> set[int]:
    """Greatest fixpoint of the one-hop test by naive whole-graph sweeps.

    Recomputes every signature from scratch each sweep, sharing nothing with
    the work-set implementation except the acceptance rule itself.
    """
    qlabels = {}
    for lab in q.vertex_labels:
        qlabels.setdefault(lab, len(qlabels) + 1)
    k = len(qlabels)

    def sig(graph, v, alive):
        c = [0] * k
        for w in graph.neighbors(v):
            if w in alive:
                c[qlabels[graph.vertex_labels[w]] - 1] += 1
        return sum(c), naive_g(c)

    qall = set(range(len(q)))
    qsig = [(q.vertex_labels[u], *sig(q, u, qall)) for u in range(len(q))]
    alive = {v for v in range(len(g)) if g.vertex_labels[v] in qlabels}
    while True:
        keep = set()
        for v in alive:
            d, c = sig(g, v, alive)
            lab = g.vertex_labels[v]
            if any(lab == lu and ((du < d and cu < c) or (du == d and cu == c)) for lu, du, cu in qsig):
                keep.add(v)
        if keep == alive:
            return alive
        alive = keep
