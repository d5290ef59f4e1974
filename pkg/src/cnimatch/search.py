"""Backtracking enumeration of embeddings over precomputed candidate sets."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterator, Mapping, Sequence

from .filtering import CandidateSets
from .graph import Graph

ORDER_POLICIES = ("input", "least-candidates")

Embedding = tuple[int, ...]


@dataclass(frozen=True)
class SearchConfig:
    order_policy: str = "least-candidates"
    embedding_limit: int | None = None
    parallel_roots: bool = False
    workers: int | None = None

    def __post_init__(self):
        if self.order_policy not in ORDER_POLICIES:
            raise ValueError(f"unknown order policy {self.order_policy!r}")
        if self.embedding_limit is not None and self.embedding_limit < 1:
            raise ValueError("embedding_limit must be positive")


def neighbor_check(q: Graph, g: Graph, u: int, v: int, m: Mapping[int, int]) -> bool:
    """Every matched query neighbor of ``u`` maps onto a data neighbor of
    ``v`` through an edge with the same label (and direction)."""
    for u2, v2 in m.items():
        lab = q.out_adj[u].get(u2)
        if lab is not None and g.out_adj[v].get(v2) != lab:
            return False
        if q.directed:
            lab = q.in_adj[u].get(u2)
            if lab is not None and g.in_adj[v].get(v2) != lab:
                return False
    return True


def choose_next_vertex(q: Graph, matched: Sequence[int] | set, cs: CandidateSets, policy: str) -> int:
    matched = set(matched)
    unmatched = [u for u in range(len(q)) if u not in matched]
    if not unmatched:
        raise ValueError("embedding is already total")
    if policy == "input":
        return unmatched[0]
    if policy != "least-candidates":
        raise ValueError(f"unknown order policy {policy!r}")
    frontier = [u for u in unmatched if any(w in matched for w in q.neighbors(u))]
    pool = frontier or unmatched
    return min(pool, key=lambda u: (len(cs[u]), u))


def matching_order(q: Graph, cs: CandidateSets, policy: str) -> list[int]:
    # the policy only looks at which query vertices are matched, so the
    # order is the same in every branch and can be fixed up front
    order: list[int] = []
    for _ in range(len(q)):
        order.append(choose_next_vertex(q, order, cs, policy))
    return order


class _Plan:
    """Static per-depth data for the recursion."""

    def __init__(self, g: Graph, q: Graph, cs: CandidateSets, order: list[int]):
        self.g = g
        self.q = q
        self.order = order
        self.cands = [cs[u] for u in order]
        self.cand_sets = [frozenset(c) for c in self.cands]
        pos = {u: i for i, u in enumerate(order)}
        # earlier-placed query neighbors with the edge labels to honor
        self.back: list[list[tuple[int, str | None, str | None]]] = []
        for i, u in enumerate(order):
            links = []
            for w in q.neighbors(u):
                if pos[w] < i:
                    links.append((w, q.out_adj[u].get(w), q.in_adj[u].get(w) if q.directed else None))
            self.back.append(links)


def _extend(plan: _Plan, depth: int, m: list[int], used: set[int]) -> Iterator[Embedding]:
    if depth == len(plan.order):
        yield tuple(m)
        return
    g = plan.g
    u = plan.order[depth]
    links = plan.back[depth]
    if links:
        # candidates must be adjacent to the image of a matched neighbor
        anchor = m[links[0][0]]
        pool = (v for v in g.neighbors(anchor) if v in plan.cand_sets[depth])
    else:
        pool = iter(plan.cands[depth])
    out_adj = g.out_adj
    in_adj = g.in_adj
    for v in pool:
        if v in used:
            continue
        ok = True
        for w, out_lab, in_lab in links:
            mw = m[w]
            if out_lab is not None and out_adj[v].get(mw) != out_lab:
                ok = False
                break
            if in_lab is not None and in_adj[v].get(mw) != in_lab:
                ok = False
                break
        if not ok:
            continue
        m[u] = v
        used.add(v)
        yield from _extend(plan, depth + 1, m, used)
        used.discard(v)
        m[u] = -1


def _root_worker(args) -> list[Embedding]:
    g, q, cs, order, roots = args
    plan = _Plan(g, q, cs, order)
    plan.cands[0] = tuple(roots)
    plan.cand_sets[0] = frozenset(roots)
    return list(_extend(plan, 0, [-1] * len(q), set()))


def enumerate_embeddings(
    g: Graph, q: Graph, cs: CandidateSets, cfg: SearchConfig | None = None
) -> Iterator[Embedding]:
    """Yield every embedding of ``q`` into ``g`` drawn from ``cs``.

    An embedding is a tuple whose ``u``-th entry is the data vertex hosting
    query vertex ``u``.
    """
    cfg = cfg or SearchConfig()
    if len(q) == 0 or cs.is_empty:
        return
    order = matching_order(q, cs, cfg.order_policy)
    limit = cfg.embedding_limit
    if cfg.parallel_roots:
        stream = _parallel(g, q, cs, order, cfg.workers)
    else:
        stream = _extend(_Plan(g, q, cs, order), 0, [-1] * len(q), set())
    for count, emb in enumerate(stream, 1):
        yield emb
        if limit is not None and count >= limit:
            return


def _parallel(g, q, cs, order, workers) -> Iterator[Embedding]:
    roots = cs[order[0]]
    if not roots:
        return
    nworkers = workers or 4
    chunks = [roots[i::nworkers] for i in range(nworkers) if roots[i::nworkers]]
    with ProcessPoolExecutor(max_workers=len(chunks)) as pool:
        for part in pool.map(_root_worker, [(g, q, cs, order, c) for c in chunks]):
            yield from part


def is_embedding(g: Graph, q: Graph, emb: Sequence[int]) -> bool:
    """Injective, label preserving, and every query edge lands on a data edge
    with the same label."""
    if len(emb) != len(q) or len(set(emb)) != len(emb):
        return False
    if any(not 0 <= v < len(g) for v in emb):
        return False
    if any(q.vertex_labels[u] != g.vertex_labels[v] for u, v in enumerate(emb)):
        return False
    return all(g.out_adj[emb[a]].get(emb[b]) == lab for a, b, lab in q.edges())


def format_embedding(emb: Sequence[int]) -> str:
    return " ".join(f"u{u}:{v}" for u, v in enumerate(emb))


def parse_embedding(line: str) -> Embedding:
    pairs = sorted((int(a[1:]), int(b)) for a, b in (tok.split(":") for tok in line.split()))
    return tuple(v for _, v in pairs)
