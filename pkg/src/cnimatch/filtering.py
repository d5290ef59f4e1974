"""Candidate filtering: the label/degree/CNI test and the iterative pruning loop.

``ilgf_filter`` peels the data graph to a fixpoint.  Every vertex starts
with label counts taken over its query-labeled neighbors.  A vertex that no
query vertex accepts is removed; its neighbors lose one count, get their
index recomputed, and are the only vertices re-examined next round.  The
acceptance test is upward closed in the label counts, so the surviving set
does not depend on scan order.
"""

from __future__ import annotations

import random
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .cni import (
    LayeredCni,
    PacketedCni,
    g_tuple,
    layered_cni,
    packeted_cni,
)
from .graph import Graph, LabelDict, build_edge_label_dict, build_label_dict

FILTER_MODES = ("none", "label-degree", "nlf-mnd", "cni")


@dataclass
class VertexSignature:
    label_index: int
    degree: int
    cni: int
    layered: LayeredCni | None = None
    packeted: PacketedCni | None = None


def _two_branch(deg_v: int, cni_v: int, deg_u: int, cni_u: int) -> bool:
    return (deg_u < deg_v and cni_u < cni_v) or (deg_u == deg_v and cni_u == cni_v)


def cni_verify(v_sig: VertexSignature, u_sig: VertexSignature) -> bool:
    """True if data vertex ``v`` may map to query vertex ``u``.

    Labels must match, and either both degree and CNI of ``v`` are strictly
    larger than those of ``u`` or both are equal.
    """
    return v_sig.label_index == u_sig.label_index and _two_branch(
        v_sig.degree, v_sig.cni, u_sig.degree, u_sig.cni
    )


def packeted_verify(v_sig: VertexSignature, u_sig: VertexSignature) -> bool:
    """Label match plus the two-branch rule applied to every packet."""
    if v_sig.label_index != u_sig.label_index:
        return False
    pv, pu = v_sig.packeted, u_sig.packeted
    return all(
        _two_branch(dv, cv, du, cu)
        for dv, cv, du, cu in zip(pv.packet_degrees, pv.packets, pu.packet_degrees, pu.packets)
    )


def qhop_verify(v_sig: VertexSignature, u_sig: VertexSignature, q: int) -> bool:
    """Label match plus the two-branch rule on hop layers ``1..q`` in order."""
    if v_sig.layered is None or u_sig.layered is None:
        raise ValueError("qhop_verify needs layered signatures")
    if v_sig.layered.depth < q or u_sig.layered.depth < q:
        raise ValueError(f"layered signatures shallower than q={q}")
    if v_sig.label_index != u_sig.label_index:
        return False
    lv, lu = v_sig.layered, u_sig.layered
    for j in range(q):
        if not _two_branch(lv.layer_degrees[j], lv.layers[j], lu.layer_degrees[j], lu.layers[j]):
            return False
    return True


def max_neighbor_degree(g: Graph, v: int) -> int:
    return max((g.degree(w) for w in g.neighbors(v)), default=0)


def label_multiset(g: Graph, v: int) -> dict[str, int]:
    counts: dict[str, int] = defaultdict(int)
    for w in g.neighbors(v):
        counts[g.vertex_labels[w]] += 1
    return counts


def nlf_mnd_check(v_counts, v_mnd: int, u_counts, u_mnd: int) -> bool:
    """Maximum-neighbor-degree test, then neighbor-label containment.

    ``*_counts`` map a label (or label index) to its neighbor frequency.
    """
    if v_mnd < u_mnd:
        return False
    if isinstance(u_counts, dict):
        items = u_counts.items()
    else:
        items = enumerate(u_counts)
    for lab, need in items:
        if need and _get(v_counts, lab) < need:
            return False
    return True


def _get(counts, lab) -> int:
    if isinstance(counts, dict):
        return counts.get(lab, 0)
    return counts[lab] if 0 <= lab < len(counts) else 0


def nlf_mnd_verify(g: Graph, q: Graph, v: int, u: int) -> bool:
    return nlf_mnd_check(
        label_multiset(g, v), max_neighbor_degree(g, v),
        label_multiset(q, u), max_neighbor_degree(q, u),
    )


@dataclass(frozen=True)
class CandidateSets:
    """``sets[u]`` lists the data vertices that may host query vertex ``u``."""

    sets: tuple[tuple[int, ...], ...]

    @classmethod
    def empty(cls, n: int) -> CandidateSets:
        return cls(tuple(() for _ in range(n)))

    @property
    def is_empty(self) -> bool:
        return any(len(s) == 0 for s in self.sets)

    def sizes(self) -> list[int]:
        return [len(s) for s in self.sets]

    def total(self) -> int:
        return sum(len(s) for s in self.sets)

    def __getitem__(self, u: int) -> tuple[int, ...]:
        return self.sets[u]

    def __len__(self) -> int:
        return len(self.sets)

    def issubset(self, other: CandidateSets) -> bool:
        return all(set(a) <= set(b) for a, b in zip(self.sets, other.sets))


@dataclass
class FilterStats:
    pruned_label: int = 0
    pruned_qhop: int = 0
    pruned_degree: int = 0
    pruned_cni: int = 0
    iterations: int = 0
    per_iteration: list[int] = field(default_factory=list)
    candidate_sizes: list[int] = field(default_factory=list)

    @property
    def pruned_total(self) -> int:
        return self.pruned_label + self.pruned_qhop + self.pruned_degree + self.pruned_cni

    def to_record(self) -> dict:
        return {
            "iterations": self.iterations,
            "pruned_label": self.pruned_label,
            "pruned_qhop": self.pruned_qhop,
            "pruned_degree": self.pruned_degree,
            "pruned_cni": self.pruned_cni,
            "per_iteration": list(self.per_iteration),
            "candidates_per_vertex": list(self.candidate_sizes),
        }


@dataclass
class FilterState:
    graph: Graph
    labels: LabelDict
    alive: bytearray
    signatures: list[VertexSignature | None]
    query_signatures: list[VertexSignature]
    verify: Callable[[VertexSignature, VertexSignature], bool]
    to_filter: list[int] = field(default_factory=list)
    next_filter: set[int] = field(default_factory=set)
    iteration_count: int = 0
    stats: FilterStats = field(default_factory=FilterStats)
    # (scanned, removed) per iteration
    history: list[tuple[list[int], list[int]]] = field(default_factory=list)

    def survivors(self) -> list[int]:
        return [v for v, a in enumerate(self.alive) if a]


class _SignatureBuilder:
    """Turns label counts (and edge-label counts) into signatures for one mode."""

    def __init__(self, labels: LabelDict, elabels: LabelDict | None, packet_size: int | None):
        self.labels = labels
        self.elabels = elabels
        self.packet_size = packet_size
        if packet_size is not None and not 1 <= packet_size <= labels.k:
            raise ValueError(f"packet size must be in 1..{labels.k}, got {packet_size}")

    def make(self, label_index: int, counts, ecounts=None) -> VertexSignature:
        cni = g_tuple(counts)
        if self.elabels is not None:
            ce = g_tuple(ecounts) if ecounts else 0
            cni = g_tuple((cni, ce))
        packeted = packeted_cni(counts, self.packet_size) if self.packet_size else None
        return VertexSignature(label_index, sum(counts), cni, packeted=packeted)

    @property
    def verify(self):
        return packeted_verify if self.packet_size else cni_verify


def _edge_counts_to_live(g: Graph, v: int, live, elabels: LabelDict) -> list[int]:
    counts = [0] * elabels.k
    adjs = (g.out_adj[v], g.in_adj[v]) if g.directed else (g.out_adj[v],)
    for adj in adjs:
        for w, lab in adj.items():
            if live[w]:
                j = elabels.ord(lab)
                if j:
                    counts[j - 1] += 1
    return counts


def query_signatures(
    q: Graph,
    labels: LabelDict,
    elabels: LabelDict | None = None,
    packet_size: int | None = None,
    qhops: int | None = None,
) -> list[VertexSignature]:
    builder = _SignatureBuilder(labels, elabels, packet_size)
    every = bytearray(b"\x01") * len(q)
    sigs = []
    for u in range(len(q)):
        counts = [0] * labels.k
        for w in q.neighbors(u):
            counts[labels.ord(q.vertex_labels[w]) - 1] += 1
        ec = _edge_counts_to_live(q, u, every, elabels) if elabels is not None else None
        sig = builder.make(labels.ord(q.vertex_labels[u]), counts, ec)
        if qhops:
            sig.layered = layered_cni(q, u, labels, qhops, cumulative=True)
        sigs.append(sig)
    return sigs


def ilgf_filter(
    g: Graph,
    q: Graph,
    *,
    packet_size: int | None = None,
    edge_labels: bool = False,
    qhops: int | None = None,
    rng: random.Random | None = None,
) -> tuple[FilterState, CandidateSets]:
    """Prune ``g`` to the fixpoint of the label/degree/CNI test against ``q``.

    ``qhops > 1`` first removes vertices that fail the hop-layer test (layers
    computed once, cumulatively) before the iterative one-hop loop.  ``rng``
    shuffles every scan; the result is the same for any order.
    """
    labels = build_label_dict(q)
    elabels = build_edge_label_dict(q) if edge_labels else None
    builder = _SignatureBuilder(labels, elabels, packet_size)
    verify = builder.verify
    use_qhops = qhops is not None and qhops > 1
    qsigs = query_signatures(q, labels, elabels, packet_size, qhops if use_qhops else None)
    by_label: dict[int, list[VertexSignature]] = defaultdict(list)
    for s in qsigs:
        by_label[s.label_index].append(s)

    n = len(g)
    vl = g.vertex_labels
    lidx = [labels.ord(vl[v]) for v in range(n)]
    alive = bytearray(1 if lidx[v] else 0 for v in range(n))
    stats = FilterStats()
    stats.pruned_label = n - sum(alive)

    if use_qhops:
        doomed = []
        for v in range(n):
            if alive[v]:
                vsig = VertexSignature(lidx[v], 0, 0, layered=layered_cni(g, v, labels, qhops, cumulative=True))
                if not any(qhop_verify(vsig, u, qhops) for u in by_label[lidx[v]]):
                    doomed.append(v)
        for v in doomed:
            alive[v] = 0
        stats.pruned_qhop = len(doomed)

    counts: list[list[int] | None] = [None] * n
    ecounts: list[list[int] | None] = [None] * n
    sigs: list[VertexSignature | None] = [None] * n
    for v in range(n):
        if not alive[v]:
            continue
        c = [0] * labels.k
        for w in g.neighbors(v):
            if alive[w]:
                c[lidx[w] - 1] += 1
        counts[v] = c
        if elabels is not None:
            ecounts[v] = _edge_counts_to_live(g, v, alive, elabels)
        sigs[v] = builder.make(lidx[v], c, ecounts[v])

    state = FilterState(g, labels, alive, sigs, qsigs, verify)

    def order(vs):
        vs = sorted(vs)
        if rng is not None:
            rng.shuffle(vs)
        return vs

    to_filter = order(v for v in range(n) if alive[v])
    while to_filter:
        state.to_filter = to_filter
        state.iteration_count += 1
        next_filter: set[int] = set()
        removed: list[int] = []
        for v in to_filter:
            if not alive[v]:
                continue
            sv = sigs[v]
            cands = by_label[sv.label_index]
            if any(verify(sv, su) for su in cands):
                continue
            if all(su.degree > sv.degree for su in cands):
                stats.pruned_degree += 1
            else:
                stats.pruned_cni += 1
            removed.append(v)
            alive[v] = 0
            sigs[v] = None
            next_filter.discard(v)
            li = lidx[v] - 1
            for w in g.neighbors(v):
                if not alive[w]:
                    continue
                counts[w][li] -= 1
                if elabels is not None:
                    for adj in (g.out_adj[w], g.in_adj[w]) if g.directed else (g.out_adj[w],):
                        j = elabels.ord(adj[v]) if v in adj else 0
                        if j:
                            ecounts[w][j - 1] -= 1
                sigs[w] = builder.make(lidx[w], counts[w], ecounts[w])
                next_filter.add(w)
        stats.per_iteration.append(len(removed))
        state.history.append((to_filter, removed))
        state.next_filter = next_filter
        to_filter = order(next_filter)
    state.next_filter = set()
    stats.iterations = state.iteration_count
    state.stats = stats

    cs = build_candidate_sets(state, q)
    stats.candidate_sizes = cs.sizes()
    return state, cs


def build_candidate_sets(state: FilterState, q: Graph) -> CandidateSets:
    """Per query vertex, the surviving data vertices it accepts.

    Returns all-empty sets as soon as one query vertex has no candidate.
    """
    by_label: dict[int, list[int]] = defaultdict(list)
    for v in state.survivors():
        by_label[state.signatures[v].label_index].append(v)
    out = []
    for su in state.query_signatures:
        c = tuple(v for v in by_label[su.label_index] if state.verify(state.signatures[v], su))
        if not c:
            return CandidateSets.empty(len(q))
        out.append(c)
    return CandidateSets(tuple(out))


def label_candidates(g: Graph, q: Graph) -> CandidateSets:
    """Data vertices with the query vertex's label; no other pruning."""
    by_label: dict[str, list[int]] = defaultdict(list)
    for v, lab in enumerate(g.vertex_labels):
        by_label[lab].append(v)
    return CandidateSets(tuple(tuple(by_label[lab]) for lab in q.vertex_labels))


def label_degree_candidates(g: Graph, q: Graph) -> CandidateSets:
    """Label match plus label-restricted degree at least the query vertex's."""
    labels = build_label_dict(q)
    qdeg = [q.degree(u) for u in range(len(q))]
    gdeg = {}
    for v, lab in enumerate(g.vertex_labels):
        if lab in labels:
            gdeg[v] = sum(1 for w in g.neighbors(v) if g.vertex_labels[w] in labels)
    base = label_candidates(g, q)
    return CandidateSets(
        tuple(tuple(v for v in base[u] if gdeg[v] >= qdeg[u]) for u in range(len(q)))
    )


def nlf_mnd_candidates(g: Graph, q: Graph) -> CandidateSets:
    base = label_candidates(g, q)
    qinfo = [(label_multiset(q, u), max_neighbor_degree(q, u)) for u in range(len(q))]
    ginfo: dict[int, tuple] = {}
    out = []
    for u in range(len(q)):
        keep = []
        for v in base[u]:
            if v not in ginfo:
                ginfo[v] = (label_multiset(g, v), max_neighbor_degree(g, v))
            if nlf_mnd_check(ginfo[v][0], ginfo[v][1], qinfo[u][0], qinfo[u][1]):
                keep.append(v)
        out.append(tuple(keep))
    return CandidateSets(tuple(out))


def candidates_for_mode(g: Graph, q: Graph, mode: str, **kwargs) -> tuple[CandidateSets, FilterStats]:
    """Candidate sets under one of the filter configurations."""
    if mode == "cni" or mode == "cni+qhop":
        if mode == "cni+qhop":
            kwargs.setdefault("qhops", 2)
        state, cs = ilgf_filter(g, q, **kwargs)
        return cs, state.stats
    builders = {
        "none": label_candidates,
        "label-degree": label_degree_candidates,
        "nlf-mnd": nlf_mnd_candidates,
    }
    if mode not in builders:
        raise ValueError(f"unknown filter mode {mode!r}")
    cs = builders[mode](g, q)
    stats = FilterStats(candidate_sizes=cs.sizes())
    return cs, stats


def filtered_graph(state: FilterState) -> tuple[Graph, list[int]]:
    """Subgraph induced by the survivors, plus the original id of each vertex."""
    keep = state.survivors()
    return state.graph.induced_subgraph(keep, name="filtered"), keep


def qhop_signature(g: Graph, v: int, labels: LabelDict, q: int, cumulative: bool = False) -> VertexSignature:
    lay = layered_cni(g, v, labels, q, cumulative=cumulative)
    return VertexSignature(labels.ord(g.vertex_labels[v]), lay.layer_degrees[0], lay.layers[0], layered=lay)


def signatures_for(g: Graph, vertices: Sequence[int], labels: LabelDict) -> list[VertexSignature]:
    """One-hop signatures of ``vertices`` over the label-filtered graph."""
    out = []
    for v in vertices:
        c = [0] * labels.k
        for w in g.neighbors(v):
            j = labels.ord(g.vertex_labels[w])
            if j:
                c[j - 1] += 1
        out.append(VertexSignature(labels.ord(g.vertex_labels[v]), sum(c), g_tuple(c)))
    return out
