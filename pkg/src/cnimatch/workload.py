"""Query workloads, dataset statistics and the filter-configuration benchmark."""

from __future__ import annotations

import random
import statistics
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Sequence

from .filtering import candidates_for_mode
from .graph import Graph, write_graph
from .search import SearchConfig, enumerate_embeddings

BENCH_CONFIGS = ("none", "label-degree", "nlf-mnd", "cni", "cni+qhop")


class WorkloadError(RuntimeError):
    pass


class BenchmarkDisagreement(AssertionError):
    pass


@dataclass(frozen=True)
class WorkloadSpec:
    query_size: int
    count: int = 1
    mode: str = "sparse"
    seed: int = 0
    max_restarts: int = 100

    def __post_init__(self):
        if self.query_size < 1 or self.count < 1:
            raise ValueError("query_size and count must be >= 1")
        if self.mode not in ("sparse", "dense"):
            raise ValueError(f"mode must be 'sparse' or 'dense', got {self.mode!r}")


def _walk(g: Graph, size: int, mode: str, rng: random.Random) -> list[int] | None:
    start = rng.randrange(len(g))
    visited = [start]
    seen = {start}
    cur = start
    pick = min if mode == "sparse" else max
    for _ in range(20 * size):
        if len(visited) == size:
            return visited
        nbrs = g.neighbors(cur)
        if not nbrs:
            return None
        fresh = [w for w in nbrs if w not in seen]
        if fresh:
            best = pick(g.degree(w) for w in fresh)
            cur = rng.choice([w for w in fresh if g.degree(w) == best])
            seen.add(cur)
            visited.append(cur)
        else:
            # boxed in: step back through a visited neighbor
            cur = rng.choice(nbrs)
    return visited if len(visited) == size else None


def generate_queries(g: Graph, spec: WorkloadSpec) -> list[Graph]:
    """Random-walk queries: each is the subgraph induced by the visited vertices.

    Sparse walks step to the unvisited neighbor of lowest degree, dense walks
    to the highest; ties are broken by the seeded generator.
    """
    if len(g) == 0:
        raise WorkloadError("cannot walk an empty graph")
    rng = random.Random(spec.seed)
    out = []
    for i in range(spec.count):
        for _ in range(spec.max_restarts + 1):
            walk = _walk(g, spec.query_size, spec.mode, rng)
            if walk is not None:
                break
        else:
            raise WorkloadError(
                f"no connected walk of {spec.query_size} vertices after {spec.max_restarts} restarts"
            )
        out.append(g.induced_subgraph(walk, name=query_filename(spec, i)[:-3]))
    return out


def query_filename(spec: WorkloadSpec, index: int) -> str:
    return f"q_{spec.query_size}_{spec.mode}_{index}.lg"


def write_workload(queries: Sequence[Graph], spec: WorkloadSpec, outdir) -> list[Path]:
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    paths = []
    for i, qg in enumerate(queries):
        p = outdir / query_filename(spec, i)
        with open(p, "w") as fh:
            write_graph(qg, fh)
        paths.append(p)
    return paths


def dataset_stats(g: Graph) -> dict:
    n = len(g)
    m = g.edge_count
    return {
        "name": g.name,
        "vertices": n,
        "edges": m,
        "labels": len(set(g.vertex_labels)),
        "average_degree": 2 * m / n if n else 0.0,
    }


def random_graph(
    n: int, m: int, n_labels: int, seed: int = 0, edge_labels: int = 1, connected: bool = True
) -> Graph:
    """Uniform random simple graph with ``m`` edges and uniform vertex labels.

    ``connected`` threads a random spanning path first so every walk has room.
    """
    if m > n * (n - 1) // 2:
        raise ValueError("too many edges for a simple graph")
    rng = random.Random(seed)
    labels = [str(rng.randrange(n_labels)) for _ in range(n)]
    edges: set[tuple[int, int]] = set()
    if connected and n > 1:
        perm = list(range(n))
        rng.shuffle(perm)
        for a, b in zip(perm, perm[1:]):
            if len(edges) >= m:
                break
            edges.add((min(a, b), max(a, b)))
    while len(edges) < m:
        a, b = rng.randrange(n), rng.randrange(n)
        if a != b:
            edges.add((min(a, b), max(a, b)))
    elab = [
        (a, b, "_" if edge_labels == 1 else f"e{rng.randrange(edge_labels)}")
        for a, b in sorted(edges)
    ]
    return Graph.from_edges(labels, elab, name=f"random_{n}_{m}_{seed}")


@dataclass
class QueryRecord:
    query_id: str
    filter_mode: str
    iterations: int
    pruned_label: int
    pruned_degree: int
    pruned_cni: int
    candidates_per_vertex: list[int]
    embeddings: int
    elapsed_ms: float


@dataclass
class BenchReport:
    records: list[QueryRecord] = field(default_factory=list)

    def aggregates(self) -> dict:
        out = {}
        for mode in dict.fromkeys(r.filter_mode for r in self.records):
            rs = [r for r in self.records if r.filter_mode == mode]
            out[mode] = {
                "queries": len(rs),
                "mean_elapsed_ms": statistics.fmean(r.elapsed_ms for r in rs),
                "mean_candidates": statistics.fmean(sum(r.candidates_per_vertex) for r in rs),
                "total_embeddings": sum(r.embeddings for r in rs),
            }
        return out

    def to_records(self) -> list[dict]:
        return [asdict(r) for r in self.records]


def run_query(g: Graph, q: Graph, mode: str, cfg: SearchConfig | None = None, **filter_kwargs):
    """Filter then search; returns ``(record, embedding set)``."""
    t0 = time.perf_counter()
    cs, stats = candidates_for_mode(g, q, mode, **filter_kwargs)
    embs = set(enumerate_embeddings(g, q, cs, cfg))
    elapsed = (time.perf_counter() - t0) * 1000
    rec = QueryRecord(
        query_id=q.name,
        filter_mode=mode,
        iterations=stats.iterations,
        pruned_label=stats.pruned_label,
        pruned_degree=stats.pruned_degree,
        pruned_cni=stats.pruned_cni,
        candidates_per_vertex=cs.sizes(),
        embeddings=len(embs),
        elapsed_ms=elapsed,
    )
    return rec, embs


def run_benchmark(
    g: Graph, workload: Sequence[Graph], configs: Sequence[str] = ("label-degree", "cni"),
    cfg: SearchConfig | None = None,
) -> BenchReport:
    """Run every query under every configuration and insist they agree."""
    for c in configs:
        if c not in BENCH_CONFIGS:
            raise ValueError(f"unknown benchmark config {c!r}")
    if cfg is not None and cfg.embedding_limit is not None:
        raise ValueError("benchmark compares full embedding sets; drop the limit")
    report = BenchReport()
    for q in workload:
        reference = None
        for mode in configs:
            rec, embs = run_query(g, q, mode, cfg)
            report.records.append(rec)
            if reference is None:
                reference = (mode, embs)
            elif embs != reference[1]:
                raise BenchmarkDisagreement(
                    f"query {q.name}: {mode} found {len(embs)} embeddings, "
                    f"{reference[0]} found {len(reference[1])}"
                )
    return report
