"""Command-line driver: ``cnimatch <subcommand> ...``.

Every quantitative result is written as one JSON object per line, either to
``--stats-out`` or, failing that, to stderr (``stats`` and ``bench`` print to
stdout since the records are their output).
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from .filtering import candidates_for_mode, filtered_graph, ilgf_filter
from .graph import GraphFormatError, read_graph, write_graph
from .search import SearchConfig, enumerate_embeddings, format_embedding
from .stream import StreamOrderError, parse_stream, stream_filter
from .workload import (
    BENCH_CONFIGS,
    BenchmarkDisagreement,
    WorkloadError,
    WorkloadSpec,
    dataset_stats,
    generate_queries,
    run_benchmark,
    write_workload,
)


def _positive(text: str) -> int:
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {n}")
    return n


def build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    src = shared.add_mutually_exclusive_group()
    src.add_argument("--data", type=Path, help="data graph in .lg format")
    src.add_argument("--stream", type=Path, help="edge stream file")
    shared.add_argument("--query", type=Path, nargs="+", default=[], help="query graph file(s)")
    shared.add_argument("--filter", dest="filter_mode", default="cni",
                        choices=["none", "label-degree", "nlf-mnd", "cni"])
    shared.add_argument("--qhops", type=_positive, default=1)
    shared.add_argument("--packet-size", type=_positive, default=None)
    shared.add_argument("--order", default="least-candidates", choices=["input", "least-candidates"])
    shared.add_argument("--limit", type=_positive, default=None)
    shared.add_argument("--count-only", action="store_true")
    shared.add_argument("--stats-out", type=Path, default=None)
    shared.add_argument("--seed", type=int, default=0)
    shared.add_argument("--parallel", action="store_true")
    shared.add_argument("--directed", action="store_true", help="read graphs as directed")

    p = argparse.ArgumentParser(prog="cnimatch", description="Subgraph matching with compact neighborhood indexes.")
    sub = p.add_subparsers(dest="command", required=True)

    sub.add_parser("match", parents=[shared], help="enumerate embeddings")
    f = sub.add_parser("filter", parents=[shared], help="write the filtered data graph")
    f.add_argument("--out", type=Path, default=None)
    sf = sub.add_parser("stream-filter", parents=[shared], help="filter an edge stream")
    sf.add_argument("--out", type=Path, default=None)
    g = sub.add_parser("gen-queries", parents=[shared], help="random-walk query workload")
    g.add_argument("--size", type=_positive, required=True)
    g.add_argument("--count", type=_positive, default=1)
    g.add_argument("--mode", choices=["sparse", "dense"], default="sparse")
    g.add_argument("--out", type=Path, required=True)
    sub.add_parser("stats", parents=[shared], help="dataset characteristics")
    b = sub.add_parser("bench", parents=[shared], help="compare filter configurations")
    b.add_argument("--configs", nargs="+", default=["label-degree", "cni"], choices=list(BENCH_CONFIGS))
    return p


class _Records:
    def __init__(self, path: Path | None, default):
        self.path = path
        self.default = default
        self.lines: list[str] = []

    def emit(self, rec: dict) -> None:
        self.lines.append(json.dumps(rec, sort_keys=False))

    def flush(self) -> None:
        if self.path is not None:
            self.path.write_text("".join(line + "\n" for line in self.lines))
        else:
            for line in self.lines:
                print(line, file=self.default)


def _filter_kwargs(args) -> dict:
    kw = {}
    if args.packet_size is not None:
        kw["packet_size"] = args.packet_size
    if args.qhops > 1:
        kw["qhops"] = args.qhops
    return kw


def _need(args, *names):
    for name in names:
        if not getattr(args, name):
            raise UsageError(f"--{name.replace('_', '-')} is required")


class UsageError(Exception):
    pass


def _stats_record(q, mode, stats, cs, n_emb, t0) -> dict:
    return {
        "query_id": q.name,
        "filter_mode": mode,
        "iterations": stats.iterations,
        "pruned_label": stats.pruned_label,
        "pruned_degree": stats.pruned_degree,
        "pruned_cni": stats.pruned_cni,
        "candidates_per_vertex": cs.sizes(),
        "embeddings": n_emb,
        "elapsed_ms": round((time.perf_counter() - t0) * 1000, 3),
    }


def cmd_match(args, out) -> None:
    _need(args, "query")
    if not (args.data or args.stream):
        raise UsageError("one of --data or --stream is required")
    cfg = SearchConfig(args.order, args.limit, args.parallel)
    queries = [read_graph(p, args.directed) for p in args.query]
    records = _Records(args.stats_out, sys.stderr)
    lines: list[str] = []
    if args.data:
        g = read_graph(args.data, args.directed)
    for q in queries:
        t0 = time.perf_counter()
        if args.stream:
            with open(args.stream) as fh:
                reduced = stream_filter(parse_stream(fh), q)
            state, cs = ilgf_filter(reduced.graph, q, **_filter_kwargs(args))
            target, ids, mode, stats = reduced.graph, reduced.original_ids, "stream+cni", state.stats
        else:
            cs, stats = candidates_for_mode(g, q, args.filter_mode, **_filter_kwargs(args))
            target, ids, mode = g, None, args.filter_mode
        n = 0
        for emb in enumerate_embeddings(target, q, cs, cfg):
            n += 1
            if not args.count_only:
                if ids is not None:
                    emb = tuple(ids[v] for v in emb)
                lines.append(format_embedding(emb))
        if args.count_only:
            lines.append(str(n))
        records.emit(_stats_record(q, mode, stats, cs, n, t0))
    for line in lines:
        print(line, file=out)
    records.flush()


def cmd_filter(args, out) -> None:
    _need(args, "data", "query")
    g = read_graph(args.data, args.directed)
    q = read_graph(args.query[0], args.directed)
    t0 = time.perf_counter()
    if args.filter_mode == "cni":
        state, cs = ilgf_filter(g, q, **_filter_kwargs(args))
        sub, keep = filtered_graph(state)
        stats = state.stats
    else:
        cs, stats = candidates_for_mode(g, q, args.filter_mode)
        keep = sorted({v for s in cs.sets for v in s})
        sub = g.induced_subgraph(keep, name="filtered")
        qlabels = set(q.vertex_labels)
        stats.pruned_label = sum(1 for lab in g.vertex_labels if lab not in qlabels)
    rec = _stats_record(q, args.filter_mode, stats, cs, None, t0)
    del rec["embeddings"]
    rec.update(vertices_in=len(g), vertices_out=len(keep), pruned_total=len(g) - len(keep), survivors=keep)
    _write_graph_to(sub, args.out, out)
    records = _Records(args.stats_out, sys.stderr)
    records.emit(rec)
    records.flush()


def _write_graph_to(g, path, out) -> None:
    if path is None:
        write_graph(g, out)
    else:
        with open(path, "w") as fh:
            write_graph(g, fh)


def cmd_stream_filter(args, out) -> None:
    _need(args, "stream", "query")
    q = read_graph(args.query[0])
    t0 = time.perf_counter()
    with open(args.stream) as fh:
        reduced = stream_filter(parse_stream(fh), q)
    state, cs = ilgf_filter(reduced.graph, q, **_filter_kwargs(args))
    sub, keep = filtered_graph(state)
    survivors = [reduced.original_ids[v] for v in keep]
    rec = reduced.stats.to_record()
    rec.update(_stats_record(q, "stream+cni", state.stats, cs, None, t0))
    del rec["embeddings"]
    rec.update(vertices_retained=len(reduced.graph), survivors=survivors)
    _write_graph_to(sub, args.out, out)
    records = _Records(args.stats_out, sys.stderr)
    records.emit(rec)
    records.flush()


def cmd_gen_queries(args, out) -> None:
    _need(args, "data")
    g = read_graph(args.data)
    spec = WorkloadSpec(args.size, args.count, args.mode, args.seed)
    paths = write_workload(generate_queries(g, spec), spec, args.out)
    records = _Records(args.stats_out, out)
    records.emit({"queries": [str(p) for p in paths], "size": spec.query_size,
                  "mode": spec.mode, "seed": spec.seed})
    records.flush()


def cmd_stats(args, out) -> None:
    _need(args, "data")
    records = _Records(args.stats_out, out)
    records.emit(dataset_stats(read_graph(args.data, args.directed)))
    records.flush()


def cmd_bench(args, out) -> None:
    _need(args, "data", "query")
    g = read_graph(args.data)
    queries = [read_graph(p) for p in args.query]
    report = run_benchmark(g, queries, args.configs, SearchConfig(args.order, None, args.parallel))
    records = _Records(args.stats_out, out)
    for rec in report.to_records():
        records.emit(rec)
    records.emit({"aggregates": report.aggregates()})
    records.flush()


COMMANDS = {
    "match": cmd_match,
    "filter": cmd_filter,
    "stream-filter": cmd_stream_filter,
    "gen-queries": cmd_gen_queries,
    "stats": cmd_stats,
    "bench": cmd_bench,
}


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        COMMANDS[args.command](args, out)
    except (OSError, GraphFormatError, StreamOrderError, WorkloadError, UsageError, ValueError) as exc:
        print(f"cnimatch {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except BenchmarkDisagreement as exc:
        print(f"cnimatch bench: configurations disagree: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
