"""Filter a graph that arrives as a sorted edge stream.

The data graph is never built in full: each vertex is checked when its
group of edges ends, and only what could still match is kept.
"""

from __future__ import annotations

import io

from cnimatch import ilgf_filter, parse_stream, stream_filter
from cnimatch.stream import graph_to_stream, stream_pipeline, write_stream
from cnimatch.workload import WorkloadSpec, generate_queries, random_graph


def main() -> None:
    g = random_graph(1500, 5000, 25, seed=3)
    q = generate_queries(g, WorkloadSpec(query_size=5, mode="dense", seed=2))[0]

    buf = io.StringIO()
    write_stream(graph_to_stream(g), buf)
    text = buf.getvalue()
    print(f"stream: {len(text.splitlines()) - 1} records, {len(text)} bytes")
    print("first records:")
    for line in text.splitlines()[:4]:
        print("  ", line)

    run = stream_filter(parse_stream(text), q)
    for k, v in run.stats.to_record().items():
        print(f"  {k}: {v}")
    print(f"retained graph: {len(run.graph)} vertices, {run.graph.edge_count} edges")

    reduced, state, _ = stream_pipeline(parse_stream(text), q)
    from_stream = reduced.original(state.survivors())
    in_memory = ilgf_filter(g, q)[0].survivors()
    print(f"\nsurvivors after the in-memory pass: {len(from_stream)}")
    print("same as filtering the whole graph in memory:", from_stream == in_memory)


if __name__ == "__main__":
    main()
