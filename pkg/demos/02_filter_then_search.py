"""Filter a random data graph down to a fixpoint, then enumerate matches.

Compares the candidate sets left by the label/degree baseline with those left
by the index-based fixpoint, and checks both lead to the same embeddings.
"""

from __future__ import annotations

from cnimatch import SearchConfig, candidates_for_mode, enumerate_embeddings, ilgf_filter
from cnimatch.workload import WorkloadSpec, generate_queries, random_graph


def main() -> None:
    g = random_graph(2000, 8000, 40, seed=1)
    q = generate_queries(g, WorkloadSpec(query_size=6, mode="sparse", seed=4))[0]
    print(f"data: {len(g)} vertices, {g.edge_count} edges")
    print(f"query: labels {q.vertex_labels}, {q.edge_count} edges")

    state, cs = ilgf_filter(g, q)
    st = state.stats
    print(f"\nfixpoint after {st.iterations} iterations")
    print(f"  removed by label:  {st.pruned_label}")
    print(f"  removed by degree: {st.pruned_degree}")
    print(f"  removed by index:  {st.pruned_cni}")
    print(f"  removed per iteration: {st.per_iteration}")
    print(f"  survivors: {len(state.survivors())}")

    results = {}
    for mode in ("none", "label-degree", "nlf-mnd", "cni"):
        cs, _ = candidates_for_mode(g, q, mode)
        embs = set(enumerate_embeddings(g, q, cs))
        results[mode] = embs
        print(f"{mode:>13}: candidates {cs.sizes()} -> {len(embs)} embeddings")
    assert len({frozenset(e) for e in results.values()}) == 1

    first = next(enumerate_embeddings(g, q, cs, SearchConfig(embedding_limit=1)))
    print("\none embedding:", {f"u{u}": v for u, v in enumerate(first)})


if __name__ == "__main__":
    main()
