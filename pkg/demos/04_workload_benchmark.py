"""Generate a random-walk workload and compare filter configurations.

Every configuration must report the same embeddings; what differs is how
many candidates the search has to wade through.
"""

from __future__ import annotations

from cnimatch import dataset_stats, generate_queries, run_benchmark
from cnimatch.workload import WorkloadSpec, random_graph


def main() -> None:
    # roughly the shape of a small protein-interaction network
    g = random_graph(3000, 12000, 70, seed=10)
    print("dataset:", dataset_stats(g))

    for mode in ("sparse", "dense"):
        spec = WorkloadSpec(query_size=8, count=10, mode=mode, seed=5)
        qs = generate_queries(g, spec)
        report = run_benchmark(g, qs, configs=("none", "label-degree", "nlf-mnd", "cni", "cni+qhop"))
        print(f"\n{mode} queries, size 8:")
        print(f"  {'config':>12} {'mean cands':>11} {'mean ms':>8} {'embeddings':>10}")
        for name, agg in report.aggregates().items():
            print(f"  {name:>12} {agg['mean_candidates']:>11.1f} {agg['mean_elapsed_ms']:>8.2f} "
                  f"{agg['total_embeddings']:>10}")


if __name__ == "__main__":
    main()
