"""Walk through how a vertex's neighborhood becomes one integer.

Run with ``python3 demos/01_neighborhood_index.py``.
"""

from __future__ import annotations

from cnimatch import (
    Graph,
    build_label_dict,
    g_inverse,
    g_tuple,
    h_pairing,
    layered_cni,
    neighbor_label_counts,
    vertex_cni,
)


def main() -> None:
    # five query vertices labelled a, b, b, c, d
    q = Graph.from_edges(
        ["a", "b", "b", "c", "d"],
        [(0, 1), (0, 2), (1, 2), (2, 3), (2, 4)],
    )
    labels = build_label_dict(q)
    print("label numbering:", labels.forward)

    print("\nvertex  label  neighbor counts  index")
    for u in range(len(q)):
        counts = neighbor_label_counts(q, u, labels)
        print(f"  u{u + 1}      {q.label(u)}    {str(counts):15}  {vertex_cni(q, u, labels)}")

    # the index is a sum of multiset coefficients over prefix sums
    counts = neighbor_label_counts(q, 2, labels)
    terms = []
    prefix = 0
    for j, x in enumerate(counts, 1):
        prefix += x
        terms.append(h_pairing(j, prefix))
    print(f"\nu3 spelled out: {' + '.join(map(str, terms))} = {sum(terms)}")

    # the encoding is a bijection, so it can be decoded again
    idx = vertex_cni(q, 2, labels)
    print(f"decoding {idx} with k={labels.k}: {g_inverse(idx, labels.k)}")

    # why it is useful: a bigger neighborhood always gets a bigger index
    print("\nadding one neighbor of each label to u1's counts:")
    base = neighbor_label_counts(q, 0, labels)
    for j in range(labels.k):
        grown = list(base)
        grown[j] += 1
        print(f"  {grown} -> {g_tuple(grown)}  (was {g_tuple(base)})")

    # deeper hops: one index per BFS layer
    lay = layered_cni(q, 0, labels, 2)
    print(f"\nu1 layers up to two hops: {lay.layers}, layer degrees {lay.layer_degrees}")


if __name__ == "__main__":
    main()
