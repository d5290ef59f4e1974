"""Subgraph matching driven by compact neighborhood indexes (CNIs)."""

from .cni import (
    LayeredCni,
    PacketedCni,
    ball_cni,
    cni_log,
    directed_cni,
    edge_labeled_cni,
    g_inverse,
    g_tuple,
    h_pairing,
    layered_cni,
    packeted_cni,
    vertex_cni,
)
from .filtering import (
    CandidateSets,
    FilterState,
    FilterStats,
    VertexSignature,
    build_candidate_sets,
    candidates_for_mode,
    cni_verify,
    ilgf_filter,
    nlf_mnd_verify,
    qhop_verify,
)
from .graph import (
    Graph,
    GraphFormatError,
    LabelDict,
    build_edge_label_dict,
    build_label_dict,
    dumps_graph,
    load_graph,
    neighbor_label_counts,
    read_graph,
    write_graph,
)
from .search import SearchConfig, choose_next_vertex, enumerate_embeddings, is_embedding, neighbor_check
from .stream import EdgeStream, ReducedGraph, parse_stream, stream_filter, stream_stats
from .workload import WorkloadSpec, dataset_stats, generate_queries, run_benchmark

__version__ = "0.1.0"
