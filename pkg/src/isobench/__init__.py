"""Deterministic testbed for isomorphism-preserving graph transforms
and the expressivity of exact and floating-point graph embedders."""

__version__ = "0.1.0"

from .errors import (
    ContractError,
    ConvergenceError,
    CorpusIntegrityError,
    GraphParseError,
    IsobenchError,
    NumericError,
    ResourceLimitError,
    UnsupportedSizeError,
)
from .graphs import (
    Graph,
    IsoVerdict,
    Permutation,
    apply_permutation,
    are_isomorphic,
    parse_edge_list,
    parse_graph6,
    write_edge_list,
    write_graph6,
)
from .quant import quantize_matrix, quantized_row_bytes
from .centrality import (
    betweenness_centrality,
    closeness_centrality,
    degree_centrality,
    eigenvector_centrality,
)
from .spectral import jacobi_eigh, laplacian_encoding_columns, normalized_laplacian
from .wl import (
    ColorKey,
    QuantizedFeatures,
    WLSignature,
    distinguishes,
    quantize_features,
    wl1_signature,
    wlk_signature,
)
from .transforms import (
    CENTRALITY_KINDS,
    KINDS,
    METHOD_LABELS,
    SIGN_MODES,
    TransformSpec,
    all_method_specs,
    apply_transform,
    centrality_augment,
    distance_encoding,
    extra_node,
    graph_encoding,
    parse_transform_token,
    subgraph_extraction,
    virtual_node,
    with_sign_mode,
)
from .models import (
    ARCHS,
    Embedding,
    MLPParams,
    ModelParams,
    embedding_key,
    forward,
    init_model,
    node_states,
)
from .evaluate import (
    CSV_HEADER,
    DEFAULT_CLUSTER_EPS,
    EMBEDDERS,
    LabeledPair,
    PairDataset,
    ReportRow,
    augment_with_iso_pairs,
    cluster_embeddings,
    ecc,
    evaluate_grid,
    evaluate_pairs,
    make_pair_dataset,
    render_csv,
    render_jsonl,
    render_markdown,
    report_table,
    sort_rows,
    verify_pair_labels,
)
from .corpus import (
    EXPECTATIONS,
    FAMILIES,
    CorpusManifest,
    ManifestEntry,
    PairingWarning,
    cycle,
    complete,
    disjoint_cycles,
    erdos_renyi,
    generate,
    hard_pair_library,
    library_manifest,
    load_dataset,
    pairs_from_graphs,
    path,
    rook4x4,
    shrikhande,
    srg_parameters,
    star,
)

__all__ = [name for name in dir() if not name.startswith("_")]
