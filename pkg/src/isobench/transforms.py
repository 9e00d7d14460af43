"""Structure- and feature-level graph transformations.

Every transformation maps a graph to a graph and, except for the raw
spectral encoding, commutes with node relabeling: transforming a
permuted graph equals permuting the transformed graph (extended to any
freshly added nodes). Newly created nodes always receive all-ones
feature rows so they blend with the uninformative baseline features.

kinds
    base                  identity
    virtual_node          one extra node adjacent to every existing node
    degree                append degree as a feature column
    closeness             append composite closeness
    betweenness           append shortest-path betweenness
    eigenvector           append principal adjacency eigenvector
    distance_encoding     append per-distance neighborhood counts
    graph_encoding        append k spectral coordinates per node
    subgraph_extraction   append ego-graph node and edge counts
    extra_node            subdivide every edge with a fresh node
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .centrality import (
    betweenness_centrality,
    closeness_centrality,
    degree_centrality,
    eigenvector_centrality,
)
from .errors import ContractError
from .graphs import Graph
from .spectral import laplacian_encoding_columns

KINDS = (
    "base",
    "virtual_node",
    "degree",
    "closeness",
    "betweenness",
    "eigenvector",
    "distance_encoding",
    "graph_encoding",
    "subgraph_extraction",
    "extra_node",
)

CENTRALITY_KINDS = ("degree", "closeness", "betweenness", "eigenvector")

METHOD_LABELS = {
    "base": "Base",
    "virtual_node": "Virtual Node",
    "degree": "Degree",
    "closeness": "Closeness",
    "betweenness": "Betweenness",
    "eigenvector": "Eigenvector",
    "distance_encoding": "Distance Encoding",
    "graph_encoding": "Graph Encoding",
    "subgraph_extraction": "Subgraph Extraction",
    "extra_node": "Extra Node",
}

SIGN_MODES = ("raw", "first_nonzero_positive")


@dataclass(frozen=True)
class TransformSpec:
    """One transformation with its parameters.

    k            spectral coordinates per node (graph_encoding)
    radius       ego-graph radius (subgraph_extraction)
    d_max        largest exact distance counted (distance_encoding);
                 one overflow column follows
    sign_mode    spectral sign convention (graph_encoding)
    power_tol    eigenvector iteration convergence threshold
    power_max_iter  eigenvector iteration cap
    """

    kind: str
    k: int = 4
    radius: int = 2
    d_max: int = 8
    sign_mode: str = "raw"
    power_tol: float = 1e-8
    power_max_iter: int = 1000

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ContractError(
                f"unknown transform kind {self.kind!r}; valid kinds: {', '.join(KINDS)}"
            )
        if self.k < 1:
            raise ContractError(f"k must be >= 1, got {self.k}")
        if self.radius < 1:
            raise ContractError(f"radius must be >= 1, got {self.radius}")
        if self.d_max < 1:
            raise ContractError(f"d_max must be >= 1, got {self.d_max}")
        if self.sign_mode not in SIGN_MODES:
            raise ContractError(
                f"unknown sign mode {self.sign_mode!r}; valid modes: {', '.join(SIGN_MODES)}"
            )
        if self.power_tol <= 0:
            raise ContractError(f"power_tol must be positive, got {self.power_tol}")
        if self.power_max_iter < 1:
            raise ContractError(f"power_max_iter must be >= 1, got {self.power_max_iter}")

    @property
    def label(self) -> str:
        return METHOD_LABELS[self.kind]


_TOKEN_KEYS = {
    "k": ("k", int),
    "radius": ("radius", int),
    "d_max": ("d_max", int),
    "sign": ("sign_mode", str),
    "sign_mode": ("sign_mode", str),
    "power_tol": ("power_tol", float),
    "power_max_iter": ("power_max_iter", int),
}


def parse_transform_token(token: str) -> TransformSpec:
    """Parse "kind" or "kind:key=value,key=value" into a TransformSpec."""
    token = token.strip()
    kind, _, rest = token.partition(":")
    if kind not in KINDS:
        raise ContractError(
            f"bad transform token {token!r}; valid kinds: {', '.join(KINDS)}"
        )
    overrides = {}
    if rest:
        for item in rest.split(","):
            key, sep, value = item.partition("=")
            if not sep or not key or not value:
                raise ContractError(f"bad transform option {item!r} in {token!r}")
            if key not in _TOKEN_KEYS:
                raise ContractError(
                    f"unknown transform option {key!r}; valid options: "
                    f"{', '.join(sorted(set(_TOKEN_KEYS)))}"
                )
            field, cast = _TOKEN_KEYS[key]
            try:
                overrides[field] = cast(value)
            except ValueError:
                raise ContractError(f"bad value {value!r} for option {key!r}") from None
    return TransformSpec(kind=kind, **overrides)


def _append_columns(g: Graph, cols: np.ndarray) -> Graph:
    cols = np.asarray(cols, dtype=np.float64)
    if cols.ndim == 1:
        cols = cols[:, None]
    return Graph(g.n, g.edges, np.hstack([g.features, cols]))


def virtual_node(g: Graph) -> Graph:
    """Add node n adjacent to every existing node, features all ones."""
    hub = g.n
    edges = g.edges + tuple((v, hub) for v in range(g.n))
    feats = np.vstack([g.features, np.ones((1, g.d))])
    return Graph(g.n + 1, edges, feats)


def extra_node(g: Graph) -> Graph:
    """Subdivide every edge; fresh nodes follow canonical edge order."""
    edges = []
    for i, (u, v) in enumerate(g.edges):
        mid = g.n + i
        edges.append((u, mid))
        edges.append((mid, v))
    feats = np.vstack([g.features, np.ones((len(g.edges), g.d))])
    return Graph(g.n + len(g.edges), tuple(edges), feats)


def centrality_augment(g: Graph, measure: str, spec: TransformSpec | None = None) -> Graph:
    """Append one centrality column to the feature matrix."""
    if measure not in CENTRALITY_KINDS:
        raise ContractError(
            f"unknown centrality {measure!r}; valid measures: {', '.join(CENTRALITY_KINDS)}"
        )
    if g.n < 1:
        raise ContractError("centrality augmentation needs at least one node")
    spec = spec or TransformSpec(kind=measure)
    if measure == "degree":
        col = degree_centrality(g)
    elif measure == "closeness":
        col = closeness_centrality(g)
    elif measure == "betweenness":
        col = betweenness_centrality(g)
    else:
        col = eigenvector_centrality(g, tol=spec.power_tol, max_iter=spec.power_max_iter)
    return _append_columns(g, col)


def distance_encoding(g: Graph, spec: TransformSpec) -> Graph:
    """Append counts of nodes at each distance 1..d_max plus an overflow column."""
    if g.n < 1:
        raise ContractError("distance encoding needs at least one node")
    from .centrality import _bfs_distances

    cols = np.zeros((g.n, spec.d_max + 1), dtype=np.float64)
    for v in range(g.n):
        dist = _bfs_distances(g, v)
        for u in range(g.n):
            d = dist[u]
            if d < 1:
                continue
            if d <= spec.d_max:
                cols[v, d - 1] += 1.0
            else:
                cols[v, spec.d_max] += 1.0
    return _append_columns(g, cols)


def graph_encoding(g: Graph, spec: TransformSpec) -> Graph:
    """Append the k smallest non-trivial normalized-Laplacian eigenvectors.

    Columns take sorted eigenvalue positions 1..k and are zero padded
    when fewer exist. In raw sign mode the appended coordinates follow
    the solver verbatim, so they need not commute with node relabeling.
    """
    if g.n < 1:
        raise ContractError("graph encoding needs at least one node")
    return _append_columns(g, laplacian_encoding_columns(g, spec.k, spec.sign_mode))


def subgraph_extraction(g: Graph, spec: TransformSpec) -> Graph:
    """Append ego-graph node and edge counts within the given radius."""
    if g.n < 1:
        raise ContractError("subgraph extraction needs at least one node")
    from .centrality import _bfs_distances

    cols = np.zeros((g.n, 2), dtype=np.float64)
    for v in range(g.n):
        dist = _bfs_distances(g, v)
        inside = {u for u in range(g.n) if 0 <= dist[u] <= spec.radius}
        edge_total = sum(1 for u, w in g.edges if u in inside and w in inside)
        cols[v, 0] = float(len(inside))
        cols[v, 1] = float(edge_total)
    return _append_columns(g, cols)


def apply_transform(spec: TransformSpec, g: Graph) -> Graph:
    if spec.kind == "base":
        return g
    if spec.kind == "virtual_node":
        return virtual_node(g)
    if spec.kind == "extra_node":
        return extra_node(g)
    if spec.kind in CENTRALITY_KINDS:
        return centrality_augment(g, spec.kind, spec)
    if spec.kind == "distance_encoding":
        return distance_encoding(g, spec)
    if spec.kind == "graph_encoding":
        return graph_encoding(g, spec)
    if spec.kind == "subgraph_extraction":
        return subgraph_extraction(g, spec)
    raise ContractError(f"unknown transform kind {spec.kind!r}")


def all_method_specs(sign_mode: str = "raw") -> tuple[TransformSpec, ...]:
    """One spec per kind, in canonical reporting order."""
    return tuple(
        TransformSpec(kind=kind, sign_mode=sign_mode) if kind == "graph_encoding"
        else TransformSpec(kind=kind)
        for kind in KINDS
    )


def with_sign_mode(spec: TransformSpec, sign_mode: str) -> TransformSpec:
    return replace(spec, sign_mode=sign_mode)
