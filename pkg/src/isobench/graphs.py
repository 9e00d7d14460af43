"""Finite labeled graphs, their file formats, and exact isomorphism.

A Graph is an immutable simple undirected graph on nodes 0..n-1 with a
dense float feature matrix of shape (n, d). Two serializations are
supported:

graph6
    The compact 6-bit printable encoding. A length prefix N(n) is one
    byte chr(n + 63) for n <= 62, otherwise '~' followed by three bytes
    holding n in 18 bits big-endian (accepted up to n = 65535). The
    upper triangle of the adjacency matrix is then emitted column by
    column, cell (i, j) with i < j ordered by (j, i), packed six bits
    per byte most significant bit first, zero padded, each byte offset
    by 63. Features are not representable; parsing yields the all-ones
    n x 1 matrix.

edge list
    Line one is "n d". Each following line with exactly two integer
    tokens is an edge "u v". The first line that does not look like an
    edge starts the feature block, which must then hold exactly n rows
    of d finite decimal reals. Written files always include the feature
    block, and feature values are printed with a decimal point so they
    can never be mistaken for edges.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import ContractError, GraphParseError, ResourceLimitError, UnsupportedSizeError
from .quant import quantize_matrix

GRAPH6_HEADER = ">>graph6<<"
GRAPH6_MAX_NODES = 65535


@dataclass(frozen=True, eq=False)
class Graph:
    """Immutable simple graph with node features.

    edges are stored canonically: each pair as (u, v) with u < v, the
    whole tuple sorted lexicographically. features is a read-only
    float64 array of shape (n, d) with d >= 1; it defaults to all ones.
    """

    n: int
    edges: tuple[tuple[int, int], ...] = ()
    features: np.ndarray | None = None

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 0:
            raise ContractError(f"node count must be a non-negative int, got {self.n!r}")
        seen = set()
        canon = []
        for pair in self.edges:
            u, v = pair
            u, v = int(u), int(v)
            if u == v:
                raise ContractError(f"self-loop at node {u} is not allowed")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ContractError(f"edge {pair!r} out of range for n={self.n}")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise ContractError(f"duplicate edge {key!r}")
            seen.add(key)
            canon.append(key)
        object.__setattr__(self, "edges", tuple(sorted(canon)))
        feats = self.features
        if feats is None:
            feats = np.ones((self.n, 1), dtype=np.float64)
        feats = np.array(feats, dtype=np.float64, copy=True)
        if feats.ndim != 2 or feats.shape[0] != self.n or feats.shape[1] < 1:
            raise ContractError(
                f"features must have shape ({self.n}, d>=1), got {feats.shape}"
            )
        if feats.size and not np.all(np.isfinite(feats)):
            raise ContractError("features must be finite")
        feats.setflags(write=False)
        object.__setattr__(self, "features", feats)

    @property
    def d(self) -> int:
        return int(self.features.shape[1])

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @cached_property
    def neighbors(self) -> tuple[tuple[int, ...], ...]:
        """Neighbor lists in ascending node order."""
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return tuple(tuple(sorted(a)) for a in adj)

    @cached_property
    def degrees(self) -> np.ndarray:
        deg = np.zeros(self.n, dtype=np.int64)
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        deg.setflags(write=False)
        return deg

    @cached_property
    def edge_set(self) -> frozenset[tuple[int, int]]:
        return frozenset(self.edges)

    @cached_property
    def adjacency_matrix(self) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=np.float64)
        for u, v in self.edges:
            a[u, v] = 1.0
            a[v, u] = 1.0
        a.setflags(write=False)
        return a

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self.edge_set

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            self.n == other.n
            and self.edges == other.edges
            and self.features.shape == other.features.shape
            and bool(np.array_equal(self.features, other.features))
        )

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, edges={len(self.edges)}, d={self.d})"


@dataclass(frozen=True)
class Permutation:
    """A bijection of 0..n-1, stored as the image tuple."""

    mapping: tuple[int, ...]

    def __post_init__(self):
        n = len(self.mapping)
        if sorted(self.mapping) != list(range(n)):
            raise ContractError("mapping is not a bijection of 0..n-1")
        object.__setattr__(self, "mapping", tuple(int(x) for x in self.mapping))

    def __len__(self) -> int:
        return len(self.mapping)

    def __call__(self, v: int) -> int:
        return self.mapping[v]

    def inverse(self) -> "Permutation":
        inv = [0] * len(self.mapping)
        for src, dst in enumerate(self.mapping):
            inv[dst] = src
        return Permutation(tuple(inv))

    @staticmethod
    def identity(n: int) -> "Permutation":
        return Permutation(tuple(range(n)))

    @staticmethod
    def random(n: int, rng: np.random.Generator) -> "Permutation":
        return Permutation(tuple(int(x) for x in rng.permutation(n)))


@dataclass(frozen=True)
class IsoVerdict:
    """Result of an exact isomorphism test, with a witness when positive."""

    isomorphic: bool
    witness: Permutation | None = None


def apply_permutation(g: Graph, p: Permutation) -> Graph:
    """Relabel nodes of g by p: node v becomes p(v), features move with it."""
    if len(p) != g.n:
        raise ContractError(f"permutation length {len(p)} does not match n={g.n}")
    mapping = np.asarray(p.mapping, dtype=np.int64)
    edges = tuple((p(u), p(v)) for u, v in g.edges)
    feats = np.empty_like(g.features)
    feats[mapping] = g.features
    return Graph(g.n, edges, feats)


# ---------------------------------------------------------------------------
# graph6


def _strip_graph6_header(text: str) -> str:
    text = text.strip()
    if text.startswith(GRAPH6_HEADER):
        text = text[len(GRAPH6_HEADER):]
    return text


def parse_graph6(text: str) -> Graph:
    """Decode one graph6 string. Features default to the all-ones column."""
    payload = _strip_graph6_header(text)
    if not payload:
        raise GraphParseError("empty graph6 payload", offset=0)
    for i, ch in enumerate(payload):
        if not (63 <= ord(ch) <= 126):
            raise GraphParseError(f"byte {ord(ch)} outside graph6 range 63..126", offset=i)
    data = payload.encode("ascii")
    if data[0] == 126:  # '~' long form
        if len(data) >= 2 and data[1] == 126:
            raise GraphParseError("8-byte node counts exceed the supported 65535", offset=0)
        if len(data) < 4:
            raise GraphParseError("truncated long-form node count", offset=len(data))
        n = ((data[1] - 63) << 12) | ((data[2] - 63) << 6) | (data[3] - 63)
        body_start = 4
    else:
        n = data[0] - 63
        body_start = 1
    if n > GRAPH6_MAX_NODES:
        raise GraphParseError(f"node count {n} exceeds the supported 65535", offset=0)
    bits_needed = n * (n - 1) // 2
    bytes_needed = (bits_needed + 5) // 6
    body = data[body_start:]
    if len(body) < bytes_needed:
        raise GraphParseError(
            f"need {bytes_needed} edge bytes for n={n}, found {len(body)}",
            offset=body_start + len(body),
        )
    if len(body) > bytes_needed:
        raise GraphParseError("trailing data after edge bits", offset=body_start + bytes_needed)
    edges = []
    t = 0
    for v in range(1, n):
        for u in range(v):
            byte = body[t // 6] - 63
            bit = (byte >> (5 - t % 6)) & 1
            if bit:
                edges.append((u, v))
            t += 1
    # Padding bits beyond the triangle must be zero.
    while t < 6 * bytes_needed:
        byte = body[t // 6] - 63
        if (byte >> (5 - t % 6)) & 1:
            raise GraphParseError("non-zero padding bit", offset=body_start + t // 6)
        t += 1
    return Graph(n, tuple(edges))


def write_graph6(g: Graph) -> str:
    """Encode structure only; features are dropped by the format."""
    n = g.n
    if n > GRAPH6_MAX_NODES:
        raise UnsupportedSizeError(f"graph6 output is limited to 65535 nodes, got {n}")
    if n <= 62:
        prefix = chr(n + 63)
    else:
        prefix = "~" + chr(((n >> 12) & 63) + 63) + chr(((n >> 6) & 63) + 63) + chr((n & 63) + 63)
    edge_set = g.edge_set
    bits_needed = n * (n - 1) // 2
    out = []
    acc = 0
    filled = 0
    for v in range(1, n):
        for u in range(v):
            acc = (acc << 1) | (1 if (u, v) in edge_set else 0)
            filled += 1
            if filled == 6:
                out.append(chr(acc + 63))
                acc, filled = 0, 0
    if filled:
        acc <<= 6 - filled
        out.append(chr(acc + 63))
    assert len(out) == (bits_needed + 5) // 6
    return prefix + "".join(out)


# ---------------------------------------------------------------------------
# edge list


def _looks_like_edge(tokens: list[str]) -> bool:
    if len(tokens) != 2:
        return False
    try:
        int(tokens[0])
        int(tokens[1])
    except ValueError:
        return False
    return True


def parse_edge_list(text: str) -> Graph:
    """Parse one edge-list block. Errors carry 1-based line numbers."""
    lines = [(i + 1, ln.strip()) for i, ln in enumerate(text.splitlines())]
    lines = [(no, ln) for no, ln in lines if ln]
    if not lines:
        raise GraphParseError("empty edge-list text", line=1)
    head_no, head = lines[0]
    head_tokens = head.split()
    if len(head_tokens) != 2:
        raise GraphParseError("header must be 'n d'", line=head_no)
    try:
        n, d = int(head_tokens[0]), int(head_tokens[1])
    except ValueError:
        raise GraphParseError("header must hold two integers 'n d'", line=head_no) from None
    if n < 0 or d < 1:
        raise GraphParseError(f"header requires n >= 0 and d >= 1, got n={n} d={d}", line=head_no)
    body = lines[1:]
    split = 0
    while split < len(body) and _looks_like_edge(body[split][1].split()):
        split += 1
    edges: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()
    for no, ln in body[:split]:
        u, v = (int(t) for t in ln.split())
        if u == v:
            raise GraphParseError(f"self-loop at node {u}", line=no)
        if not (0 <= u < n and 0 <= v < n):
            bad = u if not 0 <= u < n else v
            raise GraphParseError(f"index {bad} out of range for n={n}", line=no)
        key = (min(u, v), max(u, v))
        if key in seen:
            raise GraphParseError(f"duplicate edge {key}", line=no)
        seen.add(key)
        edges.append(key)
    feature_lines = body[split:]
    if not feature_lines:
        return Graph(n, tuple(edges), np.ones((n, d), dtype=np.float64))
    if len(feature_lines) != n:
        no = feature_lines[0][0]
        raise GraphParseError(
            f"feature block must hold exactly {n} rows, found {len(feature_lines)}", line=no
        )
    rows = np.empty((n, d), dtype=np.float64)
    for r, (no, ln) in enumerate(feature_lines):
        tokens = ln.split()
        if len(tokens) != d:
            raise GraphParseError(f"expected {d} feature values, found {len(tokens)}", line=no)
        try:
            vals = [float(t) for t in tokens]
        except ValueError:
            raise GraphParseError("feature value is not a real number", line=no) from None
        if not all(np.isfinite(vals)):
            raise GraphParseError("feature value is not finite", line=no)
        rows[r] = vals
    return Graph(n, tuple(edges), rows)


def write_edge_list(g: Graph) -> str:
    """Canonical edge-list text: sorted edges, then all n feature rows."""
    lines = [f"{g.n} {g.d}"]
    for u, v in g.edges:
        lines.append(f"{u} {v}")
    for row in g.features:
        lines.append(" ".join(repr(float(x)) for x in row))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# exact isomorphism


def _refine_joint_partition(
    g: Graph, h: Graph, init_g: list[int], init_h: list[int]
) -> tuple[list[int], list[int]] | None:
    """Refine node labels on both graphs together until stable.

    Returns the stable labelings, or None as soon as the per-graph label
    histograms diverge, which proves non-isomorphism. Independent of the
    hashing in the wl module on purpose: this is a second route to the
    same partition.
    """
    labels_g, labels_h = list(init_g), list(init_h)

    def histograms_match() -> bool:
        from collections import Counter

        return Counter(labels_g) == Counter(labels_h)

    if not histograms_match():
        return None
    classes = len(set(labels_g) | set(labels_h))
    for _ in range(max(g.n, 1)):
        table: dict[tuple, int] = {}

        def relabel(graph: Graph, labels: list[int]) -> list[int]:
            out = []
            for v in range(graph.n):
                key = (labels[v], tuple(sorted(labels[u] for u in graph.neighbors[v])))
                out.append(table.setdefault(key, len(table)))
            return out

        labels_g = relabel(g, labels_g)
        labels_h = relabel(h, labels_h)
        if not histograms_match():
            return None
        new_classes = len(table)
        if new_classes == classes:
            break
        classes = new_classes
    return labels_g, labels_h


def are_isomorphic(
    g: Graph,
    h: Graph,
    *,
    structure_only: bool = False,
    eps: float = 1e-6,
    max_nodes: int = 64,
) -> IsoVerdict:
    """Exact isomorphism by backtracking with color-refinement pruning.

    Features take part in the invariant through their quantized rows
    unless structure_only is set. Candidate targets share the refined
    color of the source node and are tried in ascending index, so the
    returned witness is deterministic.
    """
    if g.n != h.n:
        return IsoVerdict(False)
    if max(g.n, h.n) > max_nodes:
        raise ResourceLimitError(
            f"isomorphism search supports up to {max_nodes} nodes, got {g.n}"
        )
    if g.edge_count != h.edge_count:
        return IsoVerdict(False)
    n = g.n
    if n == 0:
        return IsoVerdict(True, Permutation(()))

    if structure_only:
        init_g = [0] * n
        init_h = [0] * n
    else:
        if g.d != h.d:
            raise ContractError(
                f"feature widths differ ({g.d} vs {h.d}); pass structure_only=True to ignore features"
            )
        qg = quantize_matrix(g.features, eps)
        qh = quantize_matrix(h.features, eps)
        table: dict[bytes, int] = {}
        init_g = [table.setdefault(row.tobytes(), len(table)) for row in qg]
        init_h = [table.setdefault(row.tobytes(), len(table)) for row in qh]

    refined = _refine_joint_partition(g, h, init_g, init_h)
    if refined is None:
        return IsoVerdict(False)
    labels_g, labels_h = refined

    adj_g = g.adjacency_matrix > 0.5
    adj_h = h.adjacency_matrix > 0.5
    candidates = [
        [t for t in range(n) if labels_h[t] == labels_g[s]] for s in range(n)
    ]
    if any(not c for c in candidates):
        return IsoVerdict(False)

    mapping = [-1] * n
    used = [False] * n

    def search(s: int) -> bool:
        if s == n:
            return True
        for t in candidates[s]:
            if used[t]:
                continue
            ok = True
            for s_prev in range(s):
                if adj_g[s, s_prev] != adj_h[t, mapping[s_prev]]:
                    ok = False
                    break
            if not ok:
                continue
            mapping[s] = t
            used[t] = True
            if search(s + 1):
                return True
            mapping[s] = -1
            used[t] = False
        return False

    if search(0):
        return IsoVerdict(True, Permutation(tuple(mapping)))
    return IsoVerdict(False)
