"""Independent reference implementations and shared test strategies.

Everything here is written as plainly as possible, without reusing the
package's internals, so that agreement between a test and the library
means two separate routes reached the same answer.
"""

from __future__ import annotations

import itertools
from collections import Counter, deque

import numpy as np
from hypothesis import strategies as st

from isobench import Graph
from isobench.quant import quantize_matrix


# ---------------------------------------------------------------------------
# hypothesis strategies


@st.composite
def graphs(draw, min_n: int = 0, max_n: int = 8, feature_dims: int = 0):
    """Random small graphs; feature_dims > 0 draws non-trivial features."""
    n = draw(st.integers(min_n, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    mask = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    edges = tuple(p for p, keep in zip(pairs, mask) if keep)
    if feature_dims:
        d = draw(st.integers(1, feature_dims))
        vals = draw(
            st.lists(
                st.floats(-4.0, 4.0, allow_nan=False, allow_infinity=False, width=32),
                min_size=n * d,
                max_size=n * d,
            )
        )
        feats = np.asarray(vals, dtype=np.float64).reshape(n, d)
        return Graph(n, edges, feats)
    return Graph(n, edges)


@st.composite
def permutations_for(draw, n: int):
    return tuple(draw(st.permutations(range(n)))) if n else ()


# ---------------------------------------------------------------------------
# brute-force isomorphism for tiny graphs


def brute_force_isomorphic(g: Graph, h: Graph, eps: float = 1e-6) -> bool:
    if g.n != h.n or len(g.edges) != len(h.edges):
        return False
    if g.d != h.d:
        return False
    qg = quantize_matrix(g.features, eps)
    qh = quantize_matrix(h.features, eps)
    h_edges = set(h.edges)
    for perm in itertools.permutations(range(g.n)):
        if all(
            (min(perm[u], perm[v]), max(perm[u], perm[v])) in h_edges for u, v in g.edges
        ) and all(tuple(qg[v]) == tuple(qh[perm[v]]) for v in range(g.n)):
            return True
    return False


# ---------------------------------------------------------------------------
# betweenness by explicit path counting (not dependency accumulation)


def path_counting_betweenness(g: Graph) -> np.ndarray:
    def bfs(source):
        dist = {source: 0}
        order = [source]
        queue = deque([source])
        while queue:
            v = queue.popleft()
            for u in g.neighbors[v]:
                if u not in dist:
                    dist[u] = dist[v] + 1
                    order.append(u)
                    queue.append(u)
        counts = {v: 0 for v in dist}
        counts[source] = 1
        for v in order:
            for u in g.neighbors[v]:
                if dist.get(u, -1) == dist[v] + 1:
                    counts[u] += counts[v]
        return dist, counts

    per_source = [bfs(s) for s in range(g.n)]
    score = np.zeros(g.n, dtype=np.float64)
    for s in range(g.n):
        dist_s, sigma_s = per_source[s]
        for t in range(s + 1, g.n):
            if t not in dist_s:
                continue
            dist_t, sigma_t = per_source[t]
            total = sigma_s[t]
            for v in range(g.n):
                if v in (s, t) or v not in dist_s or v not in dist_t:
                    continue
                if dist_s[v] + dist_t[v] == dist_s[t]:
                    score[v] += sigma_s[v] * sigma_t[v] / total
    return score


# ---------------------------------------------------------------------------
# naive tuple refinement (shared color table over both graphs)


def naive_tuple_refinement_splits(g: Graph, h: Graph, k: int, eps: float = 1e-6) -> bool:
    """True when k-tuple refinement separates the two graphs."""

    def atomic(graph: Graph):
        q = quantize_matrix(graph.features, eps)
        out = {}
        for tup in itertools.product(range(graph.n), repeat=k):
            eq = tuple(a == b for a in tup for b in tup)
            adj = tuple(
                graph.has_edge(a, b) for a in tup for b in tup if a != b
            )
            feats = tuple(tuple(int(x) for x in q[v]) for v in tup)
            out[tup] = (eq, adj, feats)
        return out

    def intern(raw_g, raw_h):
        table: dict = {}
        cg = {t: table.setdefault(v, len(table)) for t, v in raw_g.items()}
        ch = {t: table.setdefault(v, len(table)) for t, v in raw_h.items()}
        return cg, ch, len(table)

    def refine(graph: Graph, colors):
        new = {}
        for tup in colors:
            subs = []
            for i in range(k):
                sub = tuple(
                    sorted(colors[tup[:i] + (u,) + tup[i + 1 :]] for u in range(graph.n))
                )
                subs.append(sub)
            new[tup] = (colors[tup], tuple(subs))
        return new

    cg, ch, classes = intern(atomic(g), atomic(h))
    for _ in range(g.n**k + h.n**k):
        cg, ch, new_classes = intern(refine(g, cg), refine(h, ch))
        if new_classes == classes:
            break
        classes = new_classes
    return Counter(cg.values()) != Counter(ch.values())


# ---------------------------------------------------------------------------
# canonical form for tiny graphs (exact isomorphism-class key)


def canonical_key(g: Graph) -> bytes:
    """Lexicographically smallest adjacency encoding over all relabelings."""
    best = None
    for perm in itertools.permutations(range(g.n)):
        bits = tuple(
            1 if (min(perm[u], perm[v]), max(perm[u], perm[v])) in g.edge_set else 0
            for u in range(g.n)
            for v in range(u + 1, g.n)
        )
        if best is None or bits < best:
            best = bits
    return bytes([g.n]) + bytes(best or ())


# ---------------------------------------------------------------------------
# spectrum gap check (raw sign conventions are only stable off degeneracies)


def simple_spectrum(g: Graph, gap: float = 1e-8) -> bool:
    """True when all normalized-Laplacian eigenvalues are pairwise distinct."""
    from isobench import normalized_laplacian

    if g.n < 2:
        return True
    vals = np.linalg.eigvalsh(normalized_laplacian(g))
    return bool(np.min(np.diff(vals)) > gap)
