"""Node centrality measures used as structural feature augmentations.

Conventions are pinned so that downstream quantized comparisons are
reproducible:

degree       raw neighbor count.
closeness    composite closeness for possibly disconnected graphs:
             ((r - 1) / (n - 1)) * ((r - 1) / total_distance), where r
             counts nodes reachable from v including v itself and
             total_distance sums finite shortest-path lengths from v.
             Isolated nodes (and the n = 1 graph) score 0.
betweenness  shortest-path betweenness, unnormalized, endpoints
             excluded, each unordered pair counted once.
eigenvector  principal adjacency eigenvector. Iterates x <- x + A x
             with Euclidean renormalization from the all-ones start;
             the added identity shift keeps bipartite spectra from
             oscillating while leaving eigenvectors unchanged.
             Converged when successive iterates differ by less than
             tol in max norm, otherwise a ConvergenceError reports the
             final iterate gap.
"""

from __future__ import annotations

from collections import deque

import numpy as np

from .errors import ContractError, ConvergenceError
from .graphs import Graph


def _bfs_distances(g: Graph, source: int) -> np.ndarray:
    dist = np.full(g.n, -1, dtype=np.int64)
    dist[source] = 0
    queue = deque([source])
    while queue:
        v = queue.popleft()
        for u in g.neighbors[v]:
            if dist[u] < 0:
                dist[u] = dist[v] + 1
                queue.append(u)
    return dist


def degree_centrality(g: Graph) -> np.ndarray:
    return g.degrees.astype(np.float64)


def closeness_centrality(g: Graph) -> np.ndarray:
    out = np.zeros(g.n, dtype=np.float64)
    if g.n <= 1:
        return out
    for v in range(g.n):
        dist = _bfs_distances(g, v)
        reachable = dist >= 0
        r = int(reachable.sum())
        total = int(dist[reachable].sum())
        if r <= 1 or total == 0:
            continue
        out[v] = ((r - 1) / (g.n - 1)) * ((r - 1) / total)
    return out


def betweenness_centrality(g: Graph) -> np.ndarray:
    """Brandes accumulation; the final halving makes pairs unordered."""
    score = np.zeros(g.n, dtype=np.float64)
    for s in range(g.n):
        stack: list[int] = []
        preds: list[list[int]] = [[] for _ in range(g.n)]
        sigma = np.zeros(g.n, dtype=np.float64)
        sigma[s] = 1.0
        dist = np.full(g.n, -1, dtype=np.int64)
        dist[s] = 0
        queue = deque([s])
        while queue:
            v = queue.popleft()
            stack.append(v)
            for u in g.neighbors[v]:
                if dist[u] < 0:
                    dist[u] = dist[v] + 1
                    queue.append(u)
                if dist[u] == dist[v] + 1:
                    sigma[u] += sigma[v]
                    preds[u].append(v)
        delta = np.zeros(g.n, dtype=np.float64)
        while stack:
            w = stack.pop()
            for v in preds[w]:
                delta[v] += (sigma[v] / sigma[w]) * (1.0 + delta[w])
            if w != s:
                score[w] += delta[w]
    return score / 2.0


def eigenvector_centrality(
    g: Graph, tol: float = 1e-8, max_iter: int = 1000
) -> np.ndarray:
    if g.n < 1:
        raise ContractError("eigenvector centrality needs at least one node")
    a = g.adjacency_matrix
    x = np.ones(g.n, dtype=np.float64)
    x /= np.linalg.norm(x)
    gap = np.inf
    for _ in range(max_iter):
        y = x + a @ x
        y /= np.linalg.norm(y)
        gap = float(np.max(np.abs(y - x)))
        x = y
        if gap < tol:
            return x
    raise ConvergenceError(
        f"eigenvector iteration still moving by {gap:.3e} after {max_iter} steps"
    )
