"""Exact color-refinement signatures over nodes and node tuples.

Node refinement replaces each color by a digest of the pair (own color,
sorted multiset of neighbor colors) and stops once the induced node
partition repeats. Tuple refinement for k in {2, 3} colors every k-tuple
of nodes, starting from its atomic type (the k x k equality pattern, the
k x k adjacency pattern, and the k quantized feature rows) and refining
with, for each position i, the sorted multiset of colors of the tuples
obtained by substituting every node into position i.

All colors are 128-bit BLAKE2b digests with fixed constants, so the same
graph yields the same signature on every platform and in every process.
The signature of a graph is the multiset of final colors; two graphs are
distinguished exactly when those multisets differ.
"""

from __future__ import annotations

import hashlib
from collections import Counter
from dataclasses import dataclass
from itertools import product

import numpy as np

from .errors import ContractError, ResourceLimitError
from .graphs import Graph
from .quant import quantize_matrix, quantized_row_bytes

_PERSON = b"isobench.wl"
_INIT, _REFINE, _FIBER, _HIST = b"\x00", b"\x01", b"\x02", b"\x03"

DEFAULT_EPS = 1e-6
DEFAULT_TUPLE_BUDGET = 20_000_000

ColorKey = bytes  # 16-byte digest


def _digest(payload: bytes) -> ColorKey:
    return hashlib.blake2b(payload, digest_size=16, person=_PERSON).digest()


@dataclass(frozen=True)
class QuantizedFeatures:
    """Integer grid indices of a feature matrix at granularity eps."""

    grid: np.ndarray
    eps: float

    def row_key(self, v: int) -> bytes:
        return quantized_row_bytes(self.grid[v])


def quantize_features(g: Graph, eps: float = DEFAULT_EPS) -> QuantizedFeatures:
    grid = quantize_matrix(g.features, eps)
    grid.setflags(write=False)
    return QuantizedFeatures(grid, eps)


@dataclass(frozen=True)
class WLSignature:
    """Stable refinement outcome for one graph.

    histogram maps each final color (hex) to its multiplicity; digest is
    a pure function of the histogram. rounds counts refinement passes
    until the partition repeated.
    """

    variant: str
    eps: float
    rounds: int
    histogram: tuple[tuple[str, int], ...]
    digest: str

    @property
    def histogram_size(self) -> int:
        return sum(count for _, count in self.histogram)


def _finish(variant: str, eps: float, rounds: int, colors: list[ColorKey]) -> WLSignature:
    counts = Counter(colors)
    histogram = tuple(sorted((c.hex(), k) for c, k in counts.items()))
    acc = hashlib.blake2b(_HIST, digest_size=16, person=_PERSON)
    for hexcolor, count in histogram:
        acc.update(bytes.fromhex(hexcolor))
        acc.update(count.to_bytes(8, "little"))
    return WLSignature(variant, eps, rounds, histogram, acc.hexdigest())


def wl1_signature(g: Graph, eps: float = DEFAULT_EPS) -> WLSignature:
    """Node color refinement seeded by quantized feature rows."""
    quant = quantize_features(g, eps)
    colors = [_digest(_INIT + quant.row_key(v)) for v in range(g.n)]
    classes = len(set(colors))
    rounds = 0
    for _ in range(g.n):
        new = [
            _digest(_REFINE + colors[v] + b"".join(sorted(colors[u] for u in g.neighbors[v])))
            for v in range(g.n)
        ]
        rounds += 1
        new_classes = len(set(new))
        colors = new
        if new_classes == classes:
            break
        classes = new_classes
    return _finish("1-WL", eps, rounds, colors)


def _atomic_type(g: Graph, nodes: tuple[int, ...], row_keys: list[bytes]) -> ColorKey:
    eq = bytes(1 if a == b else 0 for a in nodes for b in nodes)
    adj = bytes(1 if g.has_edge(a, b) else 0 for a in nodes for b in nodes if a != b)
    feats = b"".join(row_keys[v] for v in nodes)
    return _digest(_INIT + eq + adj + feats)


def wlk_signature(
    g: Graph,
    k: int,
    eps: float = DEFAULT_EPS,
    budget: int = DEFAULT_TUPLE_BUDGET,
) -> WLSignature:
    """Tuple color refinement for k in {2, 3}.

    Each round touches every tuple once per position per substituted
    node, so it costs n**k * k * n tuple-neighbor operations; the call
    is refused up front when that exceeds the budget.
    """
    if k not in (2, 3):
        raise ContractError(f"tuple refinement supports k in {{2, 3}}, got {k}")
    if g.n < 1:
        raise ContractError("tuple refinement needs at least one node")
    n = g.n
    ops_per_round = n**k * k * n
    if ops_per_round > budget:
        raise ResourceLimitError(
            f"tuple refinement needs {ops_per_round} tuple-neighbor operations per round, "
            f"budget is {budget}"
        )

    quant = quantize_features(g, eps)
    row_keys = [quant.row_key(v) for v in range(n)]
    colors = [_atomic_type(g, nodes, row_keys) for nodes in product(range(n), repeat=k)]
    total = n**k
    classes = len(set(colors))
    rounds = 0
    for _ in range(total):
        fiber_maps = []
        for i in range(k):
            stride = n ** (k - 1 - i)
            block = stride * n
            fibers = []
            for high in range(n**i):
                base_high = high * block
                for low in range(stride):
                    base = base_high + low
                    fiber = sorted(colors[base + u * stride] for u in range(n))
                    fibers.append(_digest(_FIBER + b"".join(fiber)))
            fiber_maps.append((stride, block, fibers))
        new = []
        for t in range(total):
            parts = [colors[t]]
            for stride, block, fibers in fiber_maps:
                parts.append(fibers[(t // block) * stride + t % stride])
            new.append(_digest(_REFINE + b"".join(parts)))
        rounds += 1
        new_classes = len(set(new))
        colors = new
        if new_classes == classes:
            break
        classes = new_classes
    return _finish(f"{k}-WL", eps, rounds, colors)


def distinguishes(a: WLSignature, b: WLSignature) -> bool:
    """True when the two signatures certify non-isomorphism."""
    if a.variant != b.variant:
        raise ContractError(f"variant mismatch: {a.variant} vs {b.variant}")
    if a.eps != b.eps:
        raise ContractError(f"granularity mismatch: {a.eps} vs {b.eps}")
    return a.digest != b.digest
