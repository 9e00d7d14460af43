"""Graph families, the bundled hard-pair library, and dataset loading.

The hard-pair library holds the desk cases this package is organized
around: same-size pairs that node color refinement cannot separate,
one strongly regular pair that even 3-tuple refinement cannot separate,
and one genuinely isomorphic control pair. Every bundled pair carries
machine-checkable expectations that are re-verified each time the
library is built; a failed expectation raises CorpusIntegrityError
rather than returning questionable data.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ContractError, CorpusIntegrityError, GraphParseError
from .evaluate import LabeledPair, PairDataset, make_pair_dataset
from .graphs import Graph, Permutation, apply_permutation, are_isomorphic, parse_edge_list, parse_graph6
from .wl import wl1_signature, wlk_signature

# Fixed edge list of the 16-node, 6-regular strongly regular graph with
# lambda = mu = 2 that is NOT the 4x4 rook's graph. Embedded as literal
# data; srg_parameters() re-derives (16, 6, 2, 2) from it at build time.
SHRIKHANDE_EDGES: tuple[tuple[int, int], ...] = (
    (0, 1), (0, 3), (0, 4), (0, 5), (0, 12), (0, 15),
    (1, 2), (1, 5), (1, 6), (1, 12), (1, 13),
    (2, 3), (2, 6), (2, 7), (2, 13), (2, 14),
    (3, 4), (3, 7), (3, 14), (3, 15),
    (4, 5), (4, 7), (4, 8), (4, 9),
    (5, 6), (5, 9), (5, 10),
    (6, 7), (6, 10), (6, 11),
    (7, 8), (7, 11),
    (8, 9), (8, 11), (8, 12), (8, 13),
    (9, 10), (9, 13), (9, 14),
    (10, 11), (10, 14), (10, 15),
    (11, 12), (11, 15),
    (12, 13), (12, 15),
    (13, 14),
    (14, 15),
)

FAMILIES = (
    "cycle",
    "path",
    "star",
    "complete",
    "disjoint_cycles",
    "erdos_renyi",
    "rook4x4",
    "shrikhande",
)


def cycle(n: int) -> Graph:
    if n < 3:
        raise ContractError(f"a cycle needs n >= 3, got {n}")
    return Graph(n, tuple((v, (v + 1) % n) for v in range(n)))


def path(n: int) -> Graph:
    if n < 1:
        raise ContractError(f"a path needs n >= 1, got {n}")
    return Graph(n, tuple((v, v + 1) for v in range(n - 1)))


def star(n: int) -> Graph:
    """Center node 0 with n - 1 leaves."""
    if n < 1:
        raise ContractError(f"a star needs n >= 1, got {n}")
    return Graph(n, tuple((0, v) for v in range(1, n)))


def complete(n: int) -> Graph:
    if n < 1:
        raise ContractError(f"a complete graph needs n >= 1, got {n}")
    return Graph(n, tuple((u, v) for u in range(n) for v in range(u + 1, n)))


def disjoint_cycles(sizes: Sequence[int]) -> Graph:
    if not sizes:
        raise ContractError("need at least one cycle size")
    edges = []
    offset = 0
    for size in sizes:
        if size < 3:
            raise ContractError(f"cycle sizes must be >= 3, got {size}")
        edges.extend((offset + v, offset + (v + 1) % size) for v in range(size))
        offset += size
    return Graph(offset, tuple(edges))


def erdos_renyi(n: int, p: float, seed: int) -> Graph:
    """G(n, p) with each pair decided in canonical (u, v) order."""
    if n < 0:
        raise ContractError(f"n must be >= 0, got {n}")
    if not 0.0 <= p <= 1.0:
        raise ContractError(f"p must lie in [0, 1], got {p}")
    rng = np.random.Generator(np.random.PCG64(seed))
    edges = [
        (u, v)
        for u in range(n)
        for v in range(u + 1, n)
        if rng.random() < p
    ]
    return Graph(n, tuple(edges))


def rook4x4() -> Graph:
    """Line graph of K_{4,4}: cells of a 4x4 grid, same row or column."""
    edges = [
        (a, b)
        for a in range(16)
        for b in range(a + 1, 16)
        if a // 4 == b // 4 or a % 4 == b % 4
    ]
    return Graph(16, tuple(edges))


def srg_parameters(g: Graph) -> tuple[int, int, int, int]:
    """(n, degree, lambda, mu) of a strongly regular graph, else error."""
    degs = set(int(x) for x in g.degrees)
    if len(degs) != 1:
        raise CorpusIntegrityError(f"not regular: degrees {sorted(degs)}")
    k = degs.pop()
    lams, mus = set(), set()
    nbrs = [set(a) for a in g.neighbors]
    for u in range(g.n):
        for v in range(u + 1, g.n):
            common = len(nbrs[u] & nbrs[v])
            (lams if g.has_edge(u, v) else mus).add(common)
    if len(lams) != 1 or len(mus) != 1:
        raise CorpusIntegrityError(
            f"not strongly regular: lambda set {sorted(lams)}, mu set {sorted(mus)}"
        )
    return g.n, k, lams.pop(), mus.pop()


def shrikhande() -> Graph:
    g = Graph(16, SHRIKHANDE_EDGES)
    params = srg_parameters(g)
    if params != (16, 6, 2, 2):
        raise CorpusIntegrityError(f"embedded edge list has SRG parameters {params}")
    return g


def generate(family: str, params: dict | None = None, seed: int | None = None) -> Graph:
    """Build one graph by family name; params mirror the family functions."""
    params = dict(params or {})
    if family == "cycle":
        return cycle(params["n"])
    if family == "path":
        return path(params["n"])
    if family == "star":
        return star(params["n"])
    if family == "complete":
        return complete(params["n"])
    if family == "disjoint_cycles":
        return disjoint_cycles(params["sizes"])
    if family == "erdos_renyi":
        use_seed = params.get("seed", seed)
        if use_seed is None:
            raise ContractError("erdos_renyi needs a seed")
        return erdos_renyi(params["n"], params["p"], use_seed)
    if family == "rook4x4":
        return rook4x4()
    if family == "shrikhande":
        return shrikhande()
    raise ContractError(f"unknown family {family!r}; valid: {', '.join(FAMILIES)}")


# ---------------------------------------------------------------------------
# hard-pair library


@dataclass(frozen=True)
class ManifestEntry:
    """One bundled pair plus its machine-checkable expectations."""

    name: str
    left: tuple[str, dict]
    right: tuple[str, dict]
    expect: tuple[str, ...]


@dataclass(frozen=True)
class CorpusManifest:
    entries: tuple[ManifestEntry, ...]

    def to_json(self) -> str:
        return json.dumps(
            [
                {
                    "name": e.name,
                    "left": {"family": e.left[0], "params": e.left[1]},
                    "right": {"family": e.right[0], "params": e.right[1]},
                    "expect": list(e.expect),
                }
                for e in self.entries
            ],
            indent=2,
            sort_keys=True,
        )


_K4_SHUFFLE = Permutation((2, 0, 3, 1))

EXPECTATIONS = ("isomorphic", "non_isomorphic", "wl1_equal", "wl3_equal")


def library_manifest() -> CorpusManifest:
    return CorpusManifest(
        (
            ManifestEntry(
                "c6_vs_2c3",
                ("cycle", {"n": 6}),
                ("disjoint_cycles", {"sizes": [3, 3]}),
                ("non_isomorphic", "wl1_equal"),
            ),
            ManifestEntry(
                "c8_vs_2c4",
                ("cycle", {"n": 8}),
                ("disjoint_cycles", {"sizes": [4, 4]}),
                ("non_isomorphic", "wl1_equal"),
            ),
            ManifestEntry(
                "rook4x4_vs_shrikhande",
                ("rook4x4", {}),
                ("shrikhande", {}),
                ("non_isomorphic", "wl1_equal", "wl3_equal"),
            ),
            ManifestEntry(
                "k4_vs_relabeled_k4",
                ("complete", {"n": 4}),
                ("complete_relabeled", {"n": 4}),
                ("isomorphic",),
            ),
        )
    )


def _build_side(family: str, params: dict) -> Graph:
    if family == "complete_relabeled":
        return apply_permutation(complete(params["n"]), _K4_SHUFFLE)
    return generate(family, params)


def _check_expectation(name: str, expect: str, left: Graph, right: Graph) -> None:
    if expect == "isomorphic":
        ok = are_isomorphic(left, right).isomorphic
    elif expect == "non_isomorphic":
        ok = not are_isomorphic(left, right).isomorphic
    elif expect == "wl1_equal":
        ok = wl1_signature(left).digest == wl1_signature(right).digest
    elif expect == "wl3_equal":
        ok = wlk_signature(left, 3).digest == wlk_signature(right, 3).digest
    else:
        raise CorpusIntegrityError(f"unknown expectation {expect!r} on {name}")
    if not ok:
        raise CorpusIntegrityError(f"pair {name!r} failed expectation {expect!r}")


def hard_pair_library(verify: bool = True) -> PairDataset:
    """The bundled pairs, with expectations re-checked on every build."""
    pairs = []
    for entry in library_manifest().entries:
        left = _build_side(*entry.left)
        right = _build_side(*entry.right)
        if verify:
            for expect in entry.expect:
                _check_expectation(entry.name, expect, left, right)
        pairs.append(
            LabeledPair(left, right, "isomorphic" in entry.expect, entry.name, verify)
        )
    return PairDataset(tuple(pairs), None)


# ---------------------------------------------------------------------------
# dataset files


class PairingWarning(UserWarning):
    """A loaded file holds an odd number of graphs."""


def load_dataset(path: str, fmt: str = "auto") -> list[Graph]:
    """Read an ordered list of graphs from a file.

    graph6 files hold one graph per line; edge-list files hold blocks
    separated by blank lines. Consecutive graphs (0, 1), (2, 3), ... are
    meant to form pairs, and an odd count triggers PairingWarning.
    """
    if fmt == "auto":
        lowered = path.lower()
        if lowered.endswith((".g6", ".graph6")):
            fmt = "graph6"
        elif lowered.endswith((".el", ".edgelist", ".txt")):
            fmt = "edge_list"
        else:
            raise ContractError(
                f"cannot infer format from {path!r}; pass graph6 or edge_list"
            )
    if fmt not in ("graph6", "edge_list"):
        raise ContractError(f"unknown format {fmt!r}; valid: graph6, edge_list")
    with open(path, "r", encoding="ascii") as fh:
        text = fh.read()
    graphs: list[Graph] = []
    if fmt == "graph6":
        for lineno, line in enumerate(text.splitlines(), start=1):
            if not line.strip():
                continue
            try:
                graphs.append(parse_graph6(line))
            except GraphParseError as exc:
                raise GraphParseError(f"{path}:{lineno}: {exc}", line=lineno) from exc
    else:
        block: list[str] = []
        block_start = 1
        for lineno, line in enumerate(text.splitlines() + [""], start=1):
            if line.strip():
                if not block:
                    block_start = lineno
                block.append(line)
                continue
            if block:
                try:
                    graphs.append(parse_edge_list("\n".join(block)))
                except GraphParseError as exc:
                    at = block_start + (exc.line - 1 if exc.line else 0)
                    raise GraphParseError(f"{path}:{at}: {exc.message}", line=at) from exc
                block = []
    if len(graphs) % 2 == 1:
        warnings.warn(
            f"{path} holds {len(graphs)} graphs; the last one cannot be paired",
            PairingWarning,
            stacklevel=2,
        )
    return graphs


def pairs_from_graphs(
    graphs: Sequence[Graph],
    origin: str,
    isomorphic: bool = False,
    verify: bool = True,
) -> PairDataset:
    """Fold an ordered graph list into consecutive labeled pairs."""
    pairs = [
        LabeledPair(graphs[i], graphs[i + 1], isomorphic, origin, False)
        for i in range(0, len(graphs) - 1, 2)
    ]
    return make_pair_dataset(pairs, verify=verify)
