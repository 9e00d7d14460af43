"""Pair-corpus evaluation of embedder expressivity.

Each labeled pair holds two graphs and the ground truth of whether they
are isomorphic. A run transforms every graph, embeds it, groups the
embeddings into equivalence classes, and calls a pair "isomorphic" when
both members land in the same class. Three numbers summarize a run:

ecc  the number of equivalence classes over all evaluated graphs
fp   isomorphic pairs that were split (the embedder invented a
     difference that is not there)
fn   non-isomorphic pairs that were merged (a real difference was
     missed)

Refinement signatures give exact classes by digest equality. Model
embeddings are clustered by single linkage: two embeddings join the
same class when some chain of embeddings connects them with max-norm
steps of at most eps. Pairs whose transform or embedding raises are
excluded and counted, never silently dropped.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import ContractError, IsobenchError
from .graphs import Graph, Permutation, apply_permutation, are_isomorphic
from .models import forward, init_model
from .transforms import METHOD_LABELS, TransformSpec, apply_transform
from .wl import DEFAULT_EPS, DEFAULT_TUPLE_BUDGET, wl1_signature, wlk_signature

EMBEDDERS = ("wl1", "wl2", "wl3", "gin", "pna", "ds")
MODEL_EMBEDDERS = ("gin", "pna", "ds")

DEFAULT_CLUSTER_EPS = 1e-5
VERIFY_MAX_NODES = 16

CSV_HEADER = "method,embedder,ecc,fn,fp,pairs,excluded,seconds"


@dataclass(frozen=True)
class LabeledPair:
    left: Graph
    right: Graph
    isomorphic: bool
    origin: str = "unlabeled"
    verified: bool = False


@dataclass(frozen=True)
class PairDataset:
    pairs: tuple[LabeledPair, ...]
    seed: int | None = None

    @property
    def graphs(self) -> tuple[Graph, ...]:
        out = []
        for pair in self.pairs:
            out.append(pair.left)
            out.append(pair.right)
        return tuple(out)

    @property
    def unverified_count(self) -> int:
        return sum(1 for p in self.pairs if not p.verified)


def verify_pair_labels(pairs: Sequence[LabeledPair]) -> tuple[LabeledPair, ...]:
    """Re-check ground truth exactly for pairs small enough to afford it.

    Pairs with more than VERIFY_MAX_NODES nodes keep their label and stay
    flagged unverified. A verified contradiction raises.
    """
    from .errors import CorpusIntegrityError

    out = []
    for pair in pairs:
        if max(pair.left.n, pair.right.n) <= VERIFY_MAX_NODES:
            verdict = are_isomorphic(pair.left, pair.right)
            if verdict.isomorphic != pair.isomorphic:
                raise CorpusIntegrityError(
                    f"pair {pair.origin!r} labeled isomorphic={pair.isomorphic} "
                    f"but the exact test says {verdict.isomorphic}"
                )
            out.append(
                LabeledPair(pair.left, pair.right, pair.isomorphic, pair.origin, True)
            )
        else:
            out.append(pair)
    return tuple(out)


def make_pair_dataset(
    pairs: Sequence[LabeledPair], seed: int | None = None, verify: bool = True
) -> PairDataset:
    checked = verify_pair_labels(pairs) if verify else tuple(pairs)
    return PairDataset(checked, seed)


def augment_with_iso_pairs(
    graphs: Sequence[Graph], count: int, seed: int
) -> PairDataset:
    """Pair `count` sampled graphs with relabeled copies of themselves.

    Sampling is without replacement from a generator seeded with `seed`,
    so the same call always yields the same pairs. Ground truth is true
    by construction.
    """
    if count < 0:
        raise ContractError(f"count must be >= 0, got {count}")
    if count > len(graphs):
        raise ContractError(f"cannot sample {count} graphs from {len(graphs)}")
    for i, g in enumerate(graphs):
        if g.n < 1:
            raise ContractError(f"graph {i} is empty; augmentation needs nonempty graphs")
    rng = np.random.Generator(np.random.PCG64(seed))
    chosen = rng.choice(len(graphs), size=count, replace=False)
    pairs = []
    for idx in chosen:
        g = graphs[int(idx)]
        p = Permutation.random(g.n, rng)
        pairs.append(LabeledPair(g, apply_permutation(g, p), True, "augmented", True))
    return PairDataset(tuple(pairs), seed)


class _UnionFind:
    def __init__(self, size: int):
        self.parent = list(range(size))

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


def cluster_embeddings(vectors: np.ndarray, eps: float) -> list[int]:
    """Single-linkage classes under the max-norm metric at tolerance eps.

    Bit-identical rows are pre-grouped before the pairwise pass; that is
    only an accelerator, membership still comes from the eps linkage.
    """
    vectors = np.asarray(vectors, dtype=np.float64)
    m = vectors.shape[0]
    if m == 0:
        return []
    uniq, inverse = np.unique(vectors, axis=0, return_inverse=True)
    u = uniq.shape[0]
    uf = _UnionFind(u)
    for i in range(u - 1):
        dist = np.max(np.abs(uniq[i + 1 :] - uniq[i]), axis=1)
        for j in np.nonzero(dist <= eps)[0]:
            uf.union(i, int(i + 1 + j))
    labels = []
    relabel: dict[int, int] = {}
    for row in range(m):
        root = uf.find(int(inverse[row]))
        labels.append(relabel.setdefault(root, len(relabel)))
    return labels


def ecc(class_labels: Sequence[int]) -> int:
    """Count of distinct equivalence classes."""
    return len(set(class_labels))


@dataclass(frozen=True)
class ReportRow:
    method: str
    embedder: str
    ecc: int
    fn: int
    fp: int
    pairs: int
    excluded: int
    seconds: float
    origin: str | None = None
    notes: tuple[str, ...] = field(default=())

    @property
    def method_label(self) -> str:
        return METHOD_LABELS.get(self.method, self.method)


GraphEmbedder = Callable[[Graph], "bytes | np.ndarray"]


def _resolve_embedder(
    embedder: str | GraphEmbedder,
    quant_eps: float,
    model_seed: int,
    input_dim: int,
    kwl_budget: int,
) -> tuple[GraphEmbedder, bool]:
    """Returns (callable, exact) where exact means digest equality."""
    if callable(embedder):
        return embedder, True
    if embedder == "wl1":
        return (lambda g: bytes.fromhex(wl1_signature(g, quant_eps).digest)), True
    if embedder in ("wl2", "wl3"):
        k = int(embedder[2])
        return (
            lambda g: bytes.fromhex(wlk_signature(g, k, quant_eps, kwl_budget).digest)
        ), True
    if embedder in MODEL_EMBEDDERS:
        params = init_model(embedder, input_dim, model_seed)
        return (lambda g: forward(params, g)), False
    raise ContractError(f"unknown embedder {embedder!r}; valid: {', '.join(EMBEDDERS)}")


def evaluate_pairs(
    ds: PairDataset,
    spec: TransformSpec,
    embedder: str | GraphEmbedder,
    *,
    cluster_eps: float = DEFAULT_CLUSTER_EPS,
    quant_eps: float = DEFAULT_EPS,
    model_seed: int = 0,
    kwl_budget: int = DEFAULT_TUPLE_BUDGET,
    origin: str | None = None,
) -> ReportRow:
    """Run one (transform, embedder) cell over the dataset.

    A custom callable embedder may return either a bytes key (classes by
    exact equality) or a float vector (classes by eps clustering).
    """
    start = time.perf_counter()
    pairs = ds.pairs if origin is None else tuple(p for p in ds.pairs if p.origin == origin)

    transformed: list[tuple[int, LabeledPair, Graph, Graph]] = []
    notes: list[str] = []
    for index, pair in enumerate(pairs):
        try:
            left = apply_transform(spec, pair.left)
            right = apply_transform(spec, pair.right)
        except IsobenchError as exc:
            notes.append(f"pair {index} ({pair.origin}): {exc}")
            continue
        transformed.append((index, pair, left, right))

    embed_dim = transformed[0][2].d if transformed else 1
    embed, exact = _resolve_embedder(
        embedder if callable(embedder) else str(embedder),
        quant_eps,
        model_seed,
        embed_dim,
        kwl_budget,
    )

    included: list[tuple[LabeledPair, object, object]] = []
    for index, pair, left, right in transformed:
        try:
            emb_left = embed(left)
            emb_right = embed(right)
        except IsobenchError as exc:
            notes.append(f"pair {index} ({pair.origin}): {exc}")
            continue
        included.append((pair, emb_left, emb_right))

    if included and callable(embedder):
        exact = isinstance(included[0][1], (bytes, bytearray))

    if exact:
        table: dict[bytes, int] = {}
        labels = [
            table.setdefault(bytes(e), len(table))
            for _, l, r in included
            for e in (l, r)
        ]
    else:
        if included:
            matrix = np.stack([np.asarray(e) for _, l, r in included for e in (l, r)])
            labels = cluster_embeddings(matrix, cluster_eps)
        else:
            labels = []

    fp = fn = 0
    for slot, (pair, _, _) in enumerate(included):
        same = labels[2 * slot] == labels[2 * slot + 1]
        if pair.isomorphic and not same:
            fp += 1
        if not pair.isomorphic and same:
            fn += 1
    seconds = time.perf_counter() - start
    name = embedder if isinstance(embedder, str) else getattr(embedder, "__name__", "custom")
    return ReportRow(
        method=spec.kind,
        embedder=name,
        ecc=ecc(labels),
        fn=fn,
        fp=fp,
        pairs=len(included),
        excluded=len(pairs) - len(included),
        seconds=seconds,
        origin=origin,
        notes=tuple(notes),
    )


def evaluate_grid(
    ds: PairDataset,
    specs: Sequence[TransformSpec],
    embedders: Sequence[str | GraphEmbedder],
    *,
    cluster_eps: float = DEFAULT_CLUSTER_EPS,
    quant_eps: float = DEFAULT_EPS,
    model_seed: int = 0,
    kwl_budget: int = DEFAULT_TUPLE_BUDGET,
    by_origin: bool = False,
) -> list[ReportRow]:
    origins: list[str | None] = [None]
    if by_origin:
        seen: list[str] = []
        for pair in ds.pairs:
            if pair.origin not in seen:
                seen.append(pair.origin)
        origins = list(seen)
    rows = []
    for spec in specs:
        for embedder in embedders:
            for origin in origins:
                rows.append(
                    evaluate_pairs(
                        ds,
                        spec,
                        embedder,
                        cluster_eps=cluster_eps,
                        quant_eps=quant_eps,
                        model_seed=model_seed,
                        kwl_budget=kwl_budget,
                        origin=origin,
                    )
                )
    return rows


# ---------------------------------------------------------------------------
# rendering

_METHOD_ORDER = {kind: i for i, kind in enumerate(METHOD_LABELS)}
_EMBEDDER_ORDER = {name: i for i, name in enumerate(EMBEDDERS)}


def sort_rows(rows: Sequence[ReportRow]) -> list[ReportRow]:
    return sorted(
        rows,
        key=lambda r: (
            _METHOD_ORDER.get(r.method, len(_METHOD_ORDER)),
            _EMBEDDER_ORDER.get(r.embedder, len(_EMBEDDER_ORDER)),
            r.origin or "",
        ),
    )


def _row_cells(row: ReportRow, with_origin: bool, timing: bool) -> list[str]:
    seconds = f"{row.seconds:.3f}" if timing else "0.000"
    cells = [
        row.method_label,
        row.embedder,
        str(row.ecc),
        str(row.fn),
        str(row.fp),
        str(row.pairs),
        str(row.excluded),
        seconds,
    ]
    if with_origin:
        cells.insert(2, row.origin or "all")
    return cells


def render_csv(
    rows: Sequence[ReportRow],
    meta: dict[str, object] | None = None,
    timing: bool = False,
) -> str:
    rows = sort_rows(rows)
    with_origin = any(r.origin is not None for r in rows)
    header = CSV_HEADER.split(",")
    if with_origin:
        header.insert(2, "origin")
    lines = []
    if meta:
        for key, value in meta.items():
            lines.append(f"# {key}={value}")
    lines.append(",".join(header))
    for row in rows:
        lines.append(",".join(_row_cells(row, with_origin, timing)))
    return "\n".join(lines) + "\n"


def render_markdown(
    rows: Sequence[ReportRow],
    meta: dict[str, object] | None = None,
    timing: bool = False,
) -> str:
    rows = sort_rows(rows)
    with_origin = any(r.origin is not None for r in rows)
    header = CSV_HEADER.split(",")
    if with_origin:
        header.insert(2, "origin")
    table = [header] + [_row_cells(row, with_origin, timing) for row in rows]
    widths = [max(len(r[c]) for r in table) for c in range(len(header))]
    lines = []
    if meta:
        for key, value in meta.items():
            lines.append(f"- {key}: {value}")
        lines.append("")
    lines.append("| " + " | ".join(h.ljust(w) for h, w in zip(table[0], widths)) + " |")
    lines.append("|" + "|".join("-" * (w + 2) for w in widths) + "|")
    for row in table[1:]:
        lines.append("| " + " | ".join(c.ljust(w) for c, w in zip(row, widths)) + " |")
    return "\n".join(lines) + "\n"


def render_jsonl(
    rows: Sequence[ReportRow],
    meta: dict[str, object] | None = None,
    timing: bool = False,
) -> str:
    import json

    rows = sort_rows(rows)
    with_origin = any(r.origin is not None for r in rows)
    lines = []
    if meta:
        lines.append(json.dumps({"meta": meta}, sort_keys=True))
    for row in rows:
        obj: dict[str, object] = {
            "method": row.method_label,
            "embedder": row.embedder,
            "ecc": row.ecc,
            "fn": row.fn,
            "fp": row.fp,
            "pairs": row.pairs,
            "excluded": row.excluded,
            "seconds": round(row.seconds, 3) if timing else 0.0,
        }
        if with_origin:
            obj["origin"] = row.origin or "all"
        lines.append(json.dumps(obj, sort_keys=True))
    return "\n".join(lines) + "\n"


def report_table(
    rows: Sequence[ReportRow],
    fmt: str = "csv",
    meta: dict[str, object] | None = None,
    timing: bool = False,
) -> str:
    if fmt == "csv":
        return render_csv(rows, meta, timing)
    if fmt == "md":
        return render_markdown(rows, meta, timing)
    if fmt == "jsonl":
        return render_jsonl(rows, meta, timing)
    raise ContractError(f"unknown report format {fmt!r}; valid: csv, md, jsonl")
