"""Command-line entry points.

Three subcommands:

transform   read graphs, apply one transform, write edge-list blocks
wl          run refinement on consecutive pairs, print verdicts
evaluate    run a (transform x embedder) grid and emit a report

Exit codes: 0 success, 1 configuration or usage error, 2 data error,
3 internal invariant violation. Reports embed their configuration in a
metadata block and are byte-identical across runs for the same
configuration; pass --timing to record real wall times instead of the
deterministic 0.000 placeholder.
"""

from __future__ import annotations

import argparse
import os
import sys
import tempfile
import warnings

from . import __version__
from .corpus import PairingWarning, hard_pair_library, load_dataset, pairs_from_graphs
from .errors import ContractError, CorpusIntegrityError, IsobenchError
from .evaluate import (
    EMBEDDERS,
    LabeledPair,
    PairDataset,
    augment_with_iso_pairs,
    evaluate_grid,
    report_table,
)
from .graphs import write_edge_list
from .transforms import TransformSpec, apply_transform, parse_transform_token
from .wl import wl1_signature, wlk_signature

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_INTERNAL = 3

LIBRARY_INPUT = "hard_pairs"


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="isobench", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_io(p, multiple_inputs=False):
        if multiple_inputs:
            p.add_argument(
                "--input",
                action="append",
                required=True,
                help=f"path to a graph file, or '{LIBRARY_INPUT}' for the bundled pairs; "
                "repeat to tag several files as separate origins",
            )
        else:
            p.add_argument(
                "--input",
                required=True,
                help=f"path to a graph file, or '{LIBRARY_INPUT}' for the bundled pairs",
            )
        p.add_argument(
            "--format",
            default="auto",
            choices=("auto", "graph6", "edge_list"),
            help="input file format (default: infer from the extension)",
        )

    pt = sub.add_parser("transform", help="apply one transform and write edge lists")
    add_io(pt)
    pt.add_argument("--transform", required=True, help="transform token, e.g. degree or graph_encoding:k=4,sign=raw")
    pt.add_argument("--out", required=True, help="output file (edge-list blocks)")

    pw = sub.add_parser("wl", help="refinement verdicts on consecutive pairs")
    add_io(pw)
    pw.add_argument("--k", type=int, default=1, choices=(1, 2, 3), help="refinement arity")
    pw.add_argument("--eps", type=float, default=1e-6, help="feature quantization granularity")
    pw.add_argument("--transform", action="append", default=[], help="transform token applied before refinement; repeatable")

    pe = sub.add_parser("evaluate", help="run a transform x embedder grid")
    add_io(pe, multiple_inputs=True)
    pe.add_argument("--transform", action="append", default=[], help="transform token; repeatable (default: base)")
    pe.add_argument("--embedder", action="append", default=[], choices=EMBEDDERS, help="embedder name; repeatable (default: wl1)")
    pe.add_argument("--eps", type=float, default=1e-5, help="model clustering tolerance")
    pe.add_argument("--quant-eps", type=float, default=1e-6, help="feature quantization granularity")
    pe.add_argument("--seed-data", type=int, default=0, help="seed for augmentation sampling")
    pe.add_argument("--seed-model", type=int, default=0, help="seed for model weights")
    pe.add_argument("--augment", type=int, default=0, help="number of relabeled isomorphic pairs to add")
    pe.add_argument("--emit", default="csv", choices=("csv", "md", "jsonl"), help="report format")
    pe.add_argument("--out", default=None, help="write the report here instead of stdout")
    pe.add_argument("--by-origin", action="store_true", help="one row per input origin")
    pe.add_argument("--timing", action="store_true", help="emit measured wall time (breaks byte-identical output)")
    return parser


def _load_graphs(path: str, fmt: str):
    if path == LIBRARY_INPUT:
        return list(hard_pair_library().graphs)
    # Graphs are processed one by one here, so pairing does not apply.
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", PairingWarning)
        return load_dataset(path, fmt)


def _load_pairs(path: str, fmt: str) -> PairDataset:
    if path == LIBRARY_INPUT:
        return hard_pair_library()
    graphs = load_dataset(path, fmt)
    origin = os.path.splitext(os.path.basename(path))[0]
    try:
        return pairs_from_graphs(graphs, origin, isomorphic=False)
    except CorpusIntegrityError as exc:
        # Label trouble in a user file is bad input, not a broken build.
        raise IsobenchError(f"{path}: {exc}") from exc


def _cmd_transform(args) -> int:
    spec = parse_transform_token(args.transform)
    graphs = _load_graphs(args.input, args.format)
    out_dir = os.path.dirname(os.path.abspath(args.out)) or "."
    fd, tmp_path = tempfile.mkstemp(dir=out_dir, prefix=".isobench-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            for index, g in enumerate(graphs):
                t = apply_transform(spec, g)
                fh.write(write_edge_list(t))
                fh.write("\n")
                print(
                    f"graph {index}: nodes {g.n} -> {t.n} ({t.n - g.n:+d}), "
                    f"edges {g.edge_count} -> {t.edge_count} ({t.edge_count - g.edge_count:+d})"
                )
        os.replace(tmp_path, args.out)
    except BaseException:
        if os.path.exists(tmp_path):
            os.unlink(tmp_path)
        raise
    return EXIT_OK


def _cmd_wl(args) -> int:
    ds = _load_pairs(args.input, args.format)
    specs = [parse_transform_token(t) for t in args.transform]
    distinguished = 0
    evaluated = 0
    for index, pair in enumerate(ds.pairs):
        try:
            left, right = pair.left, pair.right
            for spec in specs:
                left = apply_transform(spec, left)
                right = apply_transform(spec, right)
            if args.k == 1:
                sig_l = wl1_signature(left, args.eps)
                sig_r = wl1_signature(right, args.eps)
            else:
                sig_l = wlk_signature(left, args.k, args.eps)
                sig_r = wlk_signature(right, args.k, args.eps)
        except IsobenchError as exc:
            print(f"pair {index} [{pair.origin}]: error: {exc}")
            continue
        evaluated += 1
        split = sig_l.digest != sig_r.digest
        distinguished += int(split)
        verdict = "distinguished" if split else "not distinguished"
        print(
            f"pair {index} [{pair.origin}]: {verdict} "
            f"(rounds {sig_l.rounds}/{sig_r.rounds})"
        )
    print(f"distinguished {distinguished}/{evaluated}")
    return EXIT_OK


def _cmd_evaluate(args) -> int:
    datasets = []
    for path in args.input:
        datasets.append(_load_pairs(path, args.format))
    pairs: list[LabeledPair] = []
    for ds in datasets:
        pairs.extend(ds.pairs)
    merged = PairDataset(tuple(pairs), args.seed_data)
    if args.augment:
        extra = augment_with_iso_pairs(merged.graphs, args.augment, args.seed_data)
        merged = PairDataset(merged.pairs + extra.pairs, args.seed_data)
    tokens = args.transform or ["base"]
    specs = [parse_transform_token(t) for t in tokens]
    embedders = args.embedder or ["wl1"]
    rows = evaluate_grid(
        merged,
        specs,
        embedders,
        cluster_eps=args.eps,
        quant_eps=args.quant_eps,
        model_seed=args.seed_model,
        by_origin=args.by_origin,
    )
    for row in rows:
        for note in row.notes:
            print(f"note [{row.method}/{row.embedder}]: {note}", file=sys.stderr)
    meta = {
        "tool": f"isobench {__version__}",
        "input": ",".join(args.input),
        "format": args.format,
        "transforms": ",".join(tokens),
        "embedders": ",".join(embedders),
        "eps": args.eps,
        "quant_eps": args.quant_eps,
        "seed_data": args.seed_data,
        "seed_model": args.seed_model,
        "augment": args.augment,
        "pairs": len(merged.pairs),
        "unverified_pairs": merged.unverified_count,
    }
    text = report_table(rows, args.emit, meta, timing=args.timing)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"isobench: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        if args.command == "transform":
            return _cmd_transform(args)
        if args.command == "wl":
            return _cmd_wl(args)
        return _cmd_evaluate(args)
    except ContractError as exc:
        print(f"isobench: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CorpusIntegrityError as exc:
        print(f"isobench: integrity error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except (IsobenchError, OSError) as exc:
        print(f"isobench: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except AssertionError as exc:
        print(f"isobench: internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


def console_main() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console_main()
