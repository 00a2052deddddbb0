"""Command line for the exporter.

Subcommands::

    corpus   convert a one-sentence-per-line text file to a corpus file
    embed    write an embedding matrix for a corpus
    export   run a topic model n times with sampled parameters and emit run files

Exit codes: 0 success, 1 nothing could be exported / embedding failure,
2 usage error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .embedders import DEFAULT_MODEL
from .formats import write_corpus
from .jobs import ExportJob, ParamGrid, export_embeddings, export_runs

logger = logging.getLogger(__name__)


def _parse_grid(text: str) -> ParamGrid:
    """Parse 'min_cluster_size=5:25,min_topic_size=10:50,n_neighbors=2:15'."""
    ranges = {}
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        try:
            name, bounds = part.split("=")
            lo, hi = bounds.split(":")
            ranges[name.strip()] = (int(lo), int(hi))
        except ValueError as exc:
            raise argparse.ArgumentTypeError(f"bad grid entry {part!r}") from exc
    unknown = set(ranges) - {"min_cluster_size", "min_topic_size", "n_neighbors"}
    if unknown:
        raise argparse.ArgumentTypeError(f"unknown grid parameters: {sorted(unknown)}")
    try:
        return ParamGrid(**ranges)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _cmd_corpus(args: argparse.Namespace) -> int:
    lines = [
        line.strip()
        for line in Path(args.text).read_text(encoding="utf-8").splitlines()
        if line.strip()
    ]
    if not lines:
        print("error: no sentences found", file=sys.stderr)
        return 1
    write_corpus(args.corpus_id, lines, args.out)
    print(f"wrote {args.out} with {len(lines)} sentences")
    return 0


def _cmd_embed(args: argparse.Namespace) -> int:
    try:
        path = export_embeddings(Path(args.corpus), args.model, Path(args.out))
    except RuntimeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {path}")
    return 0


def _cmd_export(args: argparse.Namespace) -> int:
    job = ExportJob(
        corpus_path=Path(args.corpus),
        model=args.model,
        out_dir=Path(args.out),
        n_runs=args.n_runs,
        grid=args.grid or ParamGrid(),
        embedding_model=args.embedding_model,
        embeddings_path=Path(args.embeddings) if args.embeddings else None,
        seed=args.seed,
        min_topics=args.min_topics,
        lda_topics=args.lda_topics,
    )
    emitted = export_runs(job)
    print(f"exported {len(emitted)} of {args.n_runs} runs to {args.out}")
    return 0 if emitted else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="model-export",
        description="Run topic models and export interchange files.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("corpus", help="text file (one sentence per line) to corpus JSON")
    p.add_argument("--text", required=True)
    p.add_argument("--corpus-id", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_corpus)

    p = sub.add_parser("embed", help="write an embedding matrix for a corpus")
    p.add_argument("--corpus", required=True)
    p.add_argument(
        "--model", default=DEFAULT_MODEL,
        help="sentence-transformers model name, or hashNN for the offline hash embedder",
    )
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_embed)

    p = sub.add_parser("export", help="run a topic model with sampled parameters")
    p.add_argument("--corpus", required=True)
    p.add_argument("--model", required=True, choices=("bertopic", "top2vec", "lda"))
    p.add_argument("--n-runs", type=int, default=1)
    p.add_argument("--out", required=True, help="directory for run files")
    p.add_argument(
        "--grid", type=_parse_grid, default=None,
        help="parameter ranges, e.g. min_cluster_size=5:25,n_neighbors=2:15",
    )
    p.add_argument("--embedding-model", default=DEFAULT_MODEL)
    p.add_argument("--embeddings", help="precomputed embedding file (bertopic)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--min-topics", type=int, default=20,
                   help="skip runs that produce fewer topics than this")
    p.add_argument("--lda-topics", type=int, default=20)
    p.set_defaults(func=_cmd_export)
    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    return args.func(args)


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
