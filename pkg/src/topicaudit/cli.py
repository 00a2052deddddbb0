"""Command-line interface.

Subcommands::

    ingest     validate corpus / run / embedding files (optional n-gram table export)
    eval       metric CSV for one run or a directory of runs
    sweep      anchor model threshold sweep: run files + combined metrics CSV
    stability  fuzzy topic-name stability against a lookup file
    stats      Spearman correlation between two stored metric columns
    report     descriptives and unique-value tables from a run store

Exit codes: 0 success, 2 usage/configuration, 3 validation or format error,
4 insufficient topics, 5 I/O error.  Identical inputs always produce
identical stdout.
"""

from __future__ import annotations

import argparse
import csv
import io
import logging
import sys
from pathlib import Path

from . import anchor as anchor_mod
from . import metrics as metrics_mod
from . import stability as stability_mod
from . import stats as stats_mod
from .errors import (
    ConfigError,
    InsufficientTopicsError,
    TopicAuditError,
)
from .interchange import (
    load_corpus,
    load_embeddings,
    load_run,
    save_run,
    validate_run,
)
from .metrics import ReportConfig, csv_header, metric_report
from .rundb import RunStore
from .textproc import TokenizerConfig, extract_ngrams, save_table

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_VALIDATION = 3
EXIT_INSUFFICIENT_TOPICS = 4
EXIT_IO = 5


def _write_output(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _report_config(args: argparse.Namespace) -> ReportConfig:
    return ReportConfig(
        top_k=args.top_k,
        ngrams_per_topic=args.ngrams_per_topic,
        tokenizer=TokenizerConfig(),
    )


def _add_report_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--top-k", type=int, default=20, help="topics per run to evaluate")
    parser.add_argument(
        "--ngrams-per-topic", type=int, default=10, help="scored n-grams per topic to evaluate"
    )


def _csv_text(rows: list[list[str]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerows(rows)
    return buf.getvalue()


# -- subcommands ---------------------------------------------------------------

def _cmd_ingest(args: argparse.Namespace) -> int:
    corpus = load_corpus(args.corpus)
    problems = []
    if args.run:
        run = load_run(args.run)
        report = validate_run(run, corpus)
        problems.extend(report.problems)
    if args.embeddings:
        load_embeddings(args.embeddings, corpus)
    if args.table_out:
        table = extract_ngrams(corpus, TokenizerConfig())
        save_table(table, args.table_out)
    if problems:
        for problem in problems:
            print(f"INVALID: {problem}", file=sys.stderr)
        return EXIT_VALIDATION
    print(f"OK: corpus {corpus.corpus_id!r} with {corpus.size} sentences")
    return EXIT_OK


def _eval_one(run_path: Path, corpus, table, cfg: ReportConfig):
    run = load_run(run_path, corpus)
    return run, metric_report(run, corpus, table, cfg)


def _cmd_eval(args: argparse.Namespace) -> int:
    if not args.run and not args.runs_dir:
        raise ConfigError("eval needs --run or --runs-dir")
    corpus = load_corpus(args.corpus)
    table = extract_ngrams(corpus, TokenizerConfig())
    cfg = _report_config(args)

    run_paths: list[Path]
    if args.runs_dir:
        run_paths = sorted(Path(args.runs_dir).glob("*.json"))
        if not run_paths:
            raise ConfigError(f"no .json run files under {args.runs_dir}")
    else:
        run_paths = [Path(args.run)]

    store = RunStore(args.store) if args.store else None
    lines = [csv_header()]
    for path in run_paths:
        run, report = _eval_one(path, corpus, table, cfg)
        lines.append(report.to_csv_row())
        if store is not None:
            store.append_run(run, report)
    _write_output("".join(lines), args.out)
    return EXIT_OK


def _cmd_sweep(args: argparse.Namespace) -> int:
    corpus = load_corpus(args.corpus)
    embeddings = load_embeddings(args.embeddings, corpus)
    tok_cfg = TokenizerConfig()
    table = extract_ngrams(corpus, tok_cfg)
    anchor_cfg = anchor_mod.AnchorConfig(
        top_ngrams=args.top_ngrams,
        high_value_unigram_cutoff=args.unigram_cutoff,
        threshold_lo=args.threshold_lo,
        threshold_hi=args.threshold_hi,
        threshold_step=args.threshold_step,
    )
    rep_cfg = _report_config(args)
    anchors = anchor_mod.select_anchors(corpus, table, embeddings, anchor_cfg)
    entries = anchor_mod.sweep(
        corpus, embeddings, anchors, anchor_cfg,
        tokenizer_config=tok_cfg, table=table, report_config=rep_cfg,
    )

    if args.out:
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        for entry in entries:
            save_run(entry.run, out_dir / f"{entry.run.run_id}.json")
    store = RunStore(args.store) if args.store else None
    rows = ["threshold," + csv_header()]
    for entry in entries:
        rows.append(
            f"{anchor_mod.format_threshold(entry.threshold)},{entry.report.to_csv_row()}"
        )
        if store is not None:
            store.append_run(entry.run, entry.report)
    text = "".join(rows)
    if args.out:
        (Path(args.out) / "metrics.csv").write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    print(f"swept {len(entries)} thresholds with {len(anchors)} anchors", file=sys.stderr)
    return EXIT_OK


def _cmd_stability(args: argparse.Namespace) -> int:
    run = load_run(args.run)
    lookup_path = Path(args.lookup)
    if lookup_path.exists():
        lookup = stability_mod.load_lookup(lookup_path)
    else:
        lookup = stability_mod.TopicNameLookup()
    result = stability_mod.stability_score(
        run, lookup, wer_threshold=args.wer_threshold, top_k=args.top_k
    )
    rows = [["run_id", "topic_id", "match_count"]]
    for topic_id, count in result.per_topic_matches:
        rows.append([result.run_id, str(topic_id), str(count)])
    rows.append([result.run_id, "TOTAL", str(result.stability_score)])
    _write_output(_csv_text(rows), args.out)
    if args.update:
        stability_mod.update_lookup(lookup, run, top_k=args.top_k)
        stability_mod.save_lookup(lookup, lookup_path)
    return EXIT_OK


def _cmd_stats(args: argparse.Namespace) -> int:
    store = RunStore(args.store, create=False)
    reports = store.query(corpus_id=args.corpus_id, source=args.source)
    result = stats_mod.correlate_runs(reports, args.x_field, args.y_field)
    rows = [
        ["pair", "rho", "p_value", "n", "method"],
        [
            f"{args.x_field}~{args.y_field}",
            repr(result.rho),
            stats_mod.format_p_value(result.p_value),
            str(result.n),
            result.method,
        ],
    ]
    _write_output(_csv_text(rows), args.out)
    return EXIT_OK


def _cmd_report(args: argparse.Namespace) -> int:
    store = RunStore(args.store, create=False)
    reports = store.query()
    if not reports:
        raise ConfigError(f"store {args.store} is empty")
    desc_rows = [["index", "n", "mean", "sd", "min", "max"]]
    for name in metrics_mod.NUMERIC_FIELDS:
        values = [float(getattr(r, name)) for r in reports]
        d = stats_mod.descriptives(values)
        desc_rows.append(
            [name, str(d.n), repr(d.mean), repr(d.sd), repr(d.min), repr(d.max)]
        )
    group_keys = tuple(k.strip() for k in args.group_keys.split(",") if k.strip())
    unique_rows = [["group", "total_values", "unique_values", "unique_pct"]]
    for group, total, unique, pct in store.table6(
        group_keys=group_keys, metric=args.metric, precision=args.precision
    ):
        unique_rows.append(["/".join(group), str(total), str(unique), f"{pct:.0f}%"])

    if args.out:
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        (out_dir / "descriptives.csv").write_text(_csv_text(desc_rows), encoding="utf-8")
        (out_dir / "uniques.csv").write_text(_csv_text(unique_rows), encoding="utf-8")
    else:
        sys.stdout.write(_csv_text(desc_rows))
        sys.stdout.write("\n")
        sys.stdout.write(_csv_text(unique_rows))
    return EXIT_OK


# -- parser ---------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="topicaudit",
        description="Evaluate, store and compare topic-model runs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="validate interchange files")
    p.add_argument("--corpus", required=True, help="corpus JSON file")
    p.add_argument("--run", help="run JSON file to validate against the corpus")
    p.add_argument("--embeddings", help="embedding file to validate against the corpus")
    p.add_argument("--table-out", help="write the corpus n-gram table as JSON")
    p.set_defaults(func=_cmd_ingest)

    p = sub.add_parser("eval", help="metric CSV for runs")
    p.add_argument("--corpus", required=True)
    p.add_argument("--run", help="single run file")
    p.add_argument("--runs-dir", help="directory of *.json run files")
    p.add_argument("--store", help="run store directory to append evaluated runs to")
    p.add_argument("--out", help="write CSV here instead of stdout")
    _add_report_flags(p)
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("sweep", help="anchor-model threshold sweep")
    p.add_argument("--corpus", required=True)
    p.add_argument("--embeddings", required=True)
    p.add_argument("--store", help="append every swept run to this store")
    p.add_argument("--out", help="directory for run files and metrics.csv")
    p.add_argument("--threshold-lo", type=float, default=0.30)
    p.add_argument("--threshold-hi", type=float, default=1.00)
    p.add_argument("--threshold-step", type=float, default=0.01)
    p.add_argument("--top-ngrams", type=int, default=20, help="anchor candidate pool size")
    p.add_argument(
        "--unigram-cutoff", type=int, default=50,
        help="rank cutoff for high-value unigrams excluded from anchor sentences",
    )
    _add_report_flags(p)
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("stability", help="fuzzy topic-name stability")
    p.add_argument("--run", required=True)
    p.add_argument("--lookup", required=True, help="lookup JSON (created on --update if missing)")
    p.add_argument("--wer-threshold", type=float, default=0.5)
    p.add_argument("--top-k", type=int, default=20)
    p.add_argument("--update", action="store_true", help="add this run's names to the lookup")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_stability)

    p = sub.add_parser("stats", help="Spearman correlation between stored metrics")
    p.add_argument("--store", required=True)
    p.add_argument("--x-field", required=True)
    p.add_argument("--y-field", required=True)
    p.add_argument("--corpus-id", help="restrict to one corpus")
    p.add_argument("--source", help="restrict to one run source")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_stats)

    p = sub.add_parser("report", help="descriptives and unique-value tables")
    p.add_argument("--store", required=True)
    p.add_argument("--metric", default="nuv", help="metric column for the unique-value table")
    p.add_argument("--precision", type=int, default=2)
    p.add_argument("--group-keys", default="corpus_id,source")
    p.add_argument("--out", help="directory for descriptives.csv and uniques.csv")
    p.set_defaults(func=_cmd_report)

    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InsufficientTopicsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INSUFFICIENT_TOPICS
    except TopicAuditError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
