"""Per-run evaluation metrics.

The report for one run bundles: topic-balance scores (gini, gini_lorenz),
the mean c-TF-IDF score of the selected n-grams (nfs), duplicate-instance
rate (nuv), pairwise topic distinctness (puv), NPMI coherence, coverage,
error size and the size of the 20th topic.

All functions are pure; evaluating many runs in parallel is safe.
"""

from __future__ import annotations

import csv
import io
import logging
import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable

from .errors import InsufficientTopicsError, UndefinedMetricError
from .interchange import Corpus, RunRecord
from .textproc import NgramTable, TokenizerConfig, normalize_ngram, tokenize

logger = logging.getLogger(__name__)

_NPMI_EPS = 1e-12

CSV_COLUMNS = (
    "run_id",
    "top_k",
    "ngrams_per_topic",
    "gini",
    "gini_lorenz",
    "nfs",
    "nuv",
    "puv",
    "coherence_npmi",
    "coverage_pct",
    "error_size",
    "topic_20_size",
)

NUMERIC_FIELDS = CSV_COLUMNS[1:]


@dataclass(frozen=True)
class ReportConfig:
    """Knobs for building a full MetricReport.

    coherence_words_per_topic defaults to ngrams_per_topic when unset.
    nfs_corpus_normalized switches the NFS denominator from the number of
    selected n-grams to the corpus-wide n-gram instance total.
    """

    top_k: int = 20
    ngrams_per_topic: int = 10
    coherence_words_per_topic: int | None = None
    tokenizer: TokenizerConfig = field(default_factory=TokenizerConfig)
    nfs_corpus_normalized: bool = False


@dataclass
class MetricReport:
    """The full metric vector for one run."""

    run_id: str
    top_k: int
    ngrams_per_topic: int
    gini: float
    gini_lorenz: float
    nfs: float
    nuv: float
    puv: float
    coherence_npmi: float
    coverage_pct: float
    error_size: int
    topic_20_size: int

    def to_csv_row(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow([_csv_cell(getattr(self, col)) for col in CSV_COLUMNS])
        return buf.getvalue()

    def to_json_dict(self) -> dict:
        return {col: getattr(self, col) for col in CSV_COLUMNS}

    @classmethod
    def from_json_dict(cls, data: dict) -> "MetricReport":
        return cls(**{col: data[col] for col in CSV_COLUMNS})


def _csv_cell(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def csv_header() -> str:
    return ",".join(CSV_COLUMNS) + "\n"


def gini_score(topic_sizes: list[int]) -> float:
    """Concentration complement 1 - sum(p_i^2) over the listed topics.

    Proportions are taken over the listed topics only; outlier mass is a
    separate metric (error_size).  0 for a single topic, approaches
    1 - 1/n for n equally sized topics.
    """
    if not topic_sizes:
        raise UndefinedMetricError("gini_score of an empty topic list")
    total = sum(topic_sizes)
    if total <= 0:
        raise UndefinedMetricError("gini_score needs a positive total size")
    return 1.0 - math.fsum((size / total) ** 2 for size in topic_sizes)


def gini_lorenz(topic_sizes: list[int]) -> float:
    """Classical Lorenz-curve Gini coefficient: mean absolute difference / (2 * mean).

    0 means perfect equality, (n-1)/n is the single-nonzero extreme.
    """
    if not topic_sizes:
        raise UndefinedMetricError("gini_lorenz of an empty topic list")
    n = len(topic_sizes)
    total = sum(topic_sizes)
    if total <= 0:
        raise UndefinedMetricError("gini_lorenz needs a positive total size")
    ordered = sorted(topic_sizes)
    # Identical to sum_i sum_j |x_i - x_j| / (2 n^2 mean), via the sorted form.
    weighted = math.fsum((i + 1) * x for i, x in enumerate(ordered))
    return (2.0 * weighted) / (n * total) - (n + 1) / n


def _select_top(run: RunRecord, top_k: int, ngrams_per_topic: int) -> list[list[tuple[str, float]]]:
    """Top ngrams_per_topic scored n-grams of each of the top_k largest topics."""
    if len(run.topics) < top_k:
        raise InsufficientTopicsError(
            f"run {run.run_id}: {len(run.topics)} topics, need {top_k}"
        )
    selected = []
    for topic in run.topics[:top_k]:
        if len(topic.ngrams) < ngrams_per_topic:
            raise InsufficientTopicsError(
                f"run {run.run_id}: topic {topic.topic_id} has {len(topic.ngrams)} n-grams, "
                f"need {ngrams_per_topic}"
            )
        selected.append(topic.ngrams[:ngrams_per_topic])
    return selected


def nfs(
    run: RunRecord,
    top_k: int = 20,
    ngrams_per_topic: int = 10,
    total_ngram_instances: int | None = None,
) -> float:
    """Mean stored score of the selected n-grams.

    With total_ngram_instances given, the sum of scores is divided by that
    corpus-wide instance count instead of by the number selected.
    """
    selected = _select_top(run, top_k, ngrams_per_topic)
    scores = [score for topic in selected for _, score in topic]
    if total_ngram_instances is not None:
        if total_ngram_instances <= 0:
            raise UndefinedMetricError("corpus-normalized nfs needs a positive instance total")
        return math.fsum(scores) / total_ngram_instances
    return math.fsum(scores) / len(scores)


def nuv(
    run: RunRecord,
    top_k: int = 20,
    ngrams_per_topic: int = 10,
    normalize: Callable[[str], str] = normalize_ngram,
) -> float:
    """Duplicate-instance rate of the selected n-grams after normalization.

    Counts instances (not types): every selected n-gram whose normalized
    form occurs two or more times in the selection contributes one count.
    Pass a different `normalize` (identity, an external lemmatizer) to
    change what counts as the same n-gram.
    """
    selected = _select_top(run, top_k, ngrams_per_topic)
    normalized = [normalize(gram) for topic in selected for gram, _ in topic]
    occurrences = Counter(normalized)
    duplicates = sum(1 for form in normalized if occurrences[form] >= 2)
    return duplicates / len(normalized)


def puv(
    run: RunRecord,
    top_k: int = 20,
    ngrams_per_topic: int = 10,
    normalize: Callable[[str], str] = normalize_ngram,
) -> float:
    """Pairwise distinctness: 1 - mean pairwise overlap of normalized n-gram sets.

    Overlap of a topic pair is |intersection| / ngrams_per_topic; 1.0 means
    every topic pair is disjoint.
    """
    selected = _select_top(run, top_k, ngrams_per_topic)
    sets = [frozenset(normalize(gram) for gram, _ in topic) for topic in selected]
    if len(sets) < 2:
        return 1.0
    overlaps = [
        len(sets[i] & sets[j]) / ngrams_per_topic
        for i in range(len(sets))
        for j in range(i + 1, len(sets))
    ]
    return 1.0 - math.fsum(overlaps) / len(overlaps)


def _npmi(p_i: float, p_j: float, p_joint: float) -> float:
    if p_joint >= 1.0:
        # both words in every sentence: perfect association, the formula's
        # 0/0 limit
        return 1.0
    return math.log((p_joint + _NPMI_EPS) / (p_i * p_j)) / -math.log(p_joint + _NPMI_EPS)


def npmi_coherence(
    run: RunRecord,
    corpus: Corpus,
    config: TokenizerConfig,
    top_k: int = 20,
    words_per_topic: int = 10,
) -> float:
    """Mean normalized pointwise mutual information of topic word pairs.

    Words are the unigram tokens of each selected topic's n-grams, in list
    order, deduplicated, truncated to words_per_topic.  Probabilities are
    sentence-level occurrence rates.  Pairs with a word absent from the
    corpus are skipped; topics with fewer than two distinct words are
    skipped with a warning.
    """
    if len(run.topics) < top_k:
        raise InsufficientTopicsError(
            f"run {run.run_id}: {len(run.topics)} topics, need {top_k}"
        )
    n_sentences = corpus.size
    if n_sentences == 0:
        raise UndefinedMetricError("coherence of an empty corpus")

    occurrence: dict[str, set[int]] = {}
    for sentence in corpus.sentences:
        for token in set(tokenize(sentence.text, config)):
            occurrence.setdefault(token, set()).add(sentence.sentence_id)

    topic_means = []
    for topic in run.topics[:top_k]:
        words: list[str] = []
        for gram, _ in topic.ngrams:
            for token in gram.split():
                if config.lowercase:
                    token = token.lower()
                if token not in words:
                    words.append(token)
        words = words[:words_per_topic]
        if len(words) < 2:
            logger.warning("topic %d has fewer than 2 distinct words; skipped", topic.topic_id)
            continue
        pair_values = []
        for i in range(len(words)):
            set_i = occurrence.get(words[i])
            if not set_i:
                continue
            p_i = len(set_i) / n_sentences
            for j in range(i + 1, len(words)):
                set_j = occurrence.get(words[j])
                if not set_j:
                    continue
                p_j = len(set_j) / n_sentences
                p_joint = len(set_i & set_j) / n_sentences
                pair_values.append(_npmi(p_i, p_j, p_joint))
        if not pair_values:
            logger.warning("topic %d produced no scorable word pairs; skipped", topic.topic_id)
            continue
        topic_means.append(math.fsum(pair_values) / len(pair_values))
    if not topic_means:
        raise UndefinedMetricError("no topic produced a scorable word pair")
    return math.fsum(topic_means) / len(topic_means)


def coverage_stats(run: RunRecord) -> tuple[float, int, int]:
    """(coverage_pct, error_size, topic_20_size) for a run.

    coverage_pct is over the full corpus; topic_20_size is the size of the
    20th-largest topic, 0 when there are fewer than 20.
    """
    n = len(run.assignments)
    if n == 0:
        raise UndefinedMetricError("coverage of a run with no assignments")
    error_size = run.error_size
    coverage_pct = 100.0 * (n - error_size) / n
    topic_20_size = run.topics[19].size if len(run.topics) >= 20 else 0
    return coverage_pct, error_size, topic_20_size


def metric_report(
    run: RunRecord,
    corpus: Corpus,
    table: NgramTable,
    config: ReportConfig | None = None,
) -> MetricReport:
    """Assemble the full metric vector for one run (deterministic)."""
    cfg = config or ReportConfig()
    if not (run.corpus_id == corpus.corpus_id == table.corpus_id):
        raise UndefinedMetricError(
            f"corpus_id mismatch: run={run.corpus_id!r} corpus={corpus.corpus_id!r} "
            f"table={table.corpus_id!r}"
        )
    coverage_pct, error_size, topic_20_size = coverage_stats(run)
    sizes = run.topic_sizes()
    words = cfg.coherence_words_per_topic or cfg.ngrams_per_topic
    return MetricReport(
        run_id=run.run_id,
        top_k=cfg.top_k,
        ngrams_per_topic=cfg.ngrams_per_topic,
        gini=gini_score(sizes),
        gini_lorenz=gini_lorenz(sizes),
        nfs=nfs(
            run,
            cfg.top_k,
            cfg.ngrams_per_topic,
            total_ngram_instances=table.total_ngram_instances if cfg.nfs_corpus_normalized else None,
        ),
        nuv=nuv(run, cfg.top_k, cfg.ngrams_per_topic),
        puv=puv(run, cfg.top_k, cfg.ngrams_per_topic),
        coherence_npmi=npmi_coherence(run, corpus, cfg.tokenizer, cfg.top_k, words),
        coverage_pct=coverage_pct,
        error_size=error_size,
        topic_20_size=topic_20_size,
    )
