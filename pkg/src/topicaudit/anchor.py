"""Deterministic anchor-based topic model.

Instead of clustering first and describing clusters afterwards, this model
starts from the corpus's high-frequency multi-word n-grams, picks one clean
representative sentence per n-gram (the anchor), and assigns every sentence
to the anchor with the highest cosine similarity, provided it clears a
threshold.  Sweeping the threshold trades coverage against cluster
tightness; everything is a pure function of (corpus, embeddings, config).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import ConfigError, EmptyAnchorError, ValidationError
from .interchange import Corpus, EmbeddingMatrix, RunParams, RunRecord
from .metrics import MetricReport, ReportConfig, metric_report
from .textproc import NgramTable, TokenizerConfig, ctfidf, extract_ngrams, tokenize

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AnchorConfig:
    """Anchor selection pool sizes and the threshold sweep grid."""

    top_ngrams: int = 20
    high_value_unigram_cutoff: int = 50
    threshold_lo: float = 0.30
    threshold_hi: float = 1.00
    threshold_step: float = 0.01

    def __post_init__(self) -> None:
        if not (0 < self.threshold_lo <= self.threshold_hi <= 1.0):
            raise ConfigError(
                f"need 0 < lo <= hi <= 1, got lo={self.threshold_lo} hi={self.threshold_hi}"
            )
        if self.threshold_step <= 0:
            raise ConfigError(f"threshold_step must be positive, got {self.threshold_step}")
        if self.top_ngrams < 1 or self.high_value_unigram_cutoff < 0:
            raise ConfigError("pool sizes must be positive")

    def thresholds(self) -> list[float]:
        """lo, lo+step, ... up to hi (inclusive, tolerant of float drift)."""
        span = self.threshold_hi - self.threshold_lo
        count = int(math.floor(span / self.threshold_step + 1e-9)) + 1
        return [round(self.threshold_lo + k * self.threshold_step, 10) for k in range(count)]


class Anchor(NamedTuple):
    ngram: str
    sentence_id: int
    embedding_row: int


@dataclass
class AnchorSet:
    anchors: list[Anchor]

    def __len__(self) -> int:
        return len(self.anchors)


def _count_occurrences(tokens: list[str], gram_tokens: tuple[str, ...]) -> int:
    n = len(gram_tokens)
    if n == 0 or len(tokens) < n:
        return 0
    return sum(1 for i in range(len(tokens) - n + 1) if tuple(tokens[i : i + n]) == gram_tokens)


def select_anchors(
    corpus: Corpus,
    table: NgramTable,
    embeddings: EmbeddingMatrix,
    config: AnchorConfig | None = None,
) -> AnchorSet:
    """Pick one representative sentence per top multi-word n-gram.

    For each of the top_ngrams most frequent multi-word n-grams, the anchor
    is the lowest-id sentence that contains the n-gram exactly once, no
    other pool n-gram at all, and no unigram ranked inside the top
    high_value_unigram_cutoff.  N-grams with no such sentence are skipped
    with a warning.
    """
    cfg = config or AnchorConfig()
    if embeddings.rows != corpus.size:
        raise ValidationError(
            f"embeddings have {embeddings.rows} rows but corpus has {corpus.size} sentences"
        )
    if table.corpus_id != corpus.corpus_id:
        raise ValidationError(
            f"n-gram table is for corpus {table.corpus_id!r}, not {corpus.corpus_id!r}"
        )

    pool = table.top_multiword(cfg.top_ngrams)
    high_value = set(table.top_unigrams(cfg.high_value_unigram_cutoff))
    pool_tokens = {gram: tuple(gram.split()) for gram in pool}

    tokenized = [tokenize(s.text, table.config) for s in corpus.sentences]
    pool_counts_per_sentence = [
        {gram: _count_occurrences(tokens, pool_tokens[gram]) for gram in pool}
        for tokens in tokenized
    ]
    has_high_value = [bool(high_value.intersection(tokens)) for tokens in tokenized]

    anchors = []
    for gram in pool:
        chosen = None
        for sentence, counts_here, polluted in zip(
            corpus.sentences, pool_counts_per_sentence, has_high_value
        ):
            if polluted:
                continue
            if counts_here[gram] != 1:
                continue
            if any(count > 0 for other, count in counts_here.items() if other != gram):
                continue
            chosen = sentence.sentence_id
            break
        if chosen is None:
            logger.warning("no qualifying anchor sentence for n-gram %r; skipped", gram)
            continue
        anchors.append(Anchor(ngram=gram, sentence_id=chosen, embedding_row=chosen))
    if not anchors:
        raise EmptyAnchorError("no anchor sentence satisfied the selection rules")
    return AnchorSet(anchors=anchors)


def _unit_rows(values: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(values, axis=1, keepdims=True)
    return values / norms


def cosine_to_anchors(embeddings: EmbeddingMatrix, anchors: AnchorSet) -> np.ndarray:
    """Dense (sentences x anchors) cosine similarity matrix."""
    unit = _unit_rows(embeddings.values.astype(np.float64))
    anchor_rows = unit[[a.embedding_row for a in anchors.anchors]]
    return unit @ anchor_rows.T


def assign(
    embeddings: EmbeddingMatrix,
    anchors: AnchorSet,
    threshold: float,
    similarities: np.ndarray | None = None,
) -> list[int]:
    """Nearest-anchor assignment with a similarity floor.

    Each sentence goes to the anchor of highest cosine similarity if that
    maximum reaches the threshold, else to -1.  Ties break to the lowest
    anchor index; anchor sentences always belong to their own topic.
    """
    if not anchors.anchors:
        raise EmptyAnchorError("cannot assign against an empty anchor set")
    sims = cosine_to_anchors(embeddings, anchors) if similarities is None else similarities
    best = np.argmax(sims, axis=1)  # first occurrence wins ties
    best_sim = sims[np.arange(sims.shape[0]), best]
    out = np.where(best_sim >= threshold, best, -1).tolist()
    for index, anchor in enumerate(anchors.anchors):
        out[anchor.sentence_id] = index
    return [int(a) for a in out]


def format_threshold(threshold: float) -> str:
    return f"{threshold:.10g}"


def build_run(
    corpus: Corpus,
    embeddings: EmbeddingMatrix,
    anchors: AnchorSet,
    threshold: float,
    tokenizer_config: TokenizerConfig | None = None,
    ngrams_per_topic: int = 10,
    similarities: np.ndarray | None = None,
) -> RunRecord:
    """Assemble a full RunRecord at one threshold (topics scored via c-TF-IDF)."""
    tok_cfg = tokenizer_config or TokenizerConfig()
    assignments = assign(embeddings, anchors, threshold, similarities=similarities)
    topics = ctfidf(assignments, corpus, tok_cfg, top_n=ngrams_per_topic)
    topics.sort(key=lambda t: (-t.size, t.topic_id))
    return RunRecord(
        run_id=f"anchor-{corpus.corpus_id}-t{format_threshold(threshold)}",
        corpus_id=corpus.corpus_id,
        source="anchor",
        params=RunParams(
            threshold=threshold,
            extra={"anchor_ngrams": [a.ngram for a in anchors.anchors]},
        ),
        assignments=assignments,
        topics=topics,
    )


class SweepEntry(NamedTuple):
    threshold: float
    run: RunRecord
    report: MetricReport


def sweep(
    corpus: Corpus,
    embeddings: EmbeddingMatrix,
    anchors: AnchorSet,
    config: AnchorConfig,
    tokenizer_config: TokenizerConfig | None = None,
    table: NgramTable | None = None,
    report_config: ReportConfig | None = None,
) -> list[SweepEntry]:
    """One (threshold, run, report) triple per grid point, ascending.

    The cosine table is computed once and re-gated per threshold, so the
    coverage monotonicity (higher threshold, fewer assigned sentences) is
    exact rather than numeric.
    """
    tok_cfg = tokenizer_config or TokenizerConfig()
    tbl = table if table is not None else extract_ngrams(corpus, tok_cfg)
    rep_cfg = report_config or ReportConfig(tokenizer=tok_cfg)
    sims = cosine_to_anchors(embeddings, anchors)
    entries = []
    for threshold in config.thresholds():
        run = build_run(
            corpus,
            embeddings,
            anchors,
            threshold,
            tokenizer_config=tok_cfg,
            ngrams_per_topic=rep_cfg.ngrams_per_topic,
            similarities=sims,
        )
        report = metric_report(run, corpus, tbl, rep_cfg)
        entries.append(SweepEntry(threshold=threshold, run=run, report=report))
    return entries
