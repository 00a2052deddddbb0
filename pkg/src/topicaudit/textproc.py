"""Deterministic text processing: tokenization, n-gram tables, c-TF-IDF.

Everything in this module is a pure function of its inputs.  Repeated calls
(and calls in different processes) produce identical results, which is what
lets run evaluation be replayed and compared byte-for-byte.
"""

from __future__ import annotations

import json
import logging
import math
import re
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, NamedTuple

from .errors import ConfigError, FormatError
from .interchange import Corpus, TopicRecord
from .stemmer import porter_stem

logger = logging.getLogger(__name__)

# Alphanumeric runs of length >= 2; single characters are never tokens.
_TOKEN_RE = re.compile(r"[A-Za-z0-9]{2,}")


@dataclass(frozen=True)
class TokenizerConfig:
    """Settings for tokenization and n-gram extraction.

    min_count discards n-grams seen fewer than that many times corpus-wide;
    the default of 2 drops hapaxes, which only add noise to frequency-based
    selection.
    """

    lowercase: bool = True
    ngram_range: tuple[int, int] = (1, 2)
    min_count: int = 2
    stopwords: frozenset[str] = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        lo, hi = self.ngram_range
        if not (1 <= lo <= hi <= 3):
            raise ConfigError(f"ngram_range must satisfy 1 <= lo <= hi <= 3, got {self.ngram_range}")
        if self.min_count < 1:
            raise ConfigError(f"min_count must be >= 1, got {self.min_count}")
        if not isinstance(self.stopwords, frozenset):
            object.__setattr__(self, "stopwords", frozenset(self.stopwords))

    def to_json_dict(self) -> dict:
        return {
            "lowercase": self.lowercase,
            "ngram_range": list(self.ngram_range),
            "min_count": self.min_count,
            "stopwords": sorted(self.stopwords),
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "TokenizerConfig":
        return cls(
            lowercase=bool(data.get("lowercase", True)),
            ngram_range=tuple(data.get("ngram_range", (1, 2))),
            min_count=int(data.get("min_count", 2)),
            stopwords=frozenset(data.get("stopwords", ())),
        )


class NgramEntry(NamedTuple):
    count: int        # total occurrences across the corpus
    doc_count: int    # number of sentences containing the n-gram


@dataclass
class NgramTable:
    """Corpus-wide n-gram frequency table (min_count already applied)."""

    corpus_id: str
    config: TokenizerConfig
    entries: dict[str, NgramEntry]
    total_ngram_instances: int

    def top_unigrams(self, k: int) -> list[str]:
        """The k most frequent single-word entries (count desc, then lexicographic)."""
        unigrams = [g for g in self.entries if " " not in g]
        unigrams.sort(key=lambda g: (-self.entries[g].count, g))
        return unigrams[:k]

    def top_multiword(self, k: int) -> list[str]:
        """The k most frequent multi-word entries (count desc, then lexicographic)."""
        multi = [g for g in self.entries if " " in g]
        multi.sort(key=lambda g: (-self.entries[g].count, g))
        return multi[:k]

    def to_json_dict(self) -> dict:
        return {
            "corpus_id": self.corpus_id,
            "config": self.config.to_json_dict(),
            "entries": {g: [e.count, e.doc_count] for g, e in sorted(self.entries.items())},
            "total_ngram_instances": self.total_ngram_instances,
        }


def save_table(table: NgramTable, path: str | Path) -> None:
    text = json.dumps(table.to_json_dict(), ensure_ascii=False, separators=(",", ":")) + "\n"
    Path(path).write_text(text, encoding="utf-8")


def load_table(path: str | Path) -> NgramTable:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: not valid JSON at line {exc.lineno} col {exc.colno}") from exc
    try:
        entries = {g: NgramEntry(int(c), int(d)) for g, (c, d) in data["entries"].items()}
        return NgramTable(
            corpus_id=str(data["corpus_id"]),
            config=TokenizerConfig.from_json_dict(data["config"]),
            entries=entries,
            total_ngram_instances=int(data["total_ngram_instances"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"{path}: malformed n-gram table: {exc}") from exc


def tokenize(text: str, config: TokenizerConfig) -> list[str]:
    """Split text into tokens: alphanumeric runs of length >= 2, stopwords removed."""
    if config.lowercase:
        text = text.lower()
    tokens = _TOKEN_RE.findall(text)
    if config.stopwords:
        tokens = [t for t in tokens if t not in config.stopwords]
    return tokens


def _sentence_ngrams(tokens: list[str], lo: int, hi: int) -> Iterable[str]:
    n_tokens = len(tokens)
    for n in range(lo, hi + 1):
        for i in range(n_tokens - n + 1):
            yield " ".join(tokens[i : i + n])


def extract_ngrams(corpus: Corpus, config: TokenizerConfig) -> NgramTable:
    """Count every within-sentence n-gram in the configured range.

    N-grams never cross sentence boundaries.  Entries below min_count are
    dropped; total_ngram_instances sums the counts that remain.
    """
    lo, hi = config.ngram_range
    counts: Counter[str] = Counter()
    doc_counts: Counter[str] = Counter()
    for sentence in corpus.sentences:
        tokens = tokenize(sentence.text, config)
        seen: set[str] = set()
        for gram in _sentence_ngrams(tokens, lo, hi):
            counts[gram] += 1
            seen.add(gram)
        for gram in seen:
            doc_counts[gram] += 1
    entries = {
        gram: NgramEntry(count, doc_counts[gram])
        for gram, count in counts.items()
        if count >= config.min_count
    }
    total = sum(entry.count for entry in entries.values())
    return NgramTable(
        corpus_id=corpus.corpus_id,
        config=config,
        entries=entries,
        total_ngram_instances=total,
    )


def normalize_ngram(ngram: str) -> str:
    """Lowercase and suffix-stem each token of a space-joined n-gram.

    Tokens containing digits are lowercased but not stemmed; the stemmer is
    defined over alphabetic words only.
    """
    parts = []
    for token in ngram.split():
        token = token.lower()
        parts.append(porter_stem(token) if token.isalpha() else token)
    return " ".join(parts)


def ctfidf(
    run_assignments: list[int],
    corpus: Corpus,
    config: TokenizerConfig,
    top_n: int = 10,
) -> list[TopicRecord]:
    """Score n-grams per topic with class-based TF-IDF.

    score(t, c) = tf(t, c) * log(1 + A / tf(t)) where tf(t, c) counts t in
    the concatenated sentences of topic c, tf(t) is the corpus-wide count,
    and A is the mean (post-stopword) token count per topic.  Only n-grams
    whose corpus count reaches config.min_count are candidates.

    Returns one TopicRecord per non-negative topic id, ascending by id.
    A topic whose sentences yield no tokens is emitted with an empty n-gram
    list and a warning.
    """
    if len(run_assignments) != len(corpus.sentences):
        raise ConfigError(
            f"assignments length {len(run_assignments)} != corpus size {len(corpus.sentences)}"
        )
    lo, hi = config.ngram_range

    tokenized = [tokenize(s.text, config) for s in corpus.sentences]

    corpus_counts: Counter[str] = Counter()
    for tokens in tokenized:
        corpus_counts.update(_sentence_ngrams(tokens, lo, hi))

    topic_ids = sorted({a for a in run_assignments if a >= 0})
    class_counts: dict[int, Counter[str]] = {c: Counter() for c in topic_ids}
    class_tokens: dict[int, int] = {c: 0 for c in topic_ids}
    class_sizes: dict[int, int] = {c: 0 for c in topic_ids}
    for tokens, topic in zip(tokenized, run_assignments):
        if topic < 0:
            continue
        class_counts[topic].update(_sentence_ngrams(tokens, lo, hi))
        class_tokens[topic] += len(tokens)
        class_sizes[topic] += 1

    if not topic_ids:
        return []
    mean_tokens = sum(class_tokens.values()) / len(topic_ids)

    records = []
    for topic in topic_ids:
        scored = [
            (gram, tf_tc * math.log(1.0 + mean_tokens / corpus_counts[gram]))
            for gram, tf_tc in class_counts[topic].items()
            if corpus_counts[gram] >= config.min_count
        ]
        if not scored:
            logger.warning("topic %d has no scorable n-grams after tokenization", topic)
        scored.sort(key=lambda pair: (-pair[1], pair[0]))
        records.append(
            TopicRecord(topic_id=topic, size=class_sizes[topic], ngrams=scored[:top_n])
        )
    return records
