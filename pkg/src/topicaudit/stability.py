"""Fuzzy topic-name stability against a lookup of previously seen names.

A topic's name is built from its top n-grams; names from earlier runs
accumulate in a lookup table; the stability score of a new run counts, for
each of its top topic names, how many prior names are within a word error
rate threshold, and sums those counts.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

from . import kernels
from .errors import FormatError, InsufficientTopicsError, UndefinedMetricError
from .interchange import RunRecord, TopicRecord
from .textproc import normalize_ngram

DEFAULT_WER_THRESHOLD = 0.5
DEFAULT_NAME_WORDS = 4
DEFAULT_TOP_K = 20


@dataclass
class LookupEntry:
    freq: int
    first_seen_run: str


@dataclass
class TopicNameLookup:
    """Mapping of normalized topic name -> how often seen, and where first."""

    entries: dict[str, LookupEntry] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.entries)


@dataclass
class StabilityResult:
    run_id: str
    per_topic_matches: list[tuple[int, int]]  # (topic_id, match_count)
    stability_score: int


def word_edit_distance(a: list[str], b: list[str]) -> int:
    """Unit-cost word-level Levenshtein distance (symmetric)."""
    vocab: dict[str, int] = {}
    ids_a = [vocab.setdefault(tok, len(vocab)) for tok in a]
    ids_b = [vocab.setdefault(tok, len(vocab)) for tok in b]
    return kernels.levenshtein_ids(ids_a, ids_b)


def wer(hypothesis: list[str], reference: list[str]) -> float:
    """Word error rate: edit distance / reference length.  May exceed 1."""
    if not reference:
        raise UndefinedMetricError("wer with an empty reference")
    return word_edit_distance(hypothesis, reference) / len(reference)


def topic_name(
    topic: TopicRecord,
    words: int = DEFAULT_NAME_WORDS,
    normalize: Callable[[str], str] = normalize_ngram,
) -> str:
    """Underscore-joined normalized forms of the topic's first n-grams.

    Spaces inside multi-word n-grams become underscores too, so the name
    splits cleanly back into words.
    """
    if not topic.ngrams:
        raise UndefinedMetricError(f"topic {topic.topic_id} has no n-grams to name")
    parts = [
        normalize(gram).replace(" ", "_")
        for gram, _ in topic.ngrams[:words]
    ]
    return "_".join(parts)


def _name_tokens(name: str) -> list[str]:
    return name.split("_")


def stability_score(
    run: RunRecord,
    lookup: TopicNameLookup,
    wer_threshold: float = DEFAULT_WER_THRESHOLD,
    top_k: int = DEFAULT_TOP_K,
    name_words: int = DEFAULT_NAME_WORDS,
) -> StabilityResult:
    """Sum over the top_k topic names of how many lookup names match fuzzily.

    A lookup entry matches when wer(current name, entry) <= wer_threshold;
    the entry is the reference side.  Every qualifying pair counts.
    """
    if wer_threshold < 0:
        raise UndefinedMetricError("wer_threshold must be >= 0")
    if len(run.topics) < top_k:
        raise InsufficientTopicsError(
            f"run {run.run_id}: {len(run.topics)} topics, need {top_k}"
        )
    entry_tokens = [(_name_tokens(name)) for name in lookup.entries]
    per_topic = []
    for topic in run.topics[:top_k]:
        tokens = _name_tokens(topic_name(topic, name_words))
        matches = sum(
            1 for ref in entry_tokens if wer(tokens, ref) <= wer_threshold
        )
        per_topic.append((topic.topic_id, matches))
    return StabilityResult(
        run_id=run.run_id,
        per_topic_matches=per_topic,
        stability_score=sum(m for _, m in per_topic),
    )


def update_lookup(
    lookup: TopicNameLookup,
    run: RunRecord,
    top_k: int = DEFAULT_TOP_K,
    name_words: int = DEFAULT_NAME_WORDS,
) -> TopicNameLookup:
    """Insert or increment the run's top topic names.  Mutates and returns lookup."""
    if len(run.topics) < top_k:
        raise InsufficientTopicsError(
            f"run {run.run_id}: {len(run.topics)} topics, need {top_k}"
        )
    for topic in run.topics[:top_k]:
        name = topic_name(topic, name_words)
        entry = lookup.entries.get(name)
        if entry is None:
            lookup.entries[name] = LookupEntry(freq=1, first_seen_run=run.run_id)
        else:
            entry.freq += 1
    return lookup


def save_lookup(lookup: TopicNameLookup, path: str | Path) -> None:
    data = {
        name: {"freq": entry.freq, "first_seen_run": entry.first_seen_run}
        for name, entry in sorted(lookup.entries.items())
    }
    Path(path).write_text(
        json.dumps(data, ensure_ascii=False, separators=(",", ":")) + "\n",
        encoding="utf-8",
    )


def load_lookup(path: str | Path) -> TopicNameLookup:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: not valid JSON at line {exc.lineno} col {exc.colno}") from exc
    if not isinstance(data, dict):
        raise FormatError(f"{path}: lookup file must be a JSON object")
    entries = {}
    for name, item in data.items():
        try:
            entries[name] = LookupEntry(
                freq=int(item["freq"]), first_seen_run=str(item["first_seen_run"])
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise FormatError(f"{path}: malformed entry for {name!r}: {exc}") from exc
        if entries[name].freq < 1:
            raise FormatError(f"{path}: entry {name!r} has non-positive freq")
    return TopicNameLookup(entries=entries)
