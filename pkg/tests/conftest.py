"""Shared builders for synthetic corpora and runs."""

from __future__ import annotations

import pytest

from topicaudit.interchange import (
    Corpus,
    RunParams,
    RunRecord,
    Sentence,
    TopicRecord,
)


def make_corpus(texts: list[str], corpus_id: str = "c1") -> Corpus:
    return Corpus(
        corpus_id=corpus_id,
        sentences=[Sentence(i, text) for i, text in enumerate(texts)],
    )


def make_topics_from_assignments(
    assignments: list[int],
    ngrams: dict[int, list[tuple[str, float]]] | None = None,
) -> list[TopicRecord]:
    """TopicRecords with sizes derived from the assignments, sorted canonically."""
    counts: dict[int, int] = {}
    for a in assignments:
        if a >= 0:
            counts[a] = counts.get(a, 0) + 1
    topics = []
    for topic_id, size in counts.items():
        grams = (ngrams or {}).get(topic_id) or [(f"term{topic_id}a", 2.0), (f"term{topic_id}b", 1.0)]
        topics.append(TopicRecord(topic_id=topic_id, size=size, ngrams=grams))
    topics.sort(key=lambda t: (-t.size, t.topic_id))
    return topics


def make_run(
    assignments: list[int],
    ngrams: dict[int, list[tuple[str, float]]] | None = None,
    run_id: str = "r1",
    corpus_id: str = "c1",
    source: str = "other",
    params: RunParams | None = None,
) -> RunRecord:
    return RunRecord(
        run_id=run_id,
        corpus_id=corpus_id,
        source=source,
        params=params or RunParams(),
        assignments=list(assignments),
        topics=make_topics_from_assignments(assignments, ngrams),
    )


def make_selection_run(
    topic_ngrams: list[list[str]],
    run_id: str = "r1",
    corpus_id: str = "c1",
    scores: dict[tuple[int, int], float] | None = None,
) -> RunRecord:
    """A run whose i-th topic has the given n-gram list (sizes descend)."""
    n = len(topic_ngrams)
    topics = []
    assignments = []
    for topic_id, grams in enumerate(topic_ngrams):
        size = 2 * (n - topic_id)  # strictly decreasing sizes
        assignments.extend([topic_id] * size)
        pairs = []
        for j, gram in enumerate(grams):
            score = (scores or {}).get((topic_id, j), float(len(grams) - j))
            pairs.append((gram, score))
        topics.append(TopicRecord(topic_id=topic_id, size=size, ngrams=pairs))
    return RunRecord(
        run_id=run_id,
        corpus_id=corpus_id,
        source="other",
        params=RunParams(),
        assignments=assignments,
        topics=topics,
    )


@pytest.fixture
def tiny_corpus() -> Corpus:
    return make_corpus(
        [
            "the cat sat on the mat",
            "the dog sat on the rug",
            "cats and dogs are pets",
        ]
    )
