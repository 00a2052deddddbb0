"""Adapters that run one topic model and return raw outputs.

Every adapter has the same shape: it takes the corpus sentences plus
sampled parameters and returns ``(assignments, topics)`` where assignments
is one topic id per sentence (-1 for outliers) and topics maps each
non-negative id to its scored n-grams.  Heavyweight model libraries are
imported lazily so the package works with whichever subset is installed.
"""

from __future__ import annotations

import logging

import numpy as np

logger = logging.getLogger(__name__)

Topics = list[tuple[int, list[tuple[str, float]]]]


def run_lda(
    sentences: list[str],
    seed: int,
    n_topics: int = 20,
    top_n: int = 10,
) -> tuple[list[int], Topics]:
    """Latent Dirichlet Allocation over unigram+bigram counts.

    Every sentence is assigned its argmax topic, so coverage is always
    100%.  Components that end up with no sentences are dropped.
    """
    from sklearn.decomposition import LatentDirichletAllocation
    from sklearn.feature_extraction.text import CountVectorizer

    vectorizer = CountVectorizer(
        token_pattern=r"(?u)[A-Za-z0-9]{2,}",
        lowercase=True,
        ngram_range=(1, 2),
        min_df=2,
    )
    matrix = vectorizer.fit_transform(sentences)
    lda = LatentDirichletAllocation(n_components=n_topics, random_state=seed)
    doc_topic = lda.fit_transform(matrix)
    assignments = [int(t) for t in doc_topic.argmax(axis=1)]

    vocab = vectorizer.get_feature_names_out()
    populated = sorted(set(assignments))
    topics: Topics = []
    for topic_id in populated:
        weights = lda.components_[topic_id]
        order = np.argsort(-weights, kind="stable")[:top_n]
        topics.append(
            (topic_id, [(str(vocab[i]), float(weights[i])) for i in order])
        )
    return assignments, topics


def run_bertopic(
    sentences: list[str],
    seed: int,
    min_cluster_size: int,
    min_topic_size: int,
    n_neighbors: int,
    embeddings: np.ndarray | None = None,
    top_n: int = 10,
) -> tuple[list[int], Topics]:
    """UMAP + HDBSCAN clustering via the bertopic package."""
    from bertopic import BERTopic
    from hdbscan import HDBSCAN
    from umap import UMAP

    umap_model = UMAP(
        n_neighbors=n_neighbors,
        n_components=5,
        min_dist=0.0,
        metric="cosine",
        random_state=seed,
    )
    hdbscan_model = HDBSCAN(
        min_cluster_size=min_cluster_size,
        metric="euclidean",
        cluster_selection_method="eom",
    )
    model = BERTopic(
        umap_model=umap_model,
        hdbscan_model=hdbscan_model,
        min_topic_size=min_topic_size,
        calculate_probabilities=False,
        verbose=False,
    )
    raw, _ = model.fit_transform(sentences, embeddings=embeddings)
    assignments = [int(t) for t in raw]
    topics: Topics = []
    for topic_id in sorted({t for t in assignments if t >= 0}):
        words = model.get_topic(topic_id) or []
        topics.append((topic_id, [(w, float(s)) for w, s in words[:top_n]]))
    return assignments, topics


def run_top2vec(
    sentences: list[str],
    seed: int,
    top_n: int = 10,
) -> tuple[list[int], Topics]:
    """Joint document/word embedding clustering via the top2vec package."""
    from top2vec import Top2Vec

    model = Top2Vec(documents=list(sentences), speed="learn", workers=1, min_count=2)
    assignments = [int(t) for t in model.doc_top]
    topic_words, word_scores, topic_nums = model.get_topics()
    topics: Topics = []
    for words, scores, topic_id in zip(topic_words, word_scores, topic_nums):
        pairs = [(str(w), float(s)) for w, s in zip(words[:top_n], scores[:top_n])]
        topics.append((int(topic_id), pairs))
    populated = {t for t in assignments if t >= 0}
    return assignments, [(tid, ng) for tid, ng in topics if tid in populated]
