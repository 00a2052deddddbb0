"""Tokenization, n-gram extraction, normalization, c-TF-IDF."""

from __future__ import annotations

import math
import random
import re

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import make_corpus
from topicaudit.errors import ConfigError
from topicaudit.stemmer import porter_stem
from topicaudit.textproc import (
    NgramTable,
    TokenizerConfig,
    ctfidf,
    extract_ngrams,
    load_table,
    normalize_ngram,
    save_table,
    tokenize,
)

CFG11 = TokenizerConfig(ngram_range=(1, 1), min_count=1)


def test_tokenize_basic():
    assert tokenize("The cat sat.", TokenizerConfig()) == ["the", "cat", "sat"]


def test_tokenize_empty():
    assert tokenize("", TokenizerConfig()) == []


def test_tokenize_short_tokens_dropped():
    assert tokenize("a I ab 7 42", TokenizerConfig()) == ["ab", "42"]


def test_tokenize_stopwords():
    cfg = TokenizerConfig(stopwords=frozenset({"the"}))
    assert tokenize("The cat sat on the mat", cfg) == ["cat", "sat", "on", "mat"]


def test_tokenize_case_preserved_when_configured():
    cfg = TokenizerConfig(lowercase=False)
    assert tokenize("The CAT", cfg) == ["The", "CAT"]


@given(st.text(max_size=200))
def test_tokenize_idempotent_under_rejoin(text):
    cfg = TokenizerConfig()
    once = tokenize(text, cfg)
    assert tokenize(" ".join(once), cfg) == once


def test_config_rejects_bad_range():
    with pytest.raises(ConfigError):
        TokenizerConfig(ngram_range=(2, 1))
    with pytest.raises(ConfigError):
        TokenizerConfig(ngram_range=(1, 4))


def test_extract_ngrams_repeated_pair():
    # tokens must be length >= 2, so the two-word sentences use "aa"/"bb"
    corpus = make_corpus(["aa bb", "aa bb"])
    table = extract_ngrams(corpus, TokenizerConfig())
    assert {g: e.count for g, e in table.entries.items()} == {"aa": 2, "bb": 2, "aa bb": 2}
    assert table.total_ngram_instances == 6


def test_extract_ngrams_min_count_filters_everything():
    corpus = make_corpus(["aa bb", "cc dd"])
    table = extract_ngrams(corpus, TokenizerConfig())
    assert table.entries == {}
    assert table.total_ngram_instances == 0


def _brute_force_table(texts: list[str], lo: int, hi: int, min_count: int):
    """Independent sliding-window counter over the raw texts."""
    counts: dict[str, int] = {}
    doc_counts: dict[str, int] = {}
    for text in texts:
        tokens = re.findall(r"[A-Za-z0-9]{2,}", text.lower())
        seen = set()
        for n in range(lo, hi + 1):
            for i in range(len(tokens) - n + 1):
                gram = " ".join(tokens[i : i + n])
                counts[gram] = counts.get(gram, 0) + 1
                seen.add(gram)
        for gram in seen:
            doc_counts[gram] = doc_counts.get(gram, 0) + 1
    return {
        gram: (count, doc_counts[gram])
        for gram, count in counts.items()
        if count >= min_count
    }


def test_extract_ngrams_matches_brute_force():
    rng = random.Random(20240917)
    vocab = ["alpha", "beta", "gamma", "delta", "epsilon", "zeta", "eta", "theta"]
    texts = [
        " ".join(rng.choice(vocab) for _ in range(rng.randint(3, 9))) for _ in range(20)
    ]
    cfg = TokenizerConfig(ngram_range=(1, 3), min_count=2)
    table = extract_ngrams(make_corpus(texts), cfg)
    expected = _brute_force_table(texts, 1, 3, 2)
    assert {g: tuple(e) for g, e in table.entries.items()} == expected
    assert table.total_ngram_instances == sum(c for c, _ in expected.values())


def test_extract_ngrams_deterministic():
    corpus = make_corpus(["aa bb cc", "bb cc aa", "cc aa bb"])
    t1 = extract_ngrams(corpus, TokenizerConfig())
    t2 = extract_ngrams(corpus, TokenizerConfig())
    assert t1.entries == t2.entries
    assert t1.to_json_dict() == t2.to_json_dict()


def test_table_invariants_hold():
    rng = random.Random(3)
    texts = [" ".join(rng.choice(["red", "blue", "green"]) for _ in range(6)) for _ in range(12)]
    corpus = make_corpus(texts)
    table = extract_ngrams(corpus, TokenizerConfig())
    for entry in table.entries.values():
        assert entry.doc_count <= entry.count
        assert entry.doc_count <= corpus.size
    assert table.total_ngram_instances == sum(e.count for e in table.entries.values())
    assert sum(e.doc_count for e in table.entries.values()) <= corpus.size * len(table.entries)


def test_table_json_round_trip(tmp_path):
    corpus = make_corpus(["aa bb cc", "aa bb dd", "aa cc dd"])
    table = extract_ngrams(corpus, TokenizerConfig())
    path = tmp_path / "table.json"
    save_table(table, path)
    loaded = load_table(path)
    assert loaded.entries == table.entries
    assert loaded.config == table.config
    assert loaded.total_ngram_instances == table.total_ngram_instances


def test_normalize_ngram_stems():
    assert normalize_ngram("Running") == "run"
    assert normalize_ngram("cat") == "cat"


def test_normalize_ngram_per_token_oracle():
    phrase = "running dogs"
    expected = " ".join(porter_stem(tok) for tok in phrase.split())
    assert normalize_ngram(phrase) == expected == "run dog"


def test_normalize_ngram_keeps_digit_tokens():
    assert normalize_ngram("Model42 Running") == "model42 run"


# Hand-traced through the five-step suffix-stripping algorithm.
PORTER_VECTORS = {
    "caresses": "caress",
    "ponies": "poni",
    "ties": "ti",
    "caress": "caress",
    "cats": "cat",
    "meetings": "meet",
    "agreed": "agre",
    "plastered": "plaster",
    "motoring": "motor",
    "sing": "sing",
    "running": "run",
    "hopping": "hop",
    "falling": "fall",
    "hissing": "hiss",
    "fizzed": "fizz",
    "filing": "file",
    "failing": "fail",
    "happy": "happi",
    "sky": "sky",
    "relational": "relat",
    "rate": "rate",
    "cease": "ceas",
    "controll": "control",
    "roll": "roll",
    "adoption": "adopt",
    "opinion": "opinion",
    "replacement": "replac",
    "adjustment": "adjust",
    "dependent": "depend",
    "as": "as",
    "toy": "toi",
}


@pytest.mark.parametrize("word,expected", sorted(PORTER_VECTORS.items()))
def test_porter_reference_vectors(word, expected):
    assert porter_stem(word) == expected


def test_ctfidf_single_class_reduces_to_corpus_counts():
    texts = ["apple banana apple", "banana apple fruit"]
    corpus = make_corpus(texts)
    records = ctfidf([0, 0], corpus, CFG11, top_n=10)
    assert len(records) == 1
    total_tokens = 6  # one class holds the whole corpus
    expected = {
        "apple": 3 * math.log(1 + total_tokens / 3),
        "banana": 2 * math.log(1 + total_tokens / 2),
        "fruit": 1 * math.log(1 + total_tokens / 1),
    }
    got = dict(records[0].ngrams)
    assert got.keys() == expected.keys()
    for gram, score in expected.items():
        assert got[gram] == pytest.approx(score, abs=1e-12)


def test_ctfidf_disjoint_vocabularies_stay_disjoint():
    corpus = make_corpus(["sun moon sun", "moon sun star", "rock iron rock", "iron rock ore"])
    records = ctfidf([0, 0, 1, 1], corpus, CFG11, top_n=10)
    vocab0 = {g for g, _ in records[0].ngrams}
    vocab1 = {g for g, _ in records[1].ngrams}
    assert vocab0 == {"sun", "moon", "star"}
    assert vocab1 == {"rock", "iron", "ore"}


def test_ctfidf_three_topic_hand_computed():
    corpus = make_corpus(
        [
            "apple banana apple",
            "banana apple fruit",
            "carrot potato carrot",
            "potato carrot soup",
            "stone metal stone",
            "metal stone ore",
        ]
    )
    records = ctfidf([0, 0, 1, 1, 2, 2], corpus, CFG11, top_n=10)
    mean_tokens = 6.0  # 18 tokens over 3 classes
    expected = {
        0: {
            "apple": 3 * math.log(1 + mean_tokens / 3),
            "banana": 2 * math.log(1 + mean_tokens / 2),
            "fruit": 1 * math.log(1 + mean_tokens / 1),
        },
        1: {
            "carrot": 3 * math.log(1 + mean_tokens / 3),
            "potato": 2 * math.log(1 + mean_tokens / 2),
            "soup": 1 * math.log(1 + mean_tokens / 1),
        },
        2: {
            "stone": 3 * math.log(1 + mean_tokens / 3),
            "metal": 2 * math.log(1 + mean_tokens / 2),
            "ore": 1 * math.log(1 + mean_tokens / 1),
        },
    }
    for record in records:
        got = dict(record.ngrams)
        want = expected[record.topic_id]
        assert got.keys() == want.keys()
        for gram in want:
            assert got[gram] == pytest.approx(want[gram], abs=1e-9)
        scores = [s for _, s in record.ngrams]
        assert scores == sorted(scores, reverse=True)
        assert all(s > 0 for s in scores)
        assert record.size == 2


def test_ctfidf_zero_token_topic_warns(caplog):
    corpus = make_corpus(["x", "aa bb aa bb"])  # "x" tokenizes to nothing
    with caplog.at_level("WARNING"):
        records = ctfidf([0, 1], corpus, TokenizerConfig(min_count=1), top_n=5)
    empty = [r for r in records if r.topic_id == 0][0]
    assert empty.ngrams == []
    assert any("no scorable" in message for message in caplog.messages)


def test_ctfidf_respects_min_count():
    corpus = make_corpus(["aa bb", "aa cc"])
    records = ctfidf([0, 1], corpus, TokenizerConfig(min_count=2), top_n=5)
    # only "aa" reaches min_count across the corpus
    assert {g for r in records for g, _ in r.ngrams} == {"aa"}
