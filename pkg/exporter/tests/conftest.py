"""Shared fixture corpus and helpers for driving the consumer CLI."""

from __future__ import annotations

import random
import subprocess
import sys

import pytest

from modelexport.formats import write_corpus

AUDIT_CLI = [sys.executable, "-m", "topicaudit.cli"]


def fixture_sentences(n_topics: int = 20, per_topic: int = 10, seed: int = 7) -> list[str]:
    """200 synthetic sentences with clean topical vocabulary (freely usable)."""
    rng = random.Random(seed)
    vocab = {t: [f"topic{t:02d}word{w}" for w in range(8)] for t in range(n_topics)}
    sentences = []
    for t in range(n_topics):
        for _ in range(per_topic):
            sentences.append(" ".join(rng.choice(vocab[t]) for _ in range(6)))
    rng.shuffle(sentences)
    return sentences


def audit(*argv: str) -> subprocess.CompletedProcess:
    return subprocess.run(
        [*AUDIT_CLI, *argv], capture_output=True, text=True
    )


@pytest.fixture(scope="session")
def corpus_file(tmp_path_factory):
    path = tmp_path_factory.mktemp("fixture") / "corpus.json"
    write_corpus("fixture200", fixture_sentences(), path)
    return path
