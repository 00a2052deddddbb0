"""Writers for the topicaudit interchange formats.

These are this package's half of the file contract: corpus and run files
are compact UTF-8 JSON, embeddings are a JSON header line followed by raw
little-endian float32 values.  Everything emitted here must load cleanly
in the consuming tool, so topics are written pre-sorted (size descending,
topic id ascending on ties) and outlier sentences keep their -1 entries in
the assignments list.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

import numpy as np


def _dump(obj: Any) -> str:
    return json.dumps(obj, ensure_ascii=False, separators=(",", ":")) + "\n"


def write_corpus(corpus_id: str, sentences: list[str], path: str | Path) -> None:
    """Write a corpus file; sentence ids are assigned contiguously from 0."""
    cleaned = [text.strip() for text in sentences]
    if any(not text for text in cleaned):
        raise ValueError("corpus sentences must be non-empty after trimming")
    Path(path).write_text(
        _dump(
            {
                "corpus_id": corpus_id,
                "sentences": [{"id": i, "text": text} for i, text in enumerate(cleaned)],
            }
        ),
        encoding="utf-8",
    )


def read_corpus(path: str | Path) -> tuple[str, list[str]]:
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    sentences = sorted(data["sentences"], key=lambda s: s["id"])
    return str(data["corpus_id"]), [s["text"] for s in sentences]


def write_run(
    path: str | Path,
    run_id: str,
    corpus_id: str,
    source: str,
    params: dict[str, Any],
    assignments: list[int],
    topics: list[tuple[int, list[tuple[str, float]]]],
) -> None:
    """Write a run file from raw assignments and per-topic scored n-grams.

    ``topics`` maps topic_id -> scored n-grams; sizes are derived from the
    assignments and the topic list is canonically ordered.
    """
    counts: dict[int, int] = {}
    for topic in assignments:
        if topic >= 0:
            counts[topic] = counts.get(topic, 0) + 1
    by_id = dict(topics)
    missing = sorted(set(counts) - set(by_id))
    if missing:
        raise ValueError(f"assignments reference topics without n-grams: {missing}")
    records = []
    for topic_id in counts:
        ngrams = sorted(by_id[topic_id], key=lambda pair: (-pair[1], pair[0]))
        records.append(
            {
                "topic_id": topic_id,
                "size": counts[topic_id],
                "ngrams": [[gram, float(score)] for gram, score in ngrams],
            }
        )
    records.sort(key=lambda t: (-t["size"], t["topic_id"]))
    Path(path).write_text(
        _dump(
            {
                "run_id": run_id,
                "corpus_id": corpus_id,
                "source": source,
                "params": params,
                "assignments": [int(a) for a in assignments],
                "topics": records,
            }
        ),
        encoding="utf-8",
    )


def write_embeddings(corpus_id: str, values: np.ndarray, path: str | Path) -> None:
    matrix = np.ascontiguousarray(values, dtype="<f4")
    if matrix.ndim != 2:
        raise ValueError("embeddings must be a two-dimensional matrix")
    header = {
        "corpus_id": corpus_id,
        "rows": int(matrix.shape[0]),
        "cols": int(matrix.shape[1]),
        "dtype": "f32le",
    }
    with open(path, "wb") as fh:
        fh.write(json.dumps(header, ensure_ascii=False, separators=(",", ":")).encode("utf-8"))
        fh.write(b"\n")
        fh.write(matrix.tobytes())
