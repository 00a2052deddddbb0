"""Neutral file formats for corpora, runs and embeddings.

Three formats move data into the system:

* corpus:     UTF-8 JSON ``{"corpus_id": str, "sentences": [{"id", "text"}]}``
* run:        UTF-8 JSON mirroring :class:`RunRecord` field names
* embeddings: one JSON header line ``{"corpus_id", "rows", "cols", "dtype":
  "f32le"}`` followed by rows*cols little-endian float32 values, row-major

Loaders canonicalize tolerantly (unsorted topics are re-sorted with a
warning); savers always emit the canonical form, so save(load(x)) is
byte-identical on canonical input.  All values are treated as immutable
after construction and are safe to share across threads.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, NamedTuple

import numpy as np

from .errors import FormatError, ValidationError

logger = logging.getLogger(__name__)

RUN_SOURCES = ("bertopic", "top2vec", "lda", "anchor", "other")


class Sentence(NamedTuple):
    sentence_id: int
    text: str


@dataclass
class Corpus:
    """Ordered collection of sentences; the unit of ingestion."""

    corpus_id: str
    sentences: list[Sentence]

    @property
    def size(self) -> int:
        return len(self.sentences)

    def texts(self) -> list[str]:
        return [s.text for s in self.sentences]


@dataclass
class TopicRecord:
    """One topic: its id, sentence count and scored n-grams (score-descending)."""

    topic_id: int
    size: int
    ngrams: list[tuple[str, float]]


@dataclass
class RunParams:
    """Model parameters attached to a run; unused fields stay None."""

    min_cluster_size: int | None = None
    min_topic_size: int | None = None
    n_neighbors: int | None = None
    threshold: float | None = None
    extra: dict[str, Any] = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        out: dict[str, Any] = {}
        if self.min_cluster_size is not None:
            out["min_cluster_size"] = self.min_cluster_size
        if self.min_topic_size is not None:
            out["min_topic_size"] = self.min_topic_size
        if self.n_neighbors is not None:
            out["n_neighbors"] = self.n_neighbors
        if self.threshold is not None:
            out["threshold"] = self.threshold
        if self.extra:
            out["extra"] = self.extra
        return out

    @classmethod
    def from_json_dict(cls, data: dict) -> "RunParams":
        known = {"min_cluster_size", "min_topic_size", "n_neighbors", "threshold", "extra"}
        unknown = set(data) - known
        if unknown:
            raise FormatError(f"unknown params fields: {sorted(unknown)}")
        return cls(
            min_cluster_size=data.get("min_cluster_size"),
            min_topic_size=data.get("min_topic_size"),
            n_neighbors=data.get("n_neighbors"),
            threshold=data.get("threshold"),
            extra=dict(data.get("extra", {})),
        )


@dataclass
class RunRecord:
    """One topic-model run: parameters, per-sentence assignments, topics.

    Topic id -1 marks sentences the model left unassigned; it never gets a
    TopicRecord.  Topics are kept sorted by size descending, ties broken by
    ascending topic_id.
    """

    run_id: str
    corpus_id: str
    source: str
    params: RunParams
    assignments: list[int]
    topics: list[TopicRecord]
    resorted: bool = field(default=False, compare=False, repr=False)

    @property
    def error_size(self) -> int:
        """Count of sentences assigned to the -1 outlier topic."""
        return sum(1 for a in self.assignments if a == -1)

    def topic_sizes(self) -> list[int]:
        return [t.size for t in self.topics]


@dataclass
class EmbeddingMatrix:
    """Dense float32 matrix, one row per corpus sentence."""

    corpus_id: str
    values: np.ndarray

    def __post_init__(self) -> None:
        self.values = np.ascontiguousarray(self.values, dtype=np.float32)
        if self.values.ndim != 2:
            raise ValidationError("embedding values must be a 2-D matrix")

    @property
    def rows(self) -> int:
        return int(self.values.shape[0])

    @property
    def cols(self) -> int:
        return int(self.values.shape[1])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, EmbeddingMatrix):
            return NotImplemented
        return self.corpus_id == other.corpus_id and np.array_equal(self.values, other.values)


@dataclass
class ValidationReport:
    """Accumulated invariant violations; empty means valid."""

    problems: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.problems

    def add(self, message: str) -> None:
        self.problems.append(message)


def _read_json(path: str | Path) -> Any:
    raw = Path(path).read_text(encoding="utf-8")
    try:
        return json.loads(raw)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: not valid JSON at line {exc.lineno} col {exc.colno}") from exc


def _dump_json(obj: Any) -> str:
    return json.dumps(obj, ensure_ascii=False, separators=(",", ":")) + "\n"


# -- corpus -----------------------------------------------------------------

def load_corpus(path: str | Path) -> Corpus:
    """Read and validate a corpus file."""
    data = _read_json(path)
    if not isinstance(data, dict) or "corpus_id" not in data or "sentences" not in data:
        raise FormatError(f"{path}: corpus file must contain corpus_id and sentences")
    if not isinstance(data["sentences"], list):
        raise FormatError(f"{path}: sentences must be a list")
    sentences = []
    for i, item in enumerate(data["sentences"]):
        if not isinstance(item, dict) or "id" not in item or "text" not in item:
            raise FormatError(f"{path}: sentence #{i} must be an object with id and text")
        if not isinstance(item["id"], int) or isinstance(item["id"], bool):
            raise FormatError(f"{path}: sentence #{i} id must be an integer")
        if not isinstance(item["text"], str):
            raise FormatError(f"{path}: sentence #{i} text must be a string")
        sentences.append(Sentence(item["id"], item["text"]))

    ids = [s.sentence_id for s in sentences]
    if len(set(ids)) != len(ids):
        dupes = sorted({i for i in ids if ids.count(i) > 1})
        raise ValidationError(f"{path}: duplicate sentence ids {dupes}")
    if sorted(ids) != list(range(len(ids))):
        raise ValidationError(f"{path}: sentence ids must be contiguous from 0")
    for s in sentences:
        if not s.text.strip():
            raise ValidationError(f"{path}: sentence {s.sentence_id} is empty after trimming")
    sentences.sort(key=lambda s: s.sentence_id)
    return Corpus(corpus_id=str(data["corpus_id"]), sentences=sentences)


def corpus_to_json(corpus: Corpus) -> str:
    return _dump_json(
        {
            "corpus_id": corpus.corpus_id,
            "sentences": [{"id": s.sentence_id, "text": s.text} for s in corpus.sentences],
        }
    )


def save_corpus(corpus: Corpus, path: str | Path) -> None:
    Path(path).write_text(corpus_to_json(corpus), encoding="utf-8")


# -- run --------------------------------------------------------------------

def _parse_topic(item: Any, where: str) -> TopicRecord:
    if not isinstance(item, dict):
        raise FormatError(f"{where}: topic entries must be objects")
    try:
        topic_id = item["topic_id"]
        size = item["size"]
        raw_ngrams = item["ngrams"]
    except KeyError as exc:
        raise FormatError(f"{where}: topic missing field {exc}") from exc
    if not isinstance(raw_ngrams, list):
        raise FormatError(f"{where}: topic {topic_id} ngrams must be a list")
    ngrams = []
    for pair in raw_ngrams:
        if not isinstance(pair, (list, tuple)) or len(pair) != 2:
            raise FormatError(f"{where}: topic {topic_id} ngram entries must be [text, score] pairs")
        gram, score = pair
        if not isinstance(gram, str):
            raise FormatError(f"{where}: topic {topic_id} ngram text must be a string")
        ngrams.append((gram, float(score)))
    return TopicRecord(topic_id=int(topic_id), size=int(size), ngrams=ngrams)


def _check_run_internal(run: RunRecord, where: str) -> None:
    """Raise ValidationError on any internal invariant violation."""
    for a in run.assignments:
        if a < -1:
            raise ValidationError(f"{where}: assignment value {a} below -1")
    seen_ids = [t.topic_id for t in run.topics]
    if len(set(seen_ids)) != len(seen_ids):
        raise ValidationError(f"{where}: duplicate topic_id in topics")
    for t in run.topics:
        if t.topic_id < 0:
            raise ValidationError(f"{where}: topic_id {t.topic_id} must be >= 0")
        if not t.ngrams:
            raise ValidationError(f"{where}: topic {t.topic_id} has an empty ngram list")
        grams = [g for g, _ in t.ngrams]
        if len(set(grams)) != len(grams):
            raise ValidationError(f"{where}: topic {t.topic_id} has duplicate ngrams")
        scores = [s for _, s in t.ngrams]
        if any(s < 0 for s in scores):
            raise ValidationError(f"{where}: topic {t.topic_id} has a negative score")
        if any(scores[i] < scores[i + 1] for i in range(len(scores) - 1)):
            raise ValidationError(f"{where}: topic {t.topic_id} scores are not non-increasing")
    assigned = {a for a in run.assignments if a >= 0}
    recorded = set(seen_ids)
    missing = assigned - recorded
    if missing:
        raise ValidationError(f"{where}: assignments use topic ids {sorted(missing)} with no TopicRecord")
    counts = {c: 0 for c in recorded}
    for a in run.assignments:
        if a >= 0:
            counts[a] += 1
    for t in run.topics:
        if t.size != counts[t.topic_id]:
            raise ValidationError(
                f"{where}: size mismatch topic {t.topic_id}: declared {t.size}, assigned {counts[t.topic_id]}"
            )


def load_run(path: str | Path, corpus: Corpus | None = None) -> RunRecord:
    """Read a run file; re-sorts unsorted topics (flagging the record).

    When a corpus is supplied, the assignment length and corpus_id are
    cross-checked as well.
    """
    data = _read_json(path)
    required = {"run_id", "corpus_id", "source", "params", "assignments", "topics"}
    if not isinstance(data, dict) or not required.issubset(data):
        missing = required - set(data) if isinstance(data, dict) else required
        raise FormatError(f"{path}: run file missing fields {sorted(missing)}")
    if data["source"] not in RUN_SOURCES:
        raise FormatError(f"{path}: unknown source {data['source']!r}")
    if not isinstance(data["assignments"], list) or not all(
        isinstance(a, int) and not isinstance(a, bool) for a in data["assignments"]
    ):
        raise FormatError(f"{path}: assignments must be a list of integers")

    topics = [_parse_topic(item, str(path)) for item in data["topics"]]
    run = RunRecord(
        run_id=str(data["run_id"]),
        corpus_id=str(data["corpus_id"]),
        source=str(data["source"]),
        params=RunParams.from_json_dict(data["params"]),
        assignments=list(data["assignments"]),
        topics=topics,
    )

    canonical = sorted(run.topics, key=lambda t: (-t.size, t.topic_id))
    if [t.topic_id for t in canonical] != [t.topic_id for t in run.topics]:
        logger.warning("%s: topics were not sorted by size; canonicalized", path)
        run.topics = canonical
        run.resorted = True

    _check_run_internal(run, str(path))
    if corpus is not None:
        if len(run.assignments) != corpus.size:
            raise ValidationError(
                f"{path}: {len(run.assignments)} assignments but corpus has {corpus.size} sentences"
            )
        if run.corpus_id != corpus.corpus_id:
            raise ValidationError(
                f"{path}: run is for corpus {run.corpus_id!r}, not {corpus.corpus_id!r}"
            )
    return run


def run_to_json(run: RunRecord) -> str:
    return _dump_json(
        {
            "run_id": run.run_id,
            "corpus_id": run.corpus_id,
            "source": run.source,
            "params": run.params.to_json_dict(),
            "assignments": run.assignments,
            "topics": [
                {
                    "topic_id": t.topic_id,
                    "size": t.size,
                    "ngrams": [[g, s] for g, s in t.ngrams],
                }
                for t in run.topics
            ],
        }
    )


def save_run(run: RunRecord, path: str | Path) -> None:
    Path(path).write_text(run_to_json(run), encoding="utf-8")


# -- embeddings ---------------------------------------------------------------

def load_embeddings(path: str | Path, corpus: Corpus | None = None) -> EmbeddingMatrix:
    """Read an embedding file: JSON header line + raw little-endian float32."""
    raw = Path(path).read_bytes()
    newline = raw.find(b"\n")
    if newline < 0:
        raise FormatError(f"{path}: missing header line")
    try:
        header = json.loads(raw[:newline].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise FormatError(f"{path}: header is not valid JSON: {exc}") from exc
    for key in ("corpus_id", "rows", "cols", "dtype"):
        if key not in header:
            raise FormatError(f"{path}: header missing {key}")
    if header["dtype"] != "f32le":
        raise FormatError(f"{path}: unsupported dtype {header['dtype']!r}")
    rows, cols = int(header["rows"]), int(header["cols"])
    if cols < 2:
        raise ValidationError(f"{path}: cols must be >= 2, got {cols}")
    payload = raw[newline + 1 :]
    expected = rows * cols * 4
    if len(payload) != expected:
        raise FormatError(
            f"{path}: payload is {len(payload)} bytes, expected {expected} ({rows}x{cols} float32)"
        )
    values = np.frombuffer(payload, dtype="<f4").reshape(rows, cols)
    matrix = EmbeddingMatrix(corpus_id=str(header["corpus_id"]), values=values.copy())
    zero_rows = np.flatnonzero(~matrix.values.any(axis=1))
    if zero_rows.size:
        raise ValidationError(f"{path}: all-zero embedding rows {zero_rows[:5].tolist()}")
    if corpus is not None and matrix.rows != corpus.size:
        raise ValidationError(
            f"{path}: {matrix.rows} rows but corpus has {corpus.size} sentences"
        )
    return matrix


def save_embeddings(matrix: EmbeddingMatrix, path: str | Path) -> None:
    header = {
        "corpus_id": matrix.corpus_id,
        "rows": matrix.rows,
        "cols": matrix.cols,
        "dtype": "f32le",
    }
    with open(path, "wb") as fh:
        fh.write(json.dumps(header, ensure_ascii=False, separators=(",", ":")).encode("utf-8"))
        fh.write(b"\n")
        fh.write(np.ascontiguousarray(matrix.values, dtype="<f4").tobytes())


# -- cross validation ---------------------------------------------------------

def validate_run(run: RunRecord, corpus: Corpus) -> ValidationReport:
    """Collect every invariant violation of a run against its corpus.

    Unlike the loaders this never raises; each problem becomes one report
    entry so callers can show all of them at once.
    """
    report = ValidationReport()
    if run.corpus_id != corpus.corpus_id:
        report.add(f"corpus_id mismatch: run has {run.corpus_id!r}, corpus is {corpus.corpus_id!r}")
    if len(run.assignments) != corpus.size:
        report.add(
            f"assignments length {len(run.assignments)} != corpus size {corpus.size}"
        )
    if run.source not in RUN_SOURCES:
        report.add(f"unknown source {run.source!r}")
    for a in run.assignments:
        if a < -1:
            report.add(f"assignment value {a} below -1")
            break

    seen_ids = [t.topic_id for t in run.topics]
    if len(set(seen_ids)) != len(seen_ids):
        report.add("duplicate topic_id in topics")
    counts: dict[int, int] = {}
    for a in run.assignments:
        if a >= 0:
            counts[a] = counts.get(a, 0) + 1
    recorded = set(seen_ids)
    for topic_id in sorted(set(counts) - recorded):
        report.add(f"assignments use topic {topic_id} with no TopicRecord")
    for t in run.topics:
        if t.topic_id < 0:
            report.add(f"topic_id {t.topic_id} must be >= 0")
            continue
        assigned = counts.get(t.topic_id, 0)
        if t.size != assigned:
            report.add(f"size mismatch topic {t.topic_id}: declared {t.size}, assigned {assigned}")
        if t.size < 1:
            report.add(f"topic {t.topic_id} has size < 1")
        if not t.ngrams:
            report.add(f"topic {t.topic_id} has an empty ngram list")
        else:
            grams = [g for g, _ in t.ngrams]
            if len(set(grams)) != len(grams):
                report.add(f"topic {t.topic_id} has duplicate ngrams")
            scores = [s for _, s in t.ngrams]
            if any(scores[i] < scores[i + 1] for i in range(len(scores) - 1)):
                report.add(f"topic {t.topic_id} scores are not non-increasing")
    sizes = [t.size for t in run.topics]
    if any(sizes[i] < sizes[i + 1] for i in range(len(sizes) - 1)):
        report.add("topics are not sorted by size descending")
    else:
        for i in range(len(run.topics) - 1):
            a, b = run.topics[i], run.topics[i + 1]
            if a.size == b.size and a.topic_id > b.topic_id:
                report.add("equal-size topics are not ordered by ascending topic_id")
                break
    return report
