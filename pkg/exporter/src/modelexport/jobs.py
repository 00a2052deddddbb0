"""Export jobs: sample parameters, run models, emit interchange files.

All stochasticity lives here.  Each run samples its parameters and a
per-run seed from the job RNG and records them in params.extra, so a
stored run can always be traced back to what produced it.  Runs that fail
or come back with fewer topics than the cutoff are logged and skipped; the
job keeps going.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import models
from .embedders import DEFAULT_MODEL, embed_sentences
from .formats import read_corpus, write_embeddings, write_run

logger = logging.getLogger(__name__)

MIN_TOPICS_DEFAULT = 20


@dataclass(frozen=True)
class ParamGrid:
    """Inclusive sampling ranges for the clustering parameters."""

    min_cluster_size: tuple[int, int] = (5, 25)
    min_topic_size: tuple[int, int] = (10, 50)
    n_neighbors: tuple[int, int] = (2, 15)

    def __post_init__(self) -> None:
        for name in ("min_cluster_size", "min_topic_size", "n_neighbors"):
            lo, hi = getattr(self, name)
            if lo > hi or lo < 1:
                raise ValueError(f"empty or invalid range for {name}: ({lo}, {hi})")

    def sample(self, rng: random.Random) -> dict[str, int]:
        return {
            "min_cluster_size": rng.randint(*self.min_cluster_size),
            "min_topic_size": rng.randint(*self.min_topic_size),
            "n_neighbors": rng.randint(*self.n_neighbors),
        }


@dataclass
class ExportJob:
    corpus_path: Path
    model: str  # bertopic | top2vec | lda
    out_dir: Path
    n_runs: int = 1
    grid: ParamGrid = field(default_factory=ParamGrid)
    embedding_model: str = DEFAULT_MODEL
    embeddings_path: Path | None = None  # precomputed, for bertopic
    seed: int = 0
    min_topics: int = MIN_TOPICS_DEFAULT
    lda_topics: int = 20

    def __post_init__(self) -> None:
        if self.model not in ("bertopic", "top2vec", "lda"):
            raise ValueError(f"unknown model {self.model!r}")
        if self.n_runs < 1:
            raise ValueError("n_runs must be >= 1")


def _load_embedding_rows(path: Path) -> np.ndarray:
    import json

    raw = Path(path).read_bytes()
    newline = raw.index(b"\n")
    header = json.loads(raw[:newline].decode("utf-8"))
    return (
        np.frombuffer(raw[newline + 1 :], dtype="<f4")
        .reshape(int(header["rows"]), int(header["cols"]))
        .copy()
    )


def export_runs(job: ExportJob) -> list[Path]:
    """Execute the job; returns the run files written (possibly fewer than n_runs)."""
    corpus_id, sentences = read_corpus(job.corpus_path)
    job.out_dir.mkdir(parents=True, exist_ok=True)
    rng = random.Random(job.seed)

    embeddings = None
    if job.model == "bertopic":
        if job.embeddings_path is not None:
            embeddings = _load_embedding_rows(job.embeddings_path)
        else:
            embeddings = embed_sentences(sentences, job.embedding_model)

    emitted: list[Path] = []
    for index in range(job.n_runs):
        run_seed = rng.randrange(2**31)
        sampled = job.grid.sample(rng)
        run_id = f"{job.model}-{corpus_id}-{index:03d}"
        try:
            if job.model == "lda":
                assignments, topics = models.run_lda(
                    sentences, seed=run_seed, n_topics=job.lda_topics
                )
                params = {"extra": {"seed": run_seed, "n_topics": job.lda_topics}}
            elif job.model == "bertopic":
                assignments, topics = models.run_bertopic(
                    sentences,
                    seed=run_seed,
                    embeddings=embeddings,
                    **sampled,
                )
                params = {**sampled, "extra": {"seed": run_seed}}
            else:
                assignments, topics = models.run_top2vec(sentences, seed=run_seed)
                params = {"extra": {"seed": run_seed}}
        except Exception as exc:
            logger.error("run %s failed: %s", run_id, exc)
            continue

        n_topics = len({t for t in assignments if t >= 0})
        if n_topics < job.min_topics:
            logger.warning(
                "run %s produced %d topics (< %d); skipped", run_id, n_topics, job.min_topics
            )
            continue

        path = job.out_dir / f"{run_id}.json"
        write_run(
            path,
            run_id=run_id,
            corpus_id=corpus_id,
            source=job.model,
            params=params,
            assignments=assignments,
            topics=topics,
        )
        emitted.append(path)
        logger.info("wrote %s (%d topics)", path, n_topics)
    return emitted


def export_embeddings(
    corpus_path: Path, model_name: str, out_path: Path
) -> Path:
    """Embed every corpus sentence and write the binary matrix file."""
    corpus_id, sentences = read_corpus(corpus_path)
    values = embed_sentences(sentences, model_name)
    write_embeddings(corpus_id, values, out_path)
    return Path(out_path)
