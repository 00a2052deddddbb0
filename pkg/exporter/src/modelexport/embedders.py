"""Sentence embedding backends.

The default backend is a sentence-transformers model (the usual
'all-MiniLM-L6-v2' baseline).  A fully offline fallback is the "hashNN"
family (e.g. "hash64"): every token hashes to a fixed pseudo-random unit
vector and a sentence is the normalized token sum, so the output depends
only on the text -- identical bytes on every invocation, no model download.
"""

from __future__ import annotations

import hashlib
import re
import struct

import numpy as np

_TOKEN_RE = re.compile(r"[A-Za-z0-9]{2,}")
_HASH_NAME = re.compile(r"^hash(\d+)$")

DEFAULT_MODEL = "all-MiniLM-L6-v2"


def _token_vector(token: str, dim: int) -> np.ndarray:
    out = np.empty(dim, dtype=np.float64)
    counter = 0
    filled = 0
    while filled < dim:
        digest = hashlib.sha256(f"{token}\x00{counter}".encode("utf-8")).digest()
        for offset in range(0, 32, 8):
            if filled == dim:
                break
            (raw,) = struct.unpack_from("<Q", digest, offset)
            out[filled] = raw / 2**63 - 1.0  # uniform in [-1, 1)
            filled += 1
        counter += 1
    return out


def hash_embed(sentences: list[str], dim: int) -> np.ndarray:
    values = np.empty((len(sentences), dim), dtype=np.float64)
    cache: dict[str, np.ndarray] = {}
    for row, text in enumerate(sentences):
        tokens = _TOKEN_RE.findall(text.lower())
        if tokens:
            acc = np.zeros(dim)
            for token in tokens:
                vec = cache.get(token)
                if vec is None:
                    vec = _token_vector(token, dim)
                    cache[token] = vec
                acc += vec
        else:
            # tokenless sentence: still needs a non-zero row
            acc = _token_vector(f"\x00row\x00{text}", dim)
        norm = np.linalg.norm(acc)
        if norm == 0.0:
            acc = _token_vector(f"\x00zero\x00{text}", dim)
            norm = np.linalg.norm(acc)
        values[row] = acc / norm
    return values.astype(np.float32)


def embed_sentences(sentences: list[str], model_name: str = DEFAULT_MODEL) -> np.ndarray:
    """Embed sentences with the named backend; raises RuntimeError on load failure."""
    match = _HASH_NAME.match(model_name)
    if match:
        dim = int(match.group(1))
        if dim < 2:
            raise RuntimeError(f"hash embedder needs >= 2 dimensions, got {dim}")
        return hash_embed(sentences, dim)
    try:
        from sentence_transformers import SentenceTransformer
    except ImportError as exc:
        raise RuntimeError(f"sentence-transformers is not installed: {exc}") from exc
    try:
        model = SentenceTransformer(model_name)
    except Exception as exc:  # model download/load failure
        raise RuntimeError(f"could not load embedding model {model_name!r}: {exc}") from exc
    values = model.encode(sentences, show_progress_bar=False, convert_to_numpy=True)
    return np.asarray(values, dtype=np.float32)
