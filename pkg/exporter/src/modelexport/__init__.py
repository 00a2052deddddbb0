"""modelexport: run topic models and emit topicaudit interchange files."""

from .embedders import DEFAULT_MODEL, embed_sentences, hash_embed
from .formats import read_corpus, write_corpus, write_embeddings, write_run
from .jobs import ExportJob, ParamGrid, export_embeddings, export_runs

__version__ = "0.1.0"
