"""topicaudit: metric suite, run database and deterministic anchor model
for auditing topic-model runs.

Data enters through three neutral file formats (corpus, run, embeddings),
gets scored into a per-run metric vector, and accumulates in an append-only
store for cross-run statistics.  The anchor module builds fully
deterministic runs from high-frequency n-grams for comparison against
stochastic models.
"""

from .anchor import (
    Anchor,
    AnchorConfig,
    AnchorSet,
    assign,
    build_run,
    select_anchors,
    sweep,
)
from .errors import (
    ConfigError,
    ConflictError,
    EmptyAnchorError,
    FormatError,
    InsufficientTopicsError,
    TopicAuditError,
    UndefinedCorrelationError,
    UndefinedMetricError,
    ValidationError,
)
from .interchange import (
    Corpus,
    EmbeddingMatrix,
    RunParams,
    RunRecord,
    Sentence,
    TopicRecord,
    ValidationReport,
    load_corpus,
    load_embeddings,
    load_run,
    save_corpus,
    save_embeddings,
    save_run,
    validate_run,
)
from .metrics import (
    MetricReport,
    ReportConfig,
    coverage_stats,
    gini_lorenz,
    gini_score,
    metric_report,
    nfs,
    npmi_coherence,
    nuv,
    puv,
)
from .rundb import RunStore
from .stability import (
    StabilityResult,
    TopicNameLookup,
    stability_score,
    topic_name,
    update_lookup,
    wer,
)
from .stats import (
    CorrelationResult,
    Descriptives,
    correlate_runs,
    descriptives,
    spearman,
    unique_counts,
)
from .textproc import (
    NgramTable,
    TokenizerConfig,
    ctfidf,
    extract_ngrams,
    normalize_ngram,
    tokenize,
)

__version__ = "0.1.0"
