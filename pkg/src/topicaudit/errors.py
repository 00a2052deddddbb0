"""Exception hierarchy shared by every topicaudit module.

The CLI maps these onto process exit codes, so new error conditions should
reuse one of the classes below rather than raising bare exceptions.
"""


class TopicAuditError(Exception):
    """Base class for all errors raised by this package."""


class FormatError(TopicAuditError):
    """A file could not be parsed as the expected interchange format."""


class ValidationError(TopicAuditError):
    """Parsed data violates a structural invariant."""


class UndefinedMetricError(TopicAuditError):
    """A metric was requested on input for which it has no value."""


class UndefinedCorrelationError(UndefinedMetricError):
    """Correlation is undefined (constant input vector)."""


class InsufficientTopicsError(TopicAuditError):
    """A run has fewer topics (or fewer scored n-grams) than the selection needs."""


class EmptyAnchorError(TopicAuditError):
    """No anchor sentence satisfied the selection rules."""


class ConflictError(TopicAuditError):
    """An append would overwrite an existing record."""


class ConfigError(TopicAuditError):
    """Invalid configuration value or unknown field name."""
