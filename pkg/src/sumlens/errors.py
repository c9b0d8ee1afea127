"""Exception types shared across the package."""


class SumlensError(Exception):
    """Base class for all package errors."""


class IngestError(SumlensError):
    """Raised when a corpus input file is missing, malformed, or inconsistent."""


class NotFoundError(SumlensError):
    """Raised when a corpus, document, model, or output id cannot be resolved."""


class LoadError(SumlensError):
    """Raised when a persisted index directory is incomplete or corrupt."""


class AnnotationError(SumlensError):
    """Raised when a standoff annotation record fails validation against its text."""


class MetricUndefined(SumlensError):
    """Raised when a metric has no defined value for the given inputs."""
