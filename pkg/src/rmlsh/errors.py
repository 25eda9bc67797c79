"""Exception types shared across the package."""


class CorpusFormatError(ValueError):
    """An input file violates the expected corpus layout."""


class DuplicateDocnoError(ValueError):
    """The same external document identifier appeared twice."""


class IndexFormatError(ValueError):
    """An on-disk artifact is corrupt or has an unsupported version."""


class ConfigError(ValueError):
    """A configuration value is out of its documented range."""


class EmptyQueryError(ValueError):
    """Every query term fell outside the collection vocabulary."""


class EmptyFeedbackError(ValueError):
    """No feedback documents could be retrieved for a query."""


class ZeroVarianceError(ValueError):
    """Paired differences have no variance, the t statistic is undefined."""


class UnjudgedQueryError(ValueError):
    """A query id is missing from the relevance judgments."""


class ArtifactExistsError(RuntimeError):
    """Refusing to overwrite an existing on-disk artifact without force."""
