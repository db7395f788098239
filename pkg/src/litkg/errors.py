"""Exception hierarchy shared across the package."""


class LitkgError(Exception):
    """Base class for all errors raised by this package."""


class ModelError(LitkgError):
    """An entity, IRI, or literal violates a structural invariant."""


class UnknownTermError(ModelError, LookupError):
    """A vocabulary lookup was asked for a term that does not exist."""


class ParseError(LitkgError):
    """Serialized graph data (N-Triples or Turtle) is malformed."""

    def __init__(self, message: str, line_no: int | None = None):
        self.line_no = line_no
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)


class IngestError(LitkgError):
    """A source dump cannot be read at all (I/O, wrong shape)."""


class AlignmentError(LitkgError):
    """Alignment inputs are inconsistent."""


class QaValidationError(AlignmentError):
    """A QA worksheet is incomplete or malformed."""

    def __init__(self, message: str, offending_rows: list[int] | None = None):
        self.offending_rows = offending_rows or []
        super().__init__(message)


class ClassificationError(LitkgError):
    """Role classification hit data outside its closed tables."""


class BuildError(LitkgError):
    """Graph assembly failed a hard invariant (e.g. dangling reference)."""


class ConnectorError(LitkgError):
    """A remote source failed after retries, or replay had no recording."""


class CacheMissError(ConnectorError):
    """Replay mode was asked for a request that was never recorded."""


class ConfigError(LitkgError):
    """A configuration file or parameter is invalid."""
