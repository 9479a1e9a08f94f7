"""Exception types shared across the package."""


class CkGraphError(Exception):
    """Base class for every error this package raises deliberately."""


class GraphFormatError(CkGraphError):
    """Malformed graph data: bad ids, duplicates, dangling endpoints, unparsable text."""


class PreconditionError(CkGraphError):
    """An operation's precondition does not hold for the given input.

    ``reason`` is a stable machine-readable code (``"not-hereditary"``,
    ``"has-sink"``, ...); the message carries the human-readable diagnosis.
    """

    def __init__(self, reason: str, message: str):
        super().__init__(f"{reason}: {message}")
        self.reason = reason


class CertificateError(CkGraphError):
    """An internal verification failed.  This signals a bug, not bad input."""
