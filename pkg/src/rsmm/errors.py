"""Exception hierarchy shared across the toolkit."""

from __future__ import annotations


class RsmmError(Exception):
    """Base class for all toolkit errors."""


class ModelSyntaxError(RsmmError):
    """Model document is not well-formed; carries the source position."""

    def __init__(self, message: str, *, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"line {line}, column {column}: {message}"
        super().__init__(message)


class ModelValidationError(RsmmError):
    """Model document violates a structural rule; names the offending code."""

    def __init__(self, message: str, *, codes: tuple[str, ...] = ()):
        self.codes = codes
        super().__init__(message)


class UnknownPracticeError(RsmmError):
    """A practice code does not resolve in the active model."""

    def __init__(self, code: str):
        self.code = code
        super().__init__(f"unknown practice code: {code}")


class EvidenceError(RsmmError):
    """An evidence record or status transition violates an invariant."""


class AssessmentFormatError(RsmmError):
    """Assessment or answers document is malformed."""


class AssessmentNotFoundError(RsmmError):
    """No stored assessment with the requested id."""

    def __init__(self, assessment_id: str):
        self.assessment_id = assessment_id
        super().__init__(f"assessment not found: {assessment_id}")


class StaleVersionError(RsmmError):
    """A write carried an entity version that no longer matches the store."""

    def __init__(self, assessment_id: str, *, expected: str | None, actual: str | None):
        self.assessment_id = assessment_id
        self.expected = expected
        self.actual = actual
        super().__init__(f"stale version for assessment {assessment_id}")


class ProbeRuleError(RsmmError):
    """A probe rule file is malformed or references an unknown practice."""


class RemoteError(RsmmError):
    """Base class for hosting-platform access failures."""


class NetworkError(RemoteError):
    """Transport-level failure reaching the hosting platform."""


class AuthError(RemoteError):
    """The hosting platform rejected the supplied credentials."""


class RateLimitError(RemoteError):
    """The hosting platform rate limit persisted through bounded retries."""


class RepositoryNotFoundError(RemoteError):
    """The hosting platform reports no such repository."""


class UpstreamError(RemoteError):
    """The hosting platform failed server-side."""
