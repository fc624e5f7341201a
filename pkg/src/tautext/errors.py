"""Exception hierarchy with machine-readable codes."""
from __future__ import annotations


class TautextError(Exception):
    """Base class; ``code`` is a stable identifier surfaced in reports."""

    code = "error"

    def __init__(self, message: str, *, code: str | None = None):
        super().__init__(message)
        if code is not None:
            self.code = code


class DegenerateResultantError(TautextError):
    code = "resultant-degenerate"


class PointPolygonError(TautextError):
    code = "polygon-point"


class BudgetExceededError(TautextError):
    code = "budget-exceeded"


class ParseError(TautextError):
    code = "parse-error"


class LongitudeError(TautextError):
    code = "longitude-failed"


class IndeterminateError(TautextError):
    """Raised when a series truncation cannot decide a value."""

    code = "indeterminate"


class SeparationError(TautextError):
    code = "order-too-small"


class PoleError(TautextError):
    code = "pole"


class CertificationError(TautextError):
    code = "certification-failed"


class ValidationError(TautextError):
    code = "validation"


class MissingEntriesError(TautextError):
    code = "missing-entries"
